// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgalign/text.hpp"

namespace kgalign {

using ValuePairText = std::pair<ValueText, ValueText>;

/// Word-translation probabilities P(target | source) learned by IBM Model 1
/// style EM over aligned value pairs.
class TranslationTable {
 public:
  struct Entry {
    std::string target;
    double prob;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Entries per source token, sorted by target token.
  const std::map<std::string, std::vector<Entry>, std::less<>>& probs() const { return probs_; }
  double prob(std::string_view source, std::string_view target) const;
  /// Most probable target; ties go to the lexicographically smaller token.
  std::optional<std::string> best(std::string_view source) const;
  bool knows(std::string_view source) const { return probs_.find(source) != probs_.end(); }

  std::size_t source_vocab_size() const { return probs_.size(); }
  const std::vector<std::string>& target_vocab() const { return target_vocab_; }
  int em_iterations() const { return em_iterations_; }

  /// Text export, one `source<TAB>target<TAB>probability` line per entry.
  void save(const std::filesystem::path& path) const;
  static TranslationTable load(const std::filesystem::path& path);

  friend bool operator==(const TranslationTable& a, const TranslationTable& b) {
    return a.probs_ == b.probs_;
  }

 private:
  friend TranslationTable train_translation(std::span<const ValuePairText>, int,
                                            std::vector<double>*);
  void finalize();

  std::map<std::string, std::vector<Entry>, std::less<>> probs_;
  std::map<std::string, std::string, std::less<>> best_;
  std::vector<std::string> target_vocab_;
  int em_iterations_ = 0;
};

/// Runs EM for the given number of iterations. Duplicate pairs count once.
/// When log_likelihood is non-null it receives the corpus log-likelihood
/// before the first iteration and after each one.
TranslationTable train_translation(std::span<const ValuePairText> pairs, int iterations,
                                   std::vector<double>* log_likelihood = nullptr);

/// Retrains from scratch on the augmented corpus with the same iteration count.
TranslationTable update_translation(const TranslationTable& old,
                                    std::span<const ValuePairText> all_pairs);

/// Token-wise argmax translation; unknown tokens pass through.
ValueText translate_value(const TranslationTable& table, const ValueText& v);

/// Deterministic unit-norm vector per token, seeded by a hash of the token.
class WordVectorProvider {
 public:
  explicit WordVectorProvider(std::size_t dimension = 100, std::uint64_t seed = 0)
      : dimension_(dimension), seed_(seed) {}

  std::size_t dimension() const { return dimension_; }
  void fill(std::string_view token, std::span<double> out) const;
  std::vector<double> vector(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

/// Mean of the token vectors, L2-normalised; all zeros for an empty value.
std::vector<double> embed_value(const WordVectorProvider& provider, const ValueText& v);

}  // namespace kgalign
