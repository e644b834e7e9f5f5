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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgalign/kg.hpp"

namespace kgalign {

/// Parameters of a synthetic pair of graphs with known alignment.
struct SynthSpec {
  std::size_t n_entities = 200;
  std::size_t n_relations = 20;
  std::size_t n_attributes = 12;
  /// Relationship triples per entity.
  double rel_density = 3.0;
  /// Non-name attribute triples per entity (fractional part is a coin flip).
  double attr_per_entity = 4.0;
  /// Size of the token vocabulary and of the planted dictionary.
  std::size_t dictionary_size = 300;
  /// Probability of dropping each non-name triple from the second graph.
  double drop_prob = 0.0;
  /// Share of the entity links used as training seeds.
  double seed_fraction = 0.3;
  std::uint64_t rng_seed = 7;
  /// Share of relations and attributes whose label survives (up to case)
  /// in the second graph.
  double shared_label_fraction = 0.5;
  /// Tokens in every entity's unique name value.
  std::size_t name_tokens = 3;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct SynthDataset {
  KnowledgeGraph g;
  KnowledgeGraph g2;
  /// Complete ground truth for entities, relations, attributes and values.
  AlignmentStore truth;
  /// Planted token dictionary, first-graph token to second-graph token.
  std::map<std::string, std::string> dictionary;
  /// Every entity link, by label.
  std::vector<LabelPair> entity_links;
  /// Number of non-name triples in the second graph before dropping.
  std::size_t undropped_rel_triples = 0;
  std::size_t undropped_attr_triples = 0;
};

/// Deterministic for a given spec (including rng_seed).
SynthDataset generate_synth(const SynthSpec& spec);

/// File names written by write_synth.
struct SynthFiles {
  static constexpr const char* kRel1 = "rel_triples_1";
  static constexpr const char* kAttr1 = "attr_triples_1";
  static constexpr const char* kRel2 = "rel_triples_2";
  static constexpr const char* kAttr2 = "attr_triples_2";
  static constexpr const char* kEntLinks = "ent_ILLs";
  static constexpr const char* kRelLinks = "rel_ILLs";
  static constexpr const char* kAttrLinks = "attr_ILLs";
  static constexpr const char* kDictionary = "dictionary";
};

/// Writes the five dataset files plus relation, attribute and dictionary
/// ground truth into dir (created if missing).
void write_synth(const SynthDataset& data, const std::filesystem::path& dir);

struct IllSplit {
  std::vector<LabelPair> train;
  std::vector<LabelPair> valid;
  std::vector<LabelPair> test;
};

/// Shuffles and splits by the given proportions (default 4:1:10); train and
/// valid sizes are rounded, the remainder goes to test. Throws Error when
/// fewer pairs than the proportions sum to are given.
IllSplit split_ills(std::span<const LabelPair> pairs, std::uint64_t rng_seed,
                    std::array<int, 3> proportions = {4, 1, 10});

/// Train share given as a fraction; the rest is split 1:10 into valid:test.
IllSplit split_ills_by_fraction(std::span<const LabelPair> pairs, double train_fraction,
                                std::uint64_t rng_seed);

}  // namespace kgalign
