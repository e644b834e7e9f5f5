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

#include "kgalign/translator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_map>

#include "kgalign/error.hpp"

namespace kgalign {

double TranslationTable::prob(std::string_view source, std::string_view target) const {
  auto it = probs_.find(source);
  if (it == probs_.end()) return 0.0;
  auto e = std::lower_bound(it->second.begin(), it->second.end(), target,
                            [](const Entry& x, std::string_view t) { return x.target < t; });
  return (e != it->second.end() && e->target == target) ? e->prob : 0.0;
}

std::optional<std::string> TranslationTable::best(std::string_view source) const {
  auto it = best_.find(source);
  if (it == best_.end()) return std::nullopt;
  return it->second;
}

void TranslationTable::finalize() {
  best_.clear();
  std::set<std::string> targets;
  for (const auto& [src, entries] : probs_) {
    const Entry* top = nullptr;
    for (const auto& e : entries) {
      targets.insert(e.target);
      // entries are sorted by target, so strict > keeps the smaller token on ties
      if (!top || e.prob > top->prob) top = &e;
    }
    if (top) best_.emplace(src, top->target);
  }
  target_vocab_.assign(targets.begin(), targets.end());
}

void TranslationTable::save(const std::filesystem::path& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write " + path.string());
  for (const auto& [src, entries] : probs_)
    for (const auto& e : entries)
      std::fprintf(f, "%s\t%s\t%.17g\n", src.c_str(), e.target.c_str(), e.prob);
  std::fclose(f);
}

TranslationTable TranslationTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  TranslationTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos || line.find('\t', b + 1) != std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    char* end = nullptr;
    const std::string num = line.substr(b + 1);
    const double p = std::strtod(num.c_str(), &end);
    if (end == num.c_str()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad probability");
    t.probs_[line.substr(0, a)].push_back({line.substr(a + 1, b - a - 1), p});
  }
  for (auto& [src, entries] : t.probs_)
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.target < y.target; });
  t.finalize();
  return t;
}

namespace {

struct Corpus {
  std::vector<std::string> source_vocab, target_vocab;
  std::vector<std::vector<std::uint32_t>> source, target;
};

Corpus intern_corpus(std::span<const ValuePairText> pairs) {
  std::set<std::pair<std::string, std::string>> seen;
  std::unordered_map<std::string, std::uint32_t> s_index, t_index;
  Corpus c;
  auto intern = [](auto& index, auto& vocab, const std::string& w) {
    auto [it, fresh] = index.emplace(w, static_cast<std::uint32_t>(vocab.size()));
    if (fresh) vocab.push_back(w);
    return it->second;
  };
  for (const auto& [src, tgt] : pairs) {
    if (src.tokens.empty() || tgt.tokens.empty()) continue;
    if (!seen.emplace(src.raw, tgt.raw).second) continue;
    std::vector<std::uint32_t> s, t;
    for (const auto& w : src.tokens) s.push_back(intern(s_index, c.source_vocab, w));
    for (const auto& w : tgt.tokens) t.push_back(intern(t_index, c.target_vocab, w));
    c.source.push_back(std::move(s));
    c.target.push_back(std::move(t));
  }
  return c;
}

}  // namespace

TranslationTable train_translation(std::span<const ValuePairText> pairs, int iterations,
                                   std::vector<double>* log_likelihood) {
  if (iterations < 1) throw Error("translation training needs at least one EM iteration");
  const Corpus c = intern_corpus(pairs);
  if (c.source.empty()) throw Error("no trainable tokens");

  // Co-occurrence structure: for each source token the sorted list of target
  // tokens it appears with; prob and count arrays share that layout.
  const std::size_t n_src = c.source_vocab.size();
  std::vector<std::vector<std::uint32_t>> cooc(n_src);
  for (std::size_t p = 0; p < c.source.size(); ++p)
    for (auto s : c.source[p])
      cooc[s].insert(cooc[s].end(), c.target[p].begin(), c.target[p].end());
  std::vector<std::size_t> offset(n_src + 1, 0);
  for (std::size_t s = 0; s < n_src; ++s) {
    std::sort(cooc[s].begin(), cooc[s].end());
    cooc[s].erase(std::unique(cooc[s].begin(), cooc[s].end()), cooc[s].end());
    offset[s + 1] = offset[s] + cooc[s].size();
  }
  std::vector<double> prob(offset[n_src]);
  for (std::size_t s = 0; s < n_src; ++s)
    for (std::size_t k = offset[s]; k < offset[s + 1]; ++k) prob[k] = 1.0 / static_cast<double>(cooc[s].size());

  auto slot = [&](std::uint32_t s, std::uint32_t t) {
    const auto& row = cooc[s];
    return offset[s] + static_cast<std::size_t>(std::lower_bound(row.begin(), row.end(), t) - row.begin());
  };
  // Per pair, the flat (source position x target position) slot indices.
  std::vector<std::vector<std::size_t>> slots(c.source.size());
  for (std::size_t p = 0; p < c.source.size(); ++p)
    for (auto t : c.target[p])
      for (auto s : c.source[p]) slots[p].push_back(slot(s, t));

  auto corpus_ll = [&] {
    double ll = 0.0;
    for (std::size_t p = 0; p < c.source.size(); ++p) {
      const std::size_t ns = c.source[p].size();
      for (std::size_t j = 0; j < c.target[p].size(); ++j) {
        double z = 0.0;
        for (std::size_t i = 0; i < ns; ++i) z += prob[slots[p][j * ns + i]];
        ll += std::log(z / static_cast<double>(ns));
      }
    }
    return ll;
  };
  if (log_likelihood) log_likelihood->assign(1, corpus_ll());

  std::vector<double> counts(prob.size());
  for (int it = 0; it < iterations; ++it) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t p = 0; p < c.source.size(); ++p) {
      const std::size_t ns = c.source[p].size();
      for (std::size_t j = 0; j < c.target[p].size(); ++j) {
        const std::size_t* row = &slots[p][j * ns];
        double z = 0.0;
        for (std::size_t i = 0; i < ns; ++i) z += prob[row[i]];
        for (std::size_t i = 0; i < ns; ++i) counts[row[i]] += prob[row[i]] / z;
      }
    }
    for (std::size_t s = 0; s < n_src; ++s) {
      double total = 0.0;
      for (std::size_t k = offset[s]; k < offset[s + 1]; ++k) total += counts[k];
      for (std::size_t k = offset[s]; k < offset[s + 1]; ++k) prob[k] = counts[k] / total;
    }
    if (log_likelihood) log_likelihood->push_back(corpus_ll());
  }

  TranslationTable table;
  table.em_iterations_ = iterations;
  for (std::size_t s = 0; s < n_src; ++s) {
    std::vector<TranslationTable::Entry> entries;
    for (std::size_t k = offset[s]; k < offset[s + 1]; ++k)
      if (prob[k] > 0.0) entries.push_back({c.target_vocab[cooc[s][k - offset[s]]], prob[k]});
    std::sort(entries.begin(), entries.end(),
              [](const auto& x, const auto& y) { return x.target < y.target; });
    table.probs_.emplace(c.source_vocab[s], std::move(entries));
  }
  table.finalize();
  return table;
}

TranslationTable update_translation(const TranslationTable& old,
                                    std::span<const ValuePairText> all_pairs) {
  return train_translation(all_pairs, std::max(1, old.em_iterations()));
}

ValueText translate_value(const TranslationTable& table, const ValueText& v) {
  std::vector<std::string> out;
  out.reserve(v.tokens.size());
  for (const auto& w : v.tokens) {
    auto best = table.best(w);
    out.push_back(best ? *best : w);
  }
  return ValueText::from_tokens(std::move(out));
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

void WordVectorProvider::fill(std::string_view token, std::span<double> out) const {
  if (out.size() != dimension_) throw ShapeError("word vector buffer has wrong dimension");
  std::uint64_t state = fnv1a(token) ^ (seed_ * 0x9E3779B97F4A7C15ull);
  constexpr double kTwoPi = 6.283185307179586476925;
  double norm = 0.0;
  for (std::size_t i = 0; i < dimension_; i += 2) {
    // Box-Muller on 53-bit uniforms in (0, 1]
    const double u1 = (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[i] = r * std::cos(kTwoPi * u2);
    if (i + 1 < dimension_) out[i + 1] = r * std::sin(kTwoPi * u2);
  }
  for (double x : out) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : out) x /= norm;
}

std::vector<double> WordVectorProvider::vector(std::string_view token) const {
  std::vector<double> v(dimension_);
  fill(token, v);
  return v;
}

std::vector<double> embed_value(const WordVectorProvider& provider, const ValueText& v) {
  std::vector<double> acc(provider.dimension(), 0.0), tmp(provider.dimension());
  if (v.tokens.empty()) return acc;
  for (const auto& w : v.tokens) {
    provider.fill(w, tmp);
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += tmp[d];
  }
  double norm = 0.0;
  for (double x : acc) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& x : acc) x /= norm;
  return acc;
}

}  // namespace kgalign
