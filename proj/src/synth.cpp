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

#include "kgalign/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "kgalign/error.hpp"

namespace kgalign {

void SynthSpec::validate() const {
  if (n_entities < 2) throw ConfigError("synthetic graph needs at least 2 entities");
  if (n_relations < 1 || n_attributes < 1) throw ConfigError("need at least one relation and attribute");
  if (!(rel_density > 0.0) || !(attr_per_entity > 0.0))
    throw ConfigError("rel_density and attr_per_entity must be positive");
  if (name_tokens < 1 || dictionary_size < name_tokens + 1)
    throw ConfigError("dictionary must be larger than the name length");
  if (!(drop_prob >= 0.0 && drop_prob < 1.0)) throw ConfigError("drop_prob must lie in [0, 1)");
  if (!(seed_fraction > 0.0 && seed_fraction < 1.0)) throw ConfigError("seed_fraction must lie in (0, 1)");
  if (!(shared_label_fraction >= 0.0 && shared_label_fraction <= 1.0))
    throw ConfigError("shared_label_fraction must lie in [0, 1]");
  // Distinct names need C(V, k) >= N.
  double combos = 1.0;
  for (std::size_t i = 0; i < name_tokens; ++i)
    combos = combos * static_cast<double>(dictionary_size - i) / static_cast<double>(i + 1);
  if (combos < static_cast<double>(n_entities) * 2.0)
    throw ConfigError("vocabulary too small for unique entity names");
  const double max_triples = static_cast<double>(n_entities) * static_cast<double>(n_entities - 1) *
                             static_cast<double>(n_relations);
  if (std::round(static_cast<double>(n_entities) * rel_density) > max_triples / 2.0)
    throw ConfigError("rel_density too high for the graph size");
  if (attr_per_entity > static_cast<double>(n_attributes) * 10.0)
    throw ConfigError("attr_per_entity too high for the attribute count");
}

namespace {

std::vector<std::size_t> permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

std::string join(const std::vector<std::string>& toks) {
  std::string s;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) s.push_back(' ');
    s += toks[i];
  }
  return s;
}

}  // namespace

SynthDataset generate_synth(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);
  const std::size_t n = spec.n_entities;
  const std::size_t vocab = spec.dictionary_size;

  SynthDataset out;
  std::vector<std::string> tokens(vocab), translated(vocab);
  const auto token_perm = permutation(vocab, rng);
  for (std::size_t i = 0; i < vocab; ++i) {
    tokens[i] = "w" + std::to_string(i);
    translated[i] = "x" + std::to_string(token_perm[i]);
    out.dictionary.emplace(tokens[i], translated[i]);
  }
  std::vector<double> zipf(vocab);
  for (std::size_t i = 0; i < vocab; ++i) zipf[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> pick_token(zipf.begin(), zipf.end());
  std::uniform_int_distribution<std::size_t> pick_uniform_token(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> pick_entity(0, n - 1);
  std::uniform_int_distribution<std::size_t> pick_relation(0, spec.n_relations - 1);
  std::uniform_int_distribution<std::size_t> pick_attribute(0, spec.n_attributes - 1);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution drop(spec.drop_prob);

  // Labels. Shared labels differ only in case so the same-name rule finds them.
  const auto ent_perm = permutation(n, rng);
  const auto rel_perm = permutation(spec.n_relations, rng);
  const auto attr_perm = permutation(spec.n_attributes, rng);
  auto shared_set = [&](std::size_t count) {
    auto order = permutation(count, rng);
    const auto k = static_cast<std::size_t>(std::llround(spec.shared_label_fraction * static_cast<double>(count)));
    return std::set<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  };
  const auto shared_rel = shared_set(spec.n_relations);
  const auto shared_attr = shared_set(spec.n_attributes);
  std::vector<std::string> rel1(spec.n_relations), rel2(spec.n_relations);
  for (std::size_t k = 0; k < spec.n_relations; ++k) {
    rel1[k] = "rel" + std::to_string(k);
    rel2[k] = shared_rel.contains(k) ? "Rel" + std::to_string(k) : "link" + std::to_string(rel_perm[k]);
  }
  std::vector<std::string> attr1(spec.n_attributes), attr2(spec.n_attributes);
  for (std::size_t k = 0; k < spec.n_attributes; ++k) {
    attr1[k] = "attr" + std::to_string(k);
    attr2[k] = shared_attr.contains(k) ? "Attr" + std::to_string(k) : "prop" + std::to_string(attr_perm[k]);
  }
  auto ent1 = [](std::size_t i) { return "e" + std::to_string(i); };
  auto ent2 = [&](std::size_t i) { return "f" + std::to_string(ent_perm[i]); };

  // Unique names: name_tokens distinct tokens drawn uniformly, unique as a set.
  std::vector<std::vector<std::size_t>> names(n);
  std::set<std::vector<std::size_t>> used_names;
  for (std::size_t i = 0; i < n; ++i) {
    while (true) {
      std::vector<std::size_t> name;
      while (name.size() < spec.name_tokens) {
        const auto t = pick_uniform_token(rng);
        if (std::find(name.begin(), name.end(), t) == name.end()) name.push_back(t);
      }
      auto key = name;
      std::sort(key.begin(), key.end());
      if (used_names.insert(key).second) {
        names[i] = std::move(name);
        break;
      }
    }
  }

  const auto target_rel = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.rel_density));
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> rel_triples;
  while (rel_triples.size() < target_rel) {
    const auto h = pick_entity(rng), t = pick_entity(rng);
    if (h == t) continue;
    rel_triples.emplace(h, pick_relation(rng), t);
  }

  struct AttrFact {
    std::size_t entity, attr;
    std::vector<std::size_t> value;
  };
  std::vector<AttrFact> facts;
  const double whole = std::floor(spec.attr_per_entity);
  std::bernoulli_distribution extra(spec.attr_per_entity - whole);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t count = static_cast<std::size_t>(whole) + (extra(rng) ? 1 : 0);
    std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;
    std::size_t attempts = 0;
    while (seen.size() < count && attempts++ < count * 50) {
      const auto a = pick_attribute(rng);
      std::vector<std::size_t> value{pick_token(rng)};
      if (coin(rng)) value.push_back(pick_token(rng));
      if (seen.emplace(a, value).second) facts.push_back({i, a, std::move(value)});
    }
  }

  auto surface = [&](const std::vector<std::size_t>& ids, bool second) {
    std::vector<std::string> w;
    for (auto t : ids) w.push_back(second ? translated[t] : tokens[t]);
    return join(w);
  };

  KnowledgeGraph::Builder b1, b2;
  for (std::size_t i = 0; i < n; ++i) b1.add_entity(ent1(i));
  std::vector<std::size_t> inverse(n);
  for (std::size_t i = 0; i < n; ++i) inverse[ent_perm[i]] = i;
  for (std::size_t j = 0; j < n; ++j) b2.add_entity(ent2(inverse[j]));

  for (const auto& [h, r, t] : rel_triples) {
    b1.add_rel_triple(ent1(h), rel1[r], ent1(t));
    ++out.undropped_rel_triples;
    if (!drop(rng)) b2.add_rel_triple(ent2(h), rel2[r], ent2(t));
  }
  std::vector<std::pair<std::string, std::string>> kept_values;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v1 = surface(names[i], false), v2 = surface(names[i], true);
    b1.add_attr_triple(ent1(i), "name", v1);
    b2.add_attr_triple(ent2(i), "Name", v2);
    kept_values.emplace_back(v1, v2);
  }
  for (const auto& f : facts) {
    const auto v1 = surface(f.value, false), v2 = surface(f.value, true);
    b1.add_attr_triple(ent1(f.entity), attr1[f.attr], v1);
    ++out.undropped_attr_triples;
    if (!drop(rng)) {
      b2.add_attr_triple(ent2(f.entity), attr2[f.attr], v2);
      kept_values.emplace_back(v1, v2);
    }
  }
  out.g = std::move(b1).build();
  out.g2 = std::move(b2).build();

  for (std::size_t i = 0; i < n; ++i) {
    out.truth.entities.insert(*out.g.find_entity(ent1(i)), *out.g2.find_entity(ent2(i)), Provenance::kSeed);
    out.entity_links.push_back({ent1(i), ent2(i)});
  }
  for (std::size_t k = 0; k < spec.n_relations; ++k) {
    auto l = out.g.find_relation(rel1[k]);
    auto r = out.g2.find_relation(rel2[k]);
    if (l && r) out.truth.relations.insert(*l, *r, Provenance::kSeed);
  }
  for (std::size_t k = 0; k < spec.n_attributes; ++k) {
    auto l = out.g.find_attribute(attr1[k]);
    auto r = out.g2.find_attribute(attr2[k]);
    if (l && r) out.truth.attributes.insert(*l, *r, Provenance::kSeed);
  }
  out.truth.attributes.insert(*out.g.find_attribute("name"), *out.g2.find_attribute("Name"), Provenance::kSeed);
  for (auto& [l, r] : kept_values) out.truth.values.emplace(ValuePair{l, r}, Provenance::kSeed);
  return out;
}

void write_synth(const SynthDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_rel_triples(data.g, dir / SynthFiles::kRel1);
  write_attr_triples(data.g, dir / SynthFiles::kAttr1);
  write_rel_triples(data.g2, dir / SynthFiles::kRel2);
  write_attr_triples(data.g2, dir / SynthFiles::kAttr2);
  write_pair_file(data.entity_links, dir / SynthFiles::kEntLinks);
  std::vector<LabelPair> rels, attrs, dict;
  for (const auto& p : data.truth.relations)
    rels.push_back({data.g.relation_label(p.left), data.g2.relation_label(p.right)});
  for (const auto& p : data.truth.attributes)
    attrs.push_back({data.g.attribute_label(p.left), data.g2.attribute_label(p.right)});
  for (const auto& [k, v] : data.dictionary) dict.push_back({k, v});
  write_pair_file(rels, dir / SynthFiles::kRelLinks);
  write_pair_file(attrs, dir / SynthFiles::kAttrLinks);
  write_pair_file(dict, dir / SynthFiles::kDictionary);
}

IllSplit split_ills(std::span<const LabelPair> pairs, std::uint64_t rng_seed,
                    std::array<int, 3> proportions) {
  const int total = proportions[0] + proportions[1] + proportions[2];
  if (proportions[0] < 0 || proportions[1] < 0 || proportions[2] < 0 || total <= 0)
    throw Error("split proportions must be non-negative with a positive sum");
  if (pairs.size() < static_cast<std::size_t>(total))
    throw Error("need at least " + std::to_string(total) + " entity links to split, got " +
                std::to_string(pairs.size()));
  std::vector<LabelPair> shuffled(pairs.begin(), pairs.end());
  std::mt19937_64 rng(rng_seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double n = static_cast<double>(shuffled.size());
  const auto n_train = static_cast<std::size_t>(std::llround(n * proportions[0] / total));
  const auto n_valid = static_cast<std::size_t>(std::llround(n * proportions[1] / total));
  IllSplit s;
  s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.valid.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                 shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  s.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), shuffled.end());
  return s;
}

IllSplit split_ills_by_fraction(std::span<const LabelPair> pairs, double train_fraction,
                                std::uint64_t rng_seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("train fraction must lie in (0, 1)");
  if (pairs.size() < 3) throw Error("need at least 3 entity links to split");
  std::vector<LabelPair> shuffled(pairs.begin(), pairs.end());
  std::mt19937_64 rng(rng_seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t n = shuffled.size();
  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 2);
  const std::size_t rest = n - n_train;
  const auto n_valid = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(rest) / 11.0)));
  IllSplit s;
  s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.valid.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                 shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  s.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), shuffled.end());
  return s;
}

}  // namespace kgalign
