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

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "kgalign/error.hpp"
#include "kgalign/synth.hpp"
#include "oracles.hpp"

using namespace kgalign;

namespace {

std::vector<LabelPair> numbered(std::size_t n) {
  std::vector<LabelPair> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"l" + std::to_string(i), "r" + std::to_string(i)});
  return out;
}

std::string translate(const std::map<std::string, std::string>& dict, const std::string& raw) {
  std::string out;
  for (const auto& t : tokenize(raw)) out += (out.empty() ? "" : " ") + dict.at(t);
  return out;
}

}  // namespace

TEST_CASE("spec validation") {
  SynthSpec s;
  CHECK_NOTHROW(s.validate());
  s.drop_prob = 1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.seed_fraction = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.n_entities = 1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.dictionary_size = 3;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("without drops the graphs are isomorphic under the ground truth") {
  SynthSpec spec;
  spec.n_entities = 120;
  const auto d = generate_synth(spec);
  CHECK(d.truth.entities.size() == 120);
  CHECK(d.truth.relations.size() == d.g.num_relations());
  CHECK(d.truth.attributes.size() == d.g.num_attributes());
  CHECK(d.g.rel_triples().size() == d.g2.rel_triples().size());
  CHECK(d.g.attr_triples().size() == d.g2.attr_triples().size());
  std::set<RelTriple> mapped;
  for (const auto& t : d.g.rel_triples())
    mapped.insert({*d.truth.entities.right_of(t.head), *d.truth.relations.right_of(t.rel), *d.truth.entities.right_of(t.tail)});
  CHECK(mapped == std::set<RelTriple>(d.g2.rel_triples().begin(), d.g2.rel_triples().end()));
  std::set<std::tuple<EntityId, AttributeId, std::string>> attrs, attrs2;
  for (const auto& t : d.g.attr_triples())
    attrs.emplace(*d.truth.entities.right_of(t.head), *d.truth.attributes.right_of(t.attr), translate(d.dictionary, t.value.raw));
  for (const auto& t : d.g2.attr_triples()) attrs2.emplace(t.head, t.attr, t.value.raw);
  CHECK(attrs == attrs2);
}

TEST_CASE("names are unique and the dictionary is a bijection") {
  SynthSpec spec;
  const auto d = generate_synth(spec);
  CHECK(d.dictionary.size() == spec.dictionary_size);
  std::map<std::string, std::string> inverse;
  for (const auto& [k, v] : d.dictionary) CHECK(inverse.emplace(v, k).second);
  for (const auto& [k, v] : d.dictionary) CHECK(inverse.at(d.dictionary.at(k)) == k);
  const auto name = *d.g.find_attribute("name");
  std::set<std::set<std::string>> names;
  std::size_t named = 0;
  for (const auto& t : d.g.attr_triples())
    if (t.attr == name) {
      ++named;
      names.insert(std::set<std::string>(t.value.tokens.begin(), t.value.tokens.end()));
    }
  CHECK(named == spec.n_entities);
  CHECK(names.size() == spec.n_entities);
}

TEST_CASE("generation is deterministic per seed") {
  SynthSpec spec;
  spec.n_entities = 100;
  spec.rng_seed = 7;
  const auto a = generate_synth(spec);
  const auto b = generate_synth(spec);
  CHECK(a.g == b.g);
  CHECK(a.g2 == b.g2);
  CHECK(a.dictionary == b.dictionary);
  CHECK(a.entity_links == b.entity_links);
  oracle::TempDir da, db;
  write_synth(a, da.path());
  write_synth(b, db.path());
  for (const char* f : {SynthFiles::kRel1, SynthFiles::kAttr1, SynthFiles::kRel2, SynthFiles::kAttr2,
                        SynthFiles::kEntLinks, SynthFiles::kDictionary})
    CHECK(oracle::read_file(da / f) == oracle::read_file(db / f));
  spec.rng_seed = 8;
  CHECK_FALSE(generate_synth(spec).g == a.g);
}

TEST_CASE("written files hold the expected line counts") {
  SynthSpec spec;
  const auto d = generate_synth(spec);
  oracle::TempDir dir;
  write_synth(d, dir.path());
  const auto rel = static_cast<std::size_t>(std::llround(spec.n_entities * spec.rel_density));
  const auto attr = spec.n_entities * (1 + static_cast<std::size_t>(spec.attr_per_entity));
  CHECK(oracle::count_lines(dir / SynthFiles::kRel1) == rel);
  CHECK(oracle::count_lines(dir / SynthFiles::kRel2) == rel);
  CHECK(oracle::count_lines(dir / SynthFiles::kAttr1) == attr);
  CHECK(oracle::count_lines(dir / SynthFiles::kAttr2) == attr);
  CHECK(oracle::count_lines(dir / SynthFiles::kEntLinks) == spec.n_entities);
  CHECK(oracle::count_lines(dir / SynthFiles::kDictionary) == spec.dictionary_size);
  const auto g = load_graph(dir / SynthFiles::kRel1, dir / SynthFiles::kAttr1);
  // Ids follow file order on reload, so compare by label.
  CHECK(g.num_entities() == d.g.num_entities());
  CHECK(g.num_relations() == d.g.num_relations());
  CHECK(g.num_attributes() == d.g.num_attributes());
  auto rel_labels = [](const KnowledgeGraph& k) {
    std::vector<std::array<std::string, 3>> out;
    for (const auto& t : k.rel_triples())
      out.push_back({k.entity_label(t.head), k.relation_label(t.rel), k.entity_label(t.tail)});
    std::sort(out.begin(), out.end());
    return out;
  };
  auto attr_labels = [](const KnowledgeGraph& k) {
    std::vector<std::array<std::string, 3>> out;
    for (const auto& t : k.attr_triples())
      out.push_back({k.entity_label(t.head), k.attribute_label(t.attr), t.value.raw});
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(rel_labels(g) == rel_labels(d.g));
  CHECK(attr_labels(g) == attr_labels(d.g));
}

TEST_CASE("drops stay within a binomial bound and never touch names") {
  SynthSpec spec;
  spec.n_entities = 400;
  spec.drop_prob = 0.3;
  const auto d = generate_synth(spec);
  auto within = [&](std::size_t kept, std::size_t total) {
    const double mean = 0.7 * static_cast<double>(total);
    const double sd = std::sqrt(static_cast<double>(total) * 0.3 * 0.7);
    return std::abs(static_cast<double>(kept) - mean) <= 3.0 * sd;
  };
  const auto name2 = *d.g2.find_attribute("Name");
  std::size_t kept_attr = 0, names = 0;
  for (const auto& t : d.g2.attr_triples()) (t.attr == name2 ? names : kept_attr)++;
  CHECK(names == spec.n_entities);
  CHECK(within(d.g2.rel_triples().size(), d.undropped_rel_triples));
  CHECK(within(kept_attr, d.undropped_attr_triples));
}

TEST_CASE("every planted value pair follows from entity and attribute pairs") {
  SynthSpec spec;
  spec.n_entities = 80;
  spec.drop_prob = 0.3;
  const auto d = generate_synth(spec);
  std::set<ValuePair> reachable;
  for (const auto& p : d.truth.entities)
    for_each_aligned_value(d.g, d.g2, {p.left, p.right}, d.truth.attributes,
                           [&](const AttrTriple& l, const AttrTriple& r) {
                             if (translate(d.dictionary, l.value.raw) == r.value.raw)
                               reachable.insert({l.value.raw, r.value.raw});
                           });
  for (const auto& [vp, prov] : d.truth.values) CHECK(reachable.contains(vp));
}

TEST_CASE("4:1:10 split sizes, disjointness and determinism") {
  auto sizes = [](const IllSplit& s) { return std::array<std::size_t, 3>{s.train.size(), s.valid.size(), s.test.size()}; };
  CHECK(sizes(split_ills(numbered(15), 1)) == std::array<std::size_t, 3>{4, 1, 10});
  CHECK(sizes(split_ills(numbered(150), 1)) == std::array<std::size_t, 3>{40, 10, 100});
  CHECK_THROWS_AS(split_ills(numbered(14), 1), Error);
  const auto a = split_ills(numbered(97), 3), b = split_ills(numbered(97), 3);
  CHECK(a.train == b.train);
  CHECK(a.valid == b.valid);
  CHECK(a.test == b.test);
  std::set<LabelPair> all;
  for (const auto* part : {&a.train, &a.valid, &a.test}) all.insert(part->begin(), part->end());
  CHECK(all.size() == 97);
  CHECK(a.train.size() + a.valid.size() + a.test.size() == 97);
}

TEST_CASE("fractional split") {
  const auto s = split_ills_by_fraction(numbered(200), 0.3, 4);
  CHECK(s.train.size() == 60);
  CHECK(s.valid.size() == 13);
  CHECK(s.test.size() == 127);
  CHECK_THROWS_AS(split_ills_by_fraction(numbered(200), 1.0, 4), Error);
}
