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

#include <random>

#include "doctest.h"
#include "kgalign/attribute_model.hpp"
#include "kgalign/error.hpp"
#include "oracles.hpp"

using namespace kgalign;

namespace {

struct AttrFact {
  const char* entity;
  const char* attr;
  const char* value;
};

KnowledgeGraph build(std::initializer_list<AttrFact> facts, std::initializer_list<const char*> extra = {}) {
  KnowledgeGraph::Builder b;
  for (const char* e : extra) b.add_entity(e);
  for (const auto& f : facts) b.add_attr_triple(f.entity, f.attr, f.value);
  return std::move(b).build();
}

std::vector<bool> all_of(const KnowledgeGraph& g) { return std::vector<bool>(g.num_attributes(), true); }

// Hand-made value matrix: every slot is the given vector with the given attribute.
ValueEmbeddingMatrix manual(std::size_t entities, std::size_t slots, std::size_t dim) {
  ValueEmbeddingMatrix v;
  v.entities = entities;
  v.slots = slots;
  v.dim = dim;
  v.data.assign(entities * slots * dim, 0.0);
  v.slot_count.assign(entities, 0);
  v.layout.assign(entities * slots, AttrSlot{});
  return v;
}

void set_slot(ValueEmbeddingMatrix& v, std::size_t m, std::size_t i, AttributeId a, std::vector<double> vec) {
  std::copy(vec.begin(), vec.end(), v.data.begin() + static_cast<std::ptrdiff_t>((m * v.slots + i) * v.dim));
  v.layout[m * v.slots + i] = {a, 0};
  v.slot_count[m] = std::max(v.slot_count[m], i + 1);
}

}  // namespace

TEST_CASE("entities without frequent attributes get zero rows") {
  const auto g = build({{"e1", "a", "x"}, {"e2", "b", "y"}});
  std::vector<bool> freq(g.num_attributes(), false);
  freq[g.find_attribute("a")->index()] = true;
  const WordVectorProvider p(8, 0);
  const auto v = build_value_matrix(g, nullptr, p, 3, freq);
  const auto e2 = g.find_entity("e2")->index();
  CHECK(v.slot_count[e2] == 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t d = 0; d < 8; ++d) CHECK(v.slot(e2, i)[d] == 0.0);
}

TEST_CASE("partial fill leaves padding slots zero") {
  const auto g = build({{"e1", "a", "x"}});
  const WordVectorProvider p(8, 0);
  const auto v = build_value_matrix(g, nullptr, p, 2, all_of(g));
  CHECK(v.entities == 1);
  CHECK(v.slot_count[0] == 1);
  CHECK(oracle::norm({v.slot(0, 0), 8}) == doctest::Approx(1.0));
  CHECK(oracle::norm({v.slot(0, 1), 8}) == 0.0);
}

TEST_CASE("value matrix equals per-slot embeddings, translated on request") {
  const auto g = build({{"e1", "a", "alpha beta"}, {"e1", "b", "gamma"}, {"e2", "a", "beta"}, {"e3", "b", "alpha"},
                        {"e3", "a", "delta"}});
  const WordVectorProvider p(12, 4);
  const auto table = train_translation(
      std::vector<ValuePairText>{{ValueText("alpha"), ValueText("uno")}, {ValueText("beta"), ValueText("dos")}}, 5);
  for (const TranslationTable* t : {static_cast<const TranslationTable*>(nullptr), &table}) {
    const auto v = build_value_matrix(g, t, p, 2, all_of(g));
    for (std::size_t m = 0; m < 3; ++m) {
      const auto slots = top_m_attr_slots(g, EntityId(m), 2, all_of(g));
      REQUIRE(v.slot_count[m] == slots.size());
      for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& value = g.attr_triples()[slots[i].triple].value;
        const auto want = embed_value(p, t ? translate_value(*t, value) : value);
        CHECK(v.slot_info(m, i).attr == slots[i].attr);
        for (std::size_t d = 0; d < 12; ++d) CHECK(v.slot(m, i)[d] == doctest::Approx(want[d]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("aligned attributes share an id, unaligned ones never do") {
  const auto g = build({{"e1", "a1", "x"}, {"e1", "b", "y"}});
  const auto g2 = build({{"f1", "a1'", "x"}, {"f1", "c", "y"}});
  FrequentAttributes freq{all_of(g), all_of(g2)};
  OneToOnePairs<AttributeId, AttributeId> none;
  const auto plain = unify_attributes(g, g2, freq, none);
  for (auto l : plain.left)
    for (auto r : plain.right) CHECK(l != r);
  CHECK(plain.united == 4);

  const WordVectorProvider p(8, 0);
  const auto v = build_value_matrix(g, nullptr, p, 4, freq.left);
  const auto v2 = build_value_matrix(g2, nullptr, p, 4, freq.right);
  const auto s0 = entity_similarity_attr(v, v2, build_attr_slot_matrix(v, plain.left), build_attr_slot_matrix(v2, plain.right));
  CHECK(s0(0, 0) == 0.0);

  OneToOnePairs<AttributeId, AttributeId> pairs;
  pairs.insert(*g.find_attribute("a1"), *g2.find_attribute("a1'"), Provenance::kSeed);
  const auto unified = unify_attributes(g, g2, freq, pairs);
  CHECK(unified.left[g.find_attribute("a1")->index()] == unified.right[g2.find_attribute("a1'")->index()]);
  CHECK(unified.united == 3);
  const auto s1 = entity_similarity_attr(v, v2, build_attr_slot_matrix(v, unified.left),
                                         build_attr_slot_matrix(v2, unified.right));
  CHECK(s1(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("adding one attribute pair changes exactly the affected slots") {
  const auto g = build({{"e1", "a", "1"}, {"e1", "b", "2"}, {"e2", "a", "3"}, {"e2", "c", "4"}});
  const auto g2 = build({{"f1", "A", "1"}, {"f1", "B", "2"}, {"f2", "C", "3"}, {"f2", "B", "4"}});
  FrequentAttributes freq{all_of(g), all_of(g2)};
  const WordVectorProvider p(4, 0);
  const auto v = build_value_matrix(g, nullptr, p, 3, freq.left);
  const auto v2 = build_value_matrix(g2, nullptr, p, 3, freq.right);
  OneToOnePairs<AttributeId, AttributeId> before;
  before.insert(*g.find_attribute("a"), *g2.find_attribute("A"), Provenance::kSeed);
  auto after = before;
  after.insert(*g.find_attribute("b"), *g2.find_attribute("B"), Provenance::kAttributeView);
  const auto i0 = unify_attributes(g, g2, freq, before), i1 = unify_attributes(g, g2, freq, after);
  const auto l0 = build_attr_slot_matrix(v, i0.left), l1 = build_attr_slot_matrix(v, i1.left);
  const auto r0 = build_attr_slot_matrix(v2, i0.right), r1 = build_attr_slot_matrix(v2, i1.right);
  CHECK(l0.ids == l1.ids);
  const auto b2 = g2.find_attribute("B")->value;
  for (std::size_t m = 0; m < v2.entities; ++m)
    for (std::size_t i = 0; i < v2.slot_count[m]; ++i) {
      const bool affected = v2.slot_info(m, i).attr.value == b2;
      CHECK((r0.id(m, i) != r1.id(m, i)) == affected);
    }
}

TEST_CASE("entity similarity on single-slot fixtures") {
  auto v = manual(1, 1, 3), w = manual(1, 1, 3);
  set_slot(v, 0, 0, AttributeId(0), {0.0, 1.0, 0.0});
  set_slot(w, 0, 0, AttributeId(0), {0.0, 1.0, 0.0});
  AttributeSlotMatrix same{1, 1, {4}}, other{1, 1, {5}};
  CHECK(entity_similarity_attr(v, w, same, same)(0, 0) == doctest::Approx(1.0));
  CHECK(entity_similarity_attr(v, w, same, other)(0, 0) == 0.0);
}

TEST_CASE("entity similarity equals brute force on random fixtures and checks shapes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_slots(rng, 2, 2, 5, 3);
    const auto b = oracle::random_slots(rng, 2, 2, 5, 3);
    auto v = manual(2, 2, 5), w = manual(2, 2, 5);
    v.data = a.values;
    w.data = b.values;
    const AttributeSlotMatrix ia{2, 2, a.ids}, ib{2, 2, b.ids};
    const auto got = entity_similarity_attr(v, w, ia, ib);
    const auto want = oracle::brute_force_masked(a, b);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(got.data[i] - want.data[i]) <= 1e-12);
  }
  auto v = manual(2, 2, 5), w = manual(2, 2, 4);
  const AttributeSlotMatrix ids{2, 2, {0, 0, 0, 0}};
  CHECK_THROWS_AS(entity_similarity_attr(v, w, ids, ids), ShapeError);
  auto w2 = manual(2, 2, 5);
  const AttributeSlotMatrix bad{3, 2, {0, 0, 0, 0, 0, 0}};
  CHECK_THROWS_AS(entity_similarity_attr(v, w2, ids, bad), ShapeError);
}

TEST_CASE("unifying more attributes never lowers non-negative similarities") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = oracle::random_slots(rng, 4, 3, 4, 4);
    auto b = oracle::random_slots(rng, 5, 3, 4, 4);
    for (auto& x : a.values) x = u(rng);
    for (auto& x : b.values) x = u(rng);
    for (auto& i : b.ids)
      if (i >= 0) i += 10;  // disjoint from the left ids
    const auto before = oracle::brute_force_masked(a, b);
    auto merged = b;
    for (auto& i : merged.ids)
      if (i == 12) i = 2;  // align right attribute 12 with left attribute 2
    auto v = manual(4, 3, 4), w = manual(5, 3, 4);
    v.data = a.values;
    w.data = merged.values;
    const auto after = entity_similarity_attr(v, w, {4, 3, a.ids}, {5, 3, merged.ids});
    for (std::size_t i = 0; i < before.data.size(); ++i) CHECK(after.data[i] >= before.data[i] - 1e-12);
  }
}

TEST_CASE("slot order does not change similarity") {
  std::mt19937_64 rng(13);
  const auto a = oracle::random_slots(rng, 3, 4, 3, 3);
  const auto b = oracle::random_slots(rng, 3, 4, 3, 3);
  auto v = manual(3, 4, 3), w = manual(3, 4, 3);
  v.data = a.values;
  w.data = b.values;
  const auto base = entity_similarity_attr(v, w, {3, 4, a.ids}, {3, 4, b.ids});
  // Reverse the slots of every left entity.
  auto rv = v;
  auto rids = a.ids;
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t i = 0; i < 4; ++i) {
      rids[m * 4 + i] = a.ids[m * 4 + (3 - i)];
      for (std::size_t d = 0; d < 3; ++d) rv.data[(m * 4 + i) * 3 + d] = a.values[(m * 4 + (3 - i)) * 3 + d];
    }
  const auto permuted = entity_similarity_attr(rv, w, {3, 4, rids}, {3, 4, b.ids});
  for (std::size_t i = 0; i < base.data.size(); ++i) CHECK(permuted.data[i] == doctest::Approx(base.data[i]).epsilon(1e-12));
}

TEST_CASE("attribute pairs from slot similarities above tau_v") {
  auto v = manual(1, 2, 2), w = manual(1, 2, 2);
  // Slot similarity 0.85 between a0 and b0; every other slot pair stays below 0.6.
  set_slot(v, 0, 0, AttributeId(0), {1.0, 0.0});
  set_slot(w, 0, 0, AttributeId(0), {0.85, std::sqrt(1 - 0.85 * 0.85)});
  set_slot(v, 0, 1, AttributeId(1), {0.0, 1.0});
  set_slot(w, 0, 1, AttributeId(1), {-1.0, 0.0});
  OneToOnePairs<AttributeId, AttributeId> none;
  const std::vector<EntityPair> aligned{{EntityId(0), EntityId(0)}};
  const auto got = infer_attribute_pairs(v, w, aligned, none, 0.8);
  REQUIRE(got.size() == 1);
  CHECK(got[0].left == AttributeId(0));
  CHECK(got[0].right == AttributeId(0));
  CHECK(got[0].mean_similarity == doctest::Approx(0.85));
  // Already aligned attributes are not proposed again.
  OneToOnePairs<AttributeId, AttributeId> known;
  known.insert(AttributeId(0), AttributeId(1), Provenance::kSeed);
  CHECK(infer_attribute_pairs(v, w, aligned, known, 0.8).empty());
  CHECK(infer_attribute_pairs(v, w, {}, none, 0.8).empty());
}

TEST_CASE("attribute pair votes resolve one-to-one by count") {
  auto v = manual(2, 1, 2), w = manual(2, 2, 2);
  for (std::size_t m = 0; m < 2; ++m) {
    set_slot(v, m, 0, AttributeId(0), {1.0, 0.0});
    set_slot(w, m, 0, AttributeId(5), {1.0, 0.0});
  }
  set_slot(w, 0, 1, AttributeId(6), {1.0, 0.0});
  OneToOnePairs<AttributeId, AttributeId> none;
  const std::vector<EntityPair> aligned{{EntityId(0), EntityId(0)}, {EntityId(1), EntityId(1)}};
  const auto got = infer_attribute_pairs(v, w, aligned, none, 0.8);
  REQUIRE(got.size() == 1);
  CHECK(got[0].right == AttributeId(5));
  CHECK(got[0].votes == 2);
}

TEST_CASE("value pairs follow aligned entities and attributes") {
  const auto g = build({{"e1", "a", "x"}, {"e1", "b", "nope"}, {"e2", "a", "y"}, {"e3", "a", "z"}});
  const auto g2 = build({{"f1", "A", "X"}, {"f2", "A", "Y"}, {"f2", "A", "Y2"}, {"f3", "A", "Z"}});
  OneToOnePairs<AttributeId, AttributeId> attrs;
  attrs.insert(*g.find_attribute("a"), *g2.find_attribute("A"), Provenance::kSeed);
  const std::vector<EntityPair> aligned{{*g.find_entity("e1"), *g2.find_entity("f1")},
                                        {*g.find_entity("e2"), *g2.find_entity("f2")}};
  std::map<ValuePair, Provenance> known{{ValuePair{"x", "X"}, Provenance::kSeed}};
  const auto got = infer_value_pairs(g, g2, aligned, attrs, known);
  // Enumerated by hand: e2~f2 gives two pairs; e1~f1 is known; e3 is not aligned.
  CHECK(got == std::vector<ValuePair>{{"y", "Y"}, {"y", "Y2"}});
}
