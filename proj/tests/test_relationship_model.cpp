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
#include "kgalign/error.hpp"
#include "kgalign/merge.hpp"
#include "kgalign/relationship_model.hpp"
#include "kgalign/synth.hpp"
#include "oracles.hpp"

using namespace kgalign;

namespace {

KnowledgeGraph rel_graph(std::initializer_list<std::array<const char*, 3>> triples) {
  KnowledgeGraph::Builder b;
  for (const auto& t : triples) b.add_rel_triple(t[0], t[1], t[2]);
  return std::move(b).build();
}

RelTriple T(int h, int r, int t) { return {EntityId(h), RelationId(r), EntityId(t)}; }

std::vector<TrainingPair> random_batch(std::mt19937_64& rng, const EmbeddingTable& emb, std::size_t size) {
  std::uniform_int_distribution<std::size_t> e(0, emb.n_entities - 1), r(0, emb.n_relations - 1);
  std::vector<TrainingPair> batch;
  for (std::size_t i = 0; i < size; ++i) {
    const RelTriple pos{EntityId(e(rng)), RelationId(r(rng)), EntityId(e(rng))};
    RelTriple neg = pos;
    neg.tail = EntityId(e(rng));
    batch.push_back({pos, neg});
  }
  return batch;
}

}  // namespace

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK(c.dim == 75);
  CHECK(c.margin == 1.0);
  CHECK_NOTHROW(c.validate());
  c.dim = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.margin = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.negatives_per_positive = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("swapping a single entity seed") {
  const auto g = rel_graph({{"h", "r", "e"}});
  const auto g2 = rel_graph({{"x", "q", "e'"}});
  AlignmentStore store;
  store.entities.insert(*g.find_entity("e"), *g2.find_entity("e'"), Provenance::kSeed);
  const auto layout = JointLayout::of(g, g2);
  const auto out = swap_triplets(g, g2, store);
  const RelTriple want{*g.find_entity("h"), *g.find_relation("r"), layout.right_entity(*g2.find_entity("e'"))};
  CHECK(std::find(out.begin(), out.end(), want) != out.end());
  CHECK(out.size() == 4);
}

TEST_CASE("no seeds leaves the union of both triple sets") {
  const auto g = rel_graph({{"a", "r", "b"}, {"b", "r", "c"}});
  const auto g2 = rel_graph({{"x", "s", "y"}});
  const auto out = swap_triplets(g, g2, AlignmentStore{});
  CHECK(out == std::vector<RelTriple>{T(0, 0, 1), T(1, 0, 2), T(3, 1, 4)});
}

TEST_CASE("swap closure with two entity seeds and one relation seed") {
  const auto g = rel_graph({{"a", "r", "b"}, {"b", "s", "c"}});
  const auto g2 = rel_graph({{"A", "R", "B"}});
  AlignmentStore store;
  store.entities.insert(*g.find_entity("a"), *g2.find_entity("A"), Provenance::kSeed);
  store.entities.insert(*g.find_entity("b"), *g2.find_entity("B"), Provenance::kSeed);
  store.relations.insert(*g.find_relation("r"), *g2.find_relation("R"), Provenance::kSeed);
  // Joint ids: a b c = 0 1 2, A B = 3 4; r s = 0 1, R = 2. Enumerated by hand.
  std::vector<RelTriple> want{T(0, 0, 1), T(1, 1, 2), T(3, 2, 4),                 // originals
                              T(3, 0, 1), T(0, 0, 4), T(0, 2, 1),                 // from (a, r, b)
                              T(4, 1, 2),                                         // from (b, s, c)
                              T(0, 2, 4), T(3, 2, 1), T(3, 0, 4)};                // from (A, R, B)
  std::sort(want.begin(), want.end());
  CHECK(swap_triplets(g, g2, store) == want);
}

TEST_CASE("TransE energy") {
  EmbeddingTable emb(3, 1, 3);
  auto set = [](std::span<double> dst, std::vector<double> v) { std::copy(v.begin(), v.end(), dst.begin()); };
  set(emb.entity(EntityId(0)), {1, 2, 3});
  set(emb.relation(RelationId(0)), {0.5, -1, 2});
  set(emb.entity(EntityId(1)), {1.5, 1, 5});
  CHECK(transe_energy(emb, EntityId(0), RelationId(0), EntityId(1)) == doctest::Approx(0.0));
  set(emb.entity(EntityId(2)), {0.5, 2.5, 4});
  // h + r - t = (1, -1.5, 1) by hand.
  CHECK(transe_energy(emb, EntityId(0), RelationId(0), EntityId(2)) ==
        doctest::Approx(std::sqrt(1 + 2.25 + 1)).epsilon(1e-12));
  EmbeddingTable zero(2, 1, 3);
  set(zero.entity(EntityId(1)), {0, 1, 0});
  CHECK(transe_energy(zero, EntityId(0), RelationId(0), EntityId(1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(transe_energy(zero, EntityId(5), RelationId(0), EntityId(1)), LookupError);
  CHECK_THROWS_AS(transe_energy(zero, EntityId(0), RelationId(3), EntityId(1)), LookupError);
}

TEST_CASE("initialisation is bounded and entity rows are normalised") {
  const JointLayout layout{4, 3, 2, 1};
  TrainConfig cfg;
  cfg.dim = 10;
  const auto emb = init_embeddings(layout, cfg);
  CHECK(emb.n_entities == 7);
  CHECK(emb.n_relations == 3);
  for (std::size_t e = 0; e < 7; ++e) CHECK(oracle::norm(emb.entity(EntityId(e))) == doctest::Approx(1.0));
  const double bound = 6.0 / std::sqrt(10.0);
  for (double x : emb.rel) CHECK(std::abs(x) <= bound);
  CHECK(init_embeddings(layout, cfg) == emb);
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(17);
  const JointLayout layout{5, 4, 2, 2};
  TrainConfig cfg;
  cfg.dim = 6;
  for (int b = 0; b < 5; ++b) {
    cfg.rng_seed = static_cast<std::uint64_t>(b + 1);
    const auto emb = init_embeddings(layout, cfg);
    const auto batch = random_batch(rng, emb, 8);
    const double margin = 2.0;  // keeps most hinges active
    const auto analytic = margin_loss_gradient(emb, batch, margin);
    const auto numeric = oracle::numeric_gradient(emb, batch, margin, 1e-5);
    auto close = [](const std::vector<double>& a, const std::vector<double>& n) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - n[i]));
        scale = std::max(scale, std::abs(n[i]));
      }
      return diff <= 1e-4 * std::max(scale, 1.0);
    };
    CHECK(close(analytic.ent, numeric.ent));
    CHECK(close(analytic.rel, numeric.rel));
  }
}

TEST_CASE("zero epochs return the initialisation") {
  const auto g = rel_graph({{"a", "r", "b"}});
  const auto g2 = rel_graph({{"x", "r", "y"}});
  const auto layout = JointLayout::of(g, g2);
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.dim = 8;
  const auto triples = swap_triplets(g, g2, AlignmentStore{});
  CHECK(train_transe(triples, layout, cfg) == init_embeddings(layout, cfg));
}

TEST_CASE("a single triple is pushed past the margin") {
  KnowledgeGraph::Builder b;
  b.add_rel_triple("a", "r", "b");
  for (const char* e : {"c", "d", "e"}) b.add_entity(e);
  const auto g = std::move(b).build();
  const auto g2 = rel_graph({{"x", "s", "y"}});
  const auto layout = JointLayout::of(g, g2);
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 800;
  cfg.learning_rate = 0.05;
  const auto emb = train_transe(swap_triplets(g, g2, AlignmentStore{}), layout, cfg);
  const double pos = transe_energy(emb, EntityId(0), RelationId(0), EntityId(1));
  for (int c : {2, 3, 4}) {
    CHECK(pos + cfg.margin <= transe_energy(emb, EntityId(0), RelationId(0), EntityId(c)) + 1e-6);
    CHECK(pos + cfg.margin <= transe_energy(emb, EntityId(c), RelationId(0), EntityId(1)) + 1e-6);
  }
}

TEST_CASE("training properties on a synthetic graph") {
  SynthSpec spec;
  spec.n_entities = 100;
  spec.rng_seed = 3;
  const auto data = generate_synth(spec);
  const auto split = split_ills_by_fraction(data.entity_links, 0.3, 1);
  const auto seeds = build_initial_seeds(data.g, data.g2, split.train);
  const auto layout = JointLayout::of(data.g, data.g2);
  const auto triples = swap_triplets(data.g, data.g2, seeds);
  TrainConfig cfg;
  cfg.epochs = 200;
  TrainStats stats;
  const auto emb = train_transe(triples, layout, cfg, &stats);

  SUBCASE("deterministic per seed") {
    CHECK(train_transe(triples, layout, cfg) == emb);
    TrainConfig other = cfg;
    other.rng_seed = 99;
    CHECK_FALSE(train_transe(triples, layout, other) == emb);
  }
  SUBCASE("entity vectors stay normalised") {
    for (std::size_t e = 0; e < layout.entities(); ++e)
      CHECK(std::abs(oracle::norm(emb.entity(EntityId(e))) - 1.0) <= 1e-6);
  }
  SUBCASE("epoch loss does not increase over the second half") {
    // Single epochs jitter with the sampled negatives, so compare 10-epoch means.
    REQUIRE(stats.epoch_loss.size() == 200);
    auto block = [&](std::size_t b) {
      double s = 0.0;
      for (std::size_t i = b * 10; i < b * 10 + 10; ++i) s += stats.epoch_loss[i];
      return s / 10.0;
    };
    for (std::size_t b = 11; b < 20; ++b) CHECK(block(b) <= block(b - 1));
    CHECK(stats.epoch_loss.back() < stats.epoch_loss[100]);
  }
  SUBCASE("seeded pairs are closer than average") {
    const auto s = entity_similarity_rel(emb, layout);
    double off = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m < s.rows; ++m)
      for (std::size_t n = 0; n < s.cols; ++n) {
        if (seeds.entities.contains(EntityId(m), EntityId(n))) continue;
        off += s(m, n);
        ++count;
      }
    off /= static_cast<double>(count);
    for (const auto& p : seeds.entities) CHECK(s(p.left.index(), p.right.index()) > off);
  }
}

TEST_CASE("relationship-view entity similarity is the dot product") {
  const JointLayout layout{3, 3, 1, 1};
  EmbeddingTable emb(6, 2, 3);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& x : emb.ent) x = n(rng);
  const auto s = entity_similarity_rel(emb, layout);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t k = 0; k < 3; ++k) {
      double want = 0.0;
      for (std::size_t d = 0; d < 3; ++d) want += emb.ent[m * 3 + d] * emb.ent[(3 + k) * 3 + d];
      CHECK(s(m, k) == doctest::Approx(want).epsilon(1e-12));
    }
  EmbeddingTable unit(2, 1, 2);
  unit.ent = {1, 0, 1, 0};
  CHECK(entity_similarity_rel(unit, {1, 1, 1, 0})(0, 0) == doctest::Approx(1.0));
  unit.ent = {1, 0, 0, 1};
  CHECK(entity_similarity_rel(unit, {1, 1, 1, 0})(0, 0) == 0.0);
}

TEST_CASE("relationship-view entity inference rules") {
  CandidateSet all(2, 2);
  Matrix s(2, 2, 0.0);
  s(0, 0) = 0.95;
  auto got = infer_entities(s, all, 0.9, {nullptr, &s});
  REQUIRE(got.size() == 1);
  CHECK(got.pairs[0].pair == EntityPair{EntityId(0), EntityId(0)});
  s(0, 1) = 0.93;
  got = infer_entities(s, all, 0.9, {nullptr, &s});
  REQUIRE(got.size() == 1);
  CHECK(got.pairs[0].score == 0.95);
  Matrix low(2, 2, 0.5);
  CHECK(infer_entities(low, all, 0.9, {nullptr, &low}).empty());
}

TEST_CASE("relation pairs by cosine above tau_r, one-to-one") {
  const JointLayout layout{1, 1, 2, 2};
  EmbeddingTable emb(2, 4, 2);
  // Left relations 0, 1; right relations 2, 3.
  emb.rel = {2, 0,  0, 1,  1, 0.1,  0.9, 0.05};
  OneToOnePairs<RelationId, RelationId> none;
  const auto got = infer_relation_pairs(emb, layout, none, 0.9);
  REQUIRE(got.size() == 1);
  CHECK(got[0].left == RelationId(0));
  CHECK(got[0].right == RelationId(1));
  CHECK(got[0].score > 0.99);
  OneToOnePairs<RelationId, RelationId> known;
  known.insert(RelationId(0), RelationId(0), Provenance::kSeed);
  CHECK(infer_relation_pairs(emb, layout, known, 0.9).empty());
}

TEST_CASE("embedding export has one line per id with nine significant digits") {
  const auto g = rel_graph({{"a", "r", "b"}});
  const auto g2 = rel_graph({{"x", "s", "y"}});
  const auto layout = JointLayout::of(g, g2);
  TrainConfig cfg;
  cfg.dim = 3;
  const auto emb = init_embeddings(layout, cfg);
  oracle::TempDir dir;
  emb.save(dir / "emb", g, g2);
  CHECK(oracle::count_lines(dir / "emb") == layout.entities() + layout.relations());
  const auto text = oracle::read_file(dir / "emb");
  CHECK(text.rfind("a\t", 0) == 0);
}
