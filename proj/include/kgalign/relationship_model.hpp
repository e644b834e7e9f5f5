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
#include <span>
#include <vector>

#include "kgalign/kernels.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

struct TrainConfig {
  std::size_t dim = 75;
  double margin = 1.0;
  double learning_rate = 0.01;
  int epochs = 200;
  int negatives_per_positive = 1;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on a non-positive dimension, margin, rate or count.
  void validate() const;
};

/// Both graphs share one embedding space. Left entities keep their ids, right
/// entity n becomes left_entities + n; relations are laid out the same way.
struct JointLayout {
  std::size_t left_entities = 0;
  std::size_t right_entities = 0;
  std::size_t left_relations = 0;
  std::size_t right_relations = 0;

  static JointLayout of(const KnowledgeGraph& g, const KnowledgeGraph& g2) {
    return {g.num_entities(), g2.num_entities(), g.num_relations(), g2.num_relations()};
  }
  std::size_t entities() const { return left_entities + right_entities; }
  std::size_t relations() const { return left_relations + right_relations; }
  EntityId right_entity(EntityId n) const { return EntityId(left_entities + n.index()); }
  RelationId right_relation(RelationId r) const { return RelationId(left_relations + r.index()); }
  bool is_left_entity(EntityId e) const { return e.index() < left_entities; }
};

/// Entity and relation vectors over the joint layout, row-major.
struct EmbeddingTable {
  std::size_t n_entities = 0;
  std::size_t n_relations = 0;
  std::size_t dim = 0;
  std::vector<double> ent;
  std::vector<double> rel;

  EmbeddingTable() = default;
  EmbeddingTable(std::size_t entities, std::size_t relations, std::size_t d)
      : n_entities(entities), n_relations(relations), dim(d), ent(entities * d, 0.0), rel(relations * d, 0.0) {}

  std::span<double> entity(EntityId e) { return {ent.data() + e.index() * dim, dim}; }
  std::span<const double> entity(EntityId e) const { return {ent.data() + e.index() * dim, dim}; }
  std::span<double> relation(RelationId r) { return {rel.data() + r.index() * dim, dim}; }
  std::span<const double> relation(RelationId r) const { return {rel.data() + r.index() * dim, dim}; }

  /// Export as `label<TAB>v1,v2,...` lines; entities first, then relations.
  void save(const std::filesystem::path& path, const KnowledgeGraph& g, const KnowledgeGraph& g2) const;

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;
};

/// T and T' mapped into the joint layout plus, for every seeded entity pair,
/// copies of each triple with the entity replaced by its counterpart (in both
/// directions), and likewise for seeded relation pairs. Sorted, no duplicates.
std::vector<RelTriple> swap_triplets(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                     const AlignmentStore& store);

/// ||h + r - t||_2. Throws LookupError for ids outside the table.
double transe_energy(const EmbeddingTable& emb, EntityId h, RelationId r, EntityId t);

/// Uniform in [-6/sqrt(dim), 6/sqrt(dim)] per coordinate, entity rows then
/// normalised.
EmbeddingTable init_embeddings(const JointLayout& layout, const TrainConfig& cfg);

struct TrainingPair {
  RelTriple positive;
  RelTriple negative;
};

/// Sum of max(0, margin + E(positive) - E(negative)) over the batch.
double margin_loss(const EmbeddingTable& emb, std::span<const TrainingPair> batch, double margin);

/// Analytic gradient of margin_loss with respect to every entity and relation
/// coordinate, returned in a table of the same shape.
EmbeddingTable margin_loss_gradient(const EmbeddingTable& emb, std::span<const TrainingPair> batch,
                                    double margin);

struct TrainStats {
  /// Mean hinge loss per training pair for each epoch.
  std::vector<double> epoch_loss;
};

/// Plain SGD over the triples with corrupted negatives (head or tail swapped
/// for a random entity of the same graph as the replaced one, known
/// positives rejected). Entity rows are renormalised after every step.
/// Single-threaded and deterministic for a given cfg.rng_seed.
EmbeddingTable train_transe(std::span<const RelTriple> triples, const JointLayout& layout,
                            const TrainConfig& cfg, TrainStats* stats = nullptr);

/// S^R[m][n] = <ent[m], ent[N + n]>.
Matrix entity_similarity_rel(const EmbeddingTable& emb, const JointLayout& layout,
                             const kernels::KernelOptions& options = {});

struct RelationPairScore {
  RelationId left;
  RelationId right;
  double score;
};

/// Unaligned relation pairs whose embedding cosine exceeds tau_r, reduced
/// greedily to one-to-one by descending cosine.
std::vector<RelationPairScore> infer_relation_pairs(
    const EmbeddingTable& emb, const JointLayout& layout,
    const OneToOnePairs<RelationId, RelationId>& rel_pairs, double tau_r);

}  // namespace kgalign
