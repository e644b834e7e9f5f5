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
#include <vector>

#include "kgalign/kernels.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"
#include "kgalign/translator.hpp"

namespace kgalign {

/// N x M x D_v value embeddings of one graph. Slots past slot_count[m] are
/// zero; slots[m * M + i] records which attribute triple filled a slot.
struct ValueEmbeddingMatrix {
  std::size_t entities = 0;
  std::size_t slots = 0;
  std::size_t dim = 0;
  std::vector<double> data;
  std::vector<std::size_t> slot_count;
  std::vector<AttrSlot> layout;

  const double* slot(std::size_t m, std::size_t i) const { return data.data() + (m * slots + i) * dim; }
  const AttrSlot& slot_info(std::size_t m, std::size_t i) const { return layout[m * slots + i]; }
};

/// Fills each entity's top-M frequent attribute slots with embed_value of the
/// value, translated first when a table is given.
ValueEmbeddingMatrix build_value_matrix(const KnowledgeGraph& g, const TranslationTable* table,
                                        const WordVectorProvider& provider, std::size_t max_slots,
                                        const std::vector<bool>& frequent);

/// Unified attribute identifications for both graphs. Left attribute a keeps
/// id a; a right attribute aligned to some left attribute a takes id a, any
/// other right attribute b gets (number of left attributes + b). Only
/// frequent attributes receive ids; the rest map to -1.
struct AttributeIdentification {
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  /// Upper bound on ids (ids lie in [0, id_space)).
  std::size_t id_space = 0;
  /// Number of distinct ids in use, the K of the one-hot formulation.
  std::size_t united = 0;
};

AttributeIdentification unify_attributes(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                         const FrequentAttributes& frequent,
                                         const OneToOnePairs<AttributeId, AttributeId>& attr_pairs);

/// N x M unified ids laid out like the value matrix; -1 marks padding.
struct AttributeSlotMatrix {
  std::size_t entities = 0;
  std::size_t slots = 0;
  std::vector<std::int32_t> ids;

  std::int32_t id(std::size_t m, std::size_t i) const { return ids[m * slots + i]; }
};

AttributeSlotMatrix build_attr_slot_matrix(const ValueEmbeddingMatrix& values,
                                           const std::vector<std::int32_t>& id_of_attribute);

kernels::SlotTensorView slot_view(const ValueEmbeddingMatrix& v, const AttributeSlotMatrix& ids);

/// Masked entity similarity S^A through the factorised kernel. Throws
/// ShapeError when the value and id matrices disagree.
Matrix entity_similarity_attr(const ValueEmbeddingMatrix& left, const ValueEmbeddingMatrix& right,
                              const AttributeSlotMatrix& left_ids,
                              const AttributeSlotMatrix& right_ids,
                              const kernels::KernelOptions& options = {});

struct AttributePairVote {
  AttributeId left;
  AttributeId right;
  std::size_t votes = 0;
  double mean_similarity = 0.0;
};

/// Attribute pairs whose value slots match with similarity above tau_v on
/// aligned entity pairs. Attributes that are already aligned are skipped; the
/// result is one-to-one, picked greedily by (votes, mean similarity).
std::vector<AttributePairVote> infer_attribute_pairs(
    const ValueEmbeddingMatrix& left, const ValueEmbeddingMatrix& right,
    std::span<const EntityPair> aligned, const OneToOnePairs<AttributeId, AttributeId>& attr_pairs,
    double tau_v);

/// Value pairs of attribute triples whose entities and attributes are both
/// aligned and that are not yet in known_values.
std::vector<ValuePair> infer_value_pairs(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                         std::span<const EntityPair> aligned,
                                         const OneToOnePairs<AttributeId, AttributeId>& attr_pairs,
                                         const std::map<ValuePair, Provenance>& known_values);

}  // namespace kgalign
