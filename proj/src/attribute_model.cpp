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

#include "kgalign/attribute_model.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "kgalign/error.hpp"

namespace kgalign {

ValueEmbeddingMatrix build_value_matrix(const KnowledgeGraph& g, const TranslationTable* table,
                                        const WordVectorProvider& provider, std::size_t max_slots,
                                        const std::vector<bool>& frequent) {
  ValueEmbeddingMatrix v;
  v.entities = g.num_entities();
  v.slots = max_slots;
  v.dim = provider.dimension();
  v.data.assign(v.entities * v.slots * v.dim, 0.0);
  v.slot_count.assign(v.entities, 0);
  v.layout.assign(v.entities * v.slots, AttrSlot{AttributeId{}, 0});

  // Distinct raw values recur across entities; embed each once.
  std::unordered_map<std::string, std::vector<double>> cache;
  const auto triples = g.attr_triples();
  for (std::size_t m = 0; m < v.entities; ++m) {
    const auto slots = top_m_attr_slots(g, EntityId(m), max_slots, frequent);
    v.slot_count[m] = slots.size();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const ValueText& value = triples[slots[i].triple].value;
      auto it = cache.find(value.raw);
      if (it == cache.end()) {
        auto emb = table ? embed_value(provider, translate_value(*table, value))
                         : embed_value(provider, value);
        it = cache.emplace(value.raw, std::move(emb)).first;
      }
      std::copy(it->second.begin(), it->second.end(), v.data.begin() + (m * v.slots + i) * v.dim);
      v.layout[m * v.slots + i] = slots[i];
    }
  }
  return v;
}

AttributeIdentification unify_attributes(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                         const FrequentAttributes& frequent,
                                         const OneToOnePairs<AttributeId, AttributeId>& attr_pairs) {
  AttributeIdentification ident;
  const std::size_t n_left = g.num_attributes();
  ident.left.assign(n_left, -1);
  ident.right.assign(g2.num_attributes(), -1);
  ident.id_space = n_left + g2.num_attributes();
  std::set<std::int32_t> used;
  for (std::size_t a = 0; a < n_left; ++a) {
    if (!frequent.is_left(AttributeId(a))) continue;
    ident.left[a] = static_cast<std::int32_t>(a);
    used.insert(ident.left[a]);
  }
  for (std::size_t b = 0; b < g2.num_attributes(); ++b) {
    if (!frequent.is_right(AttributeId(b))) continue;
    const auto partner = attr_pairs.left_of(AttributeId(b));
    ident.right[b] = partner ? partner->value : static_cast<std::int32_t>(n_left + b);
    used.insert(ident.right[b]);
  }
  ident.united = used.size();
  return ident;
}

AttributeSlotMatrix build_attr_slot_matrix(const ValueEmbeddingMatrix& values,
                                           const std::vector<std::int32_t>& id_of_attribute) {
  AttributeSlotMatrix ids;
  ids.entities = values.entities;
  ids.slots = values.slots;
  ids.ids.assign(ids.entities * ids.slots, -1);
  for (std::size_t m = 0; m < values.entities; ++m)
    for (std::size_t i = 0; i < values.slot_count[m]; ++i) {
      const auto a = values.slot_info(m, i).attr;
      ids.ids[m * ids.slots + i] = id_of_attribute.at(a.index());
    }
  return ids;
}

kernels::SlotTensorView slot_view(const ValueEmbeddingMatrix& v, const AttributeSlotMatrix& ids) {
  if (ids.entities != v.entities || ids.slots != v.slots)
    throw ShapeError("attribute id matrix does not match value matrix shape");
  return {v.data, ids.ids, v.entities, v.slots, v.dim};
}

Matrix entity_similarity_attr(const ValueEmbeddingMatrix& left, const ValueEmbeddingMatrix& right,
                              const AttributeSlotMatrix& left_ids,
                              const AttributeSlotMatrix& right_ids,
                              const kernels::KernelOptions& options) {
  if (left.dim != right.dim) throw ShapeError("value embedding dimensions differ");
  return kernels::masked_similarity(slot_view(left, left_ids), slot_view(right, right_ids), options);
}

std::vector<AttributePairVote> infer_attribute_pairs(
    const ValueEmbeddingMatrix& left, const ValueEmbeddingMatrix& right,
    std::span<const EntityPair> aligned, const OneToOnePairs<AttributeId, AttributeId>& attr_pairs,
    double tau_v) {
  if (left.dim != right.dim) throw ShapeError("value embedding dimensions differ");
  std::map<std::pair<AttributeId, AttributeId>, AttributePairVote> votes;
  for (const auto& p : aligned) {
    const std::size_t m = p.left.index(), n = p.right.index();
    for (std::size_t i = 0; i < left.slot_count[m]; ++i) {
      const auto a = left.slot_info(m, i).attr;
      if (attr_pairs.has_left(a)) continue;
      for (std::size_t j = 0; j < right.slot_count[n]; ++j) {
        const auto b = right.slot_info(n, j).attr;
        if (attr_pairs.has_right(b)) continue;
        const double sim = kernels::dot(left.slot(m, i), right.slot(n, j), left.dim);
        if (!(sim > tau_v)) continue;
        auto& v = votes[{a, b}];
        v.left = a;
        v.right = b;
        v.mean_similarity += sim;
        ++v.votes;
      }
    }
  }
  std::vector<AttributePairVote> ranked;
  ranked.reserve(votes.size());
  for (auto& [key, v] : votes) {
    v.mean_similarity /= static_cast<double>(v.votes);
    ranked.push_back(v);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.votes != y.votes) return x.votes > y.votes;
    return x.mean_similarity > y.mean_similarity;
  });
  std::set<AttributeId> used_left, used_right;
  std::vector<AttributePairVote> out;
  for (const auto& v : ranked) {
    if (used_left.contains(v.left) || used_right.contains(v.right)) continue;
    used_left.insert(v.left);
    used_right.insert(v.right);
    out.push_back(v);
  }
  return out;
}

std::vector<ValuePair> infer_value_pairs(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                         std::span<const EntityPair> aligned,
                                         const OneToOnePairs<AttributeId, AttributeId>& attr_pairs,
                                         const std::map<ValuePair, Provenance>& known_values) {
  std::set<ValuePair> fresh;
  for (const auto& p : aligned) {
    for_each_aligned_value(g, g2, p, attr_pairs, [&](const AttrTriple& l, const AttrTriple& r) {
      ValuePair vp{l.value.raw, r.value.raw};
      if (!known_values.contains(vp)) fresh.insert(std::move(vp));
    });
  }
  return {fresh.begin(), fresh.end()};
}

}  // namespace kgalign
