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

#include "kgalign/kg.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "kgalign/error.hpp"

namespace kgalign {

std::int32_t Interner::intern(std::string_view label) {
  auto it = index_.find(std::string(label));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::int32_t> Interner::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void KnowledgeGraph::Builder::add_rel_triple(std::string_view head, std::string_view rel,
                                             std::string_view tail) {
  const EntityId h(entities_.intern(head));
  const RelationId r(relations_.intern(rel));
  const EntityId t(entities_.intern(tail));
  rel_.push_back({h, r, t});
}

void KnowledgeGraph::Builder::add_attr_triple(std::string_view head, std::string_view attr,
                                              std::string_view value) {
  const EntityId h(entities_.intern(head));
  const AttributeId a(attributes_.intern(attr));
  attr_.push_back({h, a, ValueText(std::string(value))});
}

EntityId KnowledgeGraph::Builder::add_entity(std::string_view label) {
  return EntityId(entities_.intern(label));
}

KnowledgeGraph KnowledgeGraph::Builder::build() && {
  KnowledgeGraph g;
  g.entities_ = std::move(entities_);
  g.relations_ = std::move(relations_);
  g.attributes_ = std::move(attributes_);

  std::sort(rel_.begin(), rel_.end());
  rel_.erase(std::unique(rel_.begin(), rel_.end()), rel_.end());
  g.rel_ = std::move(rel_);

  std::sort(attr_.begin(), attr_.end());
  attr_.erase(std::unique(attr_.begin(), attr_.end()), attr_.end());
  g.attr_ = std::move(attr_);

  const std::size_t n = g.entities_.size();
  g.attr_offsets_.assign(n + 1, 0);
  g.attr_counts_.assign(g.attributes_.size(), 0);
  for (const auto& t : g.attr_) {
    ++g.attr_offsets_[t.head.index() + 1];
    ++g.attr_counts_[t.attr.index()];
  }
  std::partial_sum(g.attr_offsets_.begin(), g.attr_offsets_.end(), g.attr_offsets_.begin());
  return g;
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view label) const {
  if (auto id = entities_.find(label)) return EntityId(*id);
  return std::nullopt;
}

std::optional<RelationId> KnowledgeGraph::find_relation(std::string_view label) const {
  if (auto id = relations_.find(label)) return RelationId(*id);
  return std::nullopt;
}

std::optional<AttributeId> KnowledgeGraph::find_attribute(std::string_view label) const {
  if (auto id = attributes_.find(label)) return AttributeId(*id);
  return std::nullopt;
}

std::span<const AttrTriple> KnowledgeGraph::attr_triples_of(EntityId e) const {
  const auto begin = attr_offsets_[e.index()];
  const auto end = attr_offsets_[e.index() + 1];
  return std::span<const AttrTriple>(attr_).subspan(begin, end - begin);
}

namespace {

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Splits on tabs; returns the field count seen (fields beyond 'want' are not stored).
std::size_t split_tabs(std::string_view line, std::string_view* fields, std::size_t want) {
  std::size_t count = 0, start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    const auto piece = line.substr(start, tab == std::string_view::npos ? line.npos : tab - start);
    if (count < want) fields[count] = piece;
    ++count;
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return count;
}

template <std::size_t Fields, class Fn>
void read_tsv(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_for_read(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view fields[Fields];
    const auto n = split_tabs(line, fields, Fields);
    if (n != Fields) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(Fields) + " tab-separated fields, found " +
                       std::to_string(n));
    }
    fn(fields);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
}

}  // namespace

KnowledgeGraph load_graph(const std::filesystem::path& rel_path,
                          const std::filesystem::path& attr_path) {
  KnowledgeGraph::Builder b;
  read_tsv<3>(rel_path, [&](std::string_view* f) { b.add_rel_triple(f[0], f[1], f[2]); });
  read_tsv<3>(attr_path, [&](std::string_view* f) { b.add_attr_triple(f[0], f[1], f[2]); });
  return std::move(b).build();
}

void write_rel_triples(const KnowledgeGraph& g, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& t : g.rel_triples()) {
    out << g.entity_label(t.head) << '\t' << g.relation_label(t.rel) << '\t'
        << g.entity_label(t.tail) << '\n';
  }
}

void write_attr_triples(const KnowledgeGraph& g, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& t : g.attr_triples()) {
    out << g.entity_label(t.head) << '\t' << g.attribute_label(t.attr) << '\t' << t.value.raw
        << '\n';
  }
}

std::vector<bool> frequent_attribute_mask(const KnowledgeGraph& g, std::size_t min_count) {
  const auto& counts = g.attribute_counts();
  std::vector<bool> mask(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) mask[a] = counts[a] > min_count;
  return mask;
}

FrequentAttributes frequent_attributes(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                       std::size_t min_count) {
  return {frequent_attribute_mask(g, min_count), frequent_attribute_mask(g2, min_count)};
}

std::vector<AttrSlot> top_m_attr_slots(const KnowledgeGraph& g, EntityId e, std::size_t max_slots,
                                       const std::vector<bool>& frequent) {
  const auto triples = g.attr_triples_of(e);
  const std::size_t base = static_cast<std::size_t>(triples.data() - g.attr_triples().data());
  std::vector<AttrSlot> slots;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto a = triples[i].attr;
    if (a.index() < frequent.size() && frequent[a.index()]) slots.push_back({a, base + i});
  }
  const auto& counts = g.attribute_counts();
  const auto all = g.attr_triples();
  std::stable_sort(slots.begin(), slots.end(), [&](const AttrSlot& x, const AttrSlot& y) {
    if (counts[x.attr.index()] != counts[y.attr.index()])
      return counts[x.attr.index()] > counts[y.attr.index()];
    if (x.attr != y.attr) return x.attr < y.attr;
    return all[x.triple].value.raw < all[y.triple].value.raw;
  });
  if (slots.size() > max_slots) slots.resize(max_slots);
  return slots;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kSeed: return "seed";
    case Provenance::kAttributeView: return "attribute-view";
    case Provenance::kRelationshipView: return "relationship-view";
    case Provenance::kMerged: return "merged";
  }
  return "unknown";
}

CandidateSet CandidateSet::from_store(std::size_t n_left, std::size_t n_right,
                                      const AlignmentStore& store) {
  CandidateSet c(n_left, n_right);
  for (const auto& p : store.entities) c.remove(p.left, p.right);
  return c;
}

void CandidateSet::remove(EntityId m, EntityId n) {
  left_free_[m.index()] = false;
  right_free_[n.index()] = false;
  removed_.push_back({m, n});
}

std::vector<LabelPair> read_pair_file(const std::filesystem::path& path) {
  std::vector<LabelPair> pairs;
  read_tsv<2>(path, [&](std::string_view* f) { pairs.push_back({std::string(f[0]), std::string(f[1])}); });
  return pairs;
}

void write_pair_file(std::span<const LabelPair> pairs, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& p : pairs) out << p.left << '\t' << p.right << '\n';
}

std::vector<EntityPair> resolve_entity_pairs(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                             std::span<const LabelPair> pairs) {
  std::vector<EntityPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto l = g.find_entity(p.left);
    if (!l) throw LookupError("unknown entity in first graph: " + p.left);
    auto r = g2.find_entity(p.right);
    if (!r) throw LookupError("unknown entity in second graph: " + p.right);
    out.push_back({*l, *r});
  }
  return out;
}

void for_each_aligned_value(const KnowledgeGraph& g, const KnowledgeGraph& g2, EntityPair pair,
                            const OneToOnePairs<AttributeId, AttributeId>& attr_pairs,
                            const std::function<void(const AttrTriple&, const AttrTriple&)>& fn) {
  const auto right = g2.attr_triples_of(pair.right);
  for (const auto& lt : g.attr_triples_of(pair.left)) {
    const auto partner = attr_pairs.right_of(lt.attr);
    if (!partner) continue;
    // right is sorted by attribute, so the matching triples are contiguous
    auto it = std::lower_bound(right.begin(), right.end(), *partner,
                               [](const AttrTriple& t, AttributeId a) { return t.attr < a; });
    for (; it != right.end() && it->attr == *partner; ++it) fn(lt, *it);
  }
}

AlignmentStore build_initial_seeds(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                   std::span<const LabelPair> ill_train) {
  AlignmentStore store;
  for (const auto& p : resolve_entity_pairs(g, g2, ill_train)) {
    if (!store.entities.insert(p.left, p.right, Provenance::kSeed) &&
        !store.entities.contains(p.left, p.right)) {
      throw Error("seed pair " + g.entity_label(p.left) + " ~ " + g2.entity_label(p.right) +
                  " conflicts with an earlier seed pair");
    }
  }

  // Same-name rule. First match in id order wins when folding collapses labels.
  std::unordered_map<std::string, std::int32_t> right_rel, right_attr;
  for (std::size_t r = 0; r < g2.num_relations(); ++r)
    right_rel.emplace(fold_label(g2.relation_label(RelationId(r))), static_cast<std::int32_t>(r));
  for (std::size_t a = 0; a < g2.num_attributes(); ++a)
    right_attr.emplace(fold_label(g2.attribute_label(AttributeId(a))), static_cast<std::int32_t>(a));
  for (std::size_t r = 0; r < g.num_relations(); ++r) {
    auto it = right_rel.find(fold_label(g.relation_label(RelationId(r))));
    if (it != right_rel.end())
      store.relations.insert(RelationId(r), RelationId(it->second), Provenance::kSeed);
  }
  for (std::size_t a = 0; a < g.num_attributes(); ++a) {
    auto it = right_attr.find(fold_label(g.attribute_label(AttributeId(a))));
    if (it != right_attr.end())
      store.attributes.insert(AttributeId(a), AttributeId(it->second), Provenance::kSeed);
  }

  for (const auto& p : store.entities) {
    for_each_aligned_value(g, g2, {p.left, p.right}, store.attributes,
                           [&](const AttrTriple& l, const AttrTriple& r) {
                             store.add_value(l.value, r.value, Provenance::kSeed);
                           });
  }
  return store;
}

}  // namespace kgalign
