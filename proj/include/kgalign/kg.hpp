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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgalign/text.hpp"

namespace kgalign {

/// Dense integer id tagged by the kind of object it names.
template <class Tag>
struct Id {
  std::int32_t value = -1;

  constexpr Id() = default;
  constexpr explicit Id(std::int32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::int32_t>(v)) {}

  constexpr std::size_t index() const { return static_cast<std::size_t>(value); }
  constexpr bool valid() const { return value >= 0; }

  friend constexpr auto operator<=>(Id, Id) = default;
};

using EntityId = Id<struct EntityTag>;
using RelationId = Id<struct RelationTag>;
using AttributeId = Id<struct AttributeTag>;

struct IdHash {
  template <class Tag>
  std::size_t operator()(Id<Tag> id) const noexcept {
    return std::hash<std::int32_t>{}(id.value);
  }
};

/// Bijective label <-> id table. Ids are assigned in first-seen order.
class Interner {
 public:
  std::int32_t intern(std::string_view label);
  std::optional<std::int32_t> find(std::string_view label) const;
  const std::string& label(std::int32_t id) const { return labels_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct RelTriple {
  EntityId head;
  RelationId rel;
  EntityId tail;
  friend auto operator<=>(const RelTriple&, const RelTriple&) = default;
};

struct AttrTriple {
  EntityId head;
  AttributeId attr;
  ValueText value;
  friend bool operator==(const AttrTriple& a, const AttrTriple& b) {
    return a.head == b.head && a.attr == b.attr && a.value.raw == b.value.raw;
  }
  friend auto operator<=>(const AttrTriple& a, const AttrTriple& b) {
    if (auto c = a.head <=> b.head; c != 0) return c;
    if (auto c = a.attr <=> b.attr; c != 0) return c;
    return a.value.raw <=> b.value.raw;
  }
};

/// One language-specific knowledge graph: interned ids plus the relationship
/// and attribute triple sets. Immutable once built.
class KnowledgeGraph {
 public:
  class Builder {
   public:
    void add_rel_triple(std::string_view head, std::string_view rel, std::string_view tail);
    void add_attr_triple(std::string_view head, std::string_view attr, std::string_view value);
    /// Registers an entity without attaching any triple to it.
    EntityId add_entity(std::string_view label);
    KnowledgeGraph build() &&;

   private:
    Interner entities_, relations_, attributes_;
    std::vector<RelTriple> rel_;
    std::vector<AttrTriple> attr_;
  };

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }
  std::size_t num_attributes() const { return attributes_.size(); }

  const std::string& entity_label(EntityId e) const { return entities_.label(e.value); }
  const std::string& relation_label(RelationId r) const { return relations_.label(r.value); }
  const std::string& attribute_label(AttributeId a) const { return attributes_.label(a.value); }

  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<RelationId> find_relation(std::string_view label) const;
  std::optional<AttributeId> find_attribute(std::string_view label) const;

  /// Sorted by (head, rel, tail), no duplicates.
  std::span<const RelTriple> rel_triples() const { return rel_; }
  /// Sorted by (head, attr, value), no duplicates.
  std::span<const AttrTriple> attr_triples() const { return attr_; }
  /// Attribute triples of one entity, in (attr, value) order.
  std::span<const AttrTriple> attr_triples_of(EntityId e) const;

  /// Number of attribute triples using each attribute.
  const std::vector<std::size_t>& attribute_counts() const { return attr_counts_; }

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.entities_.labels() == b.entities_.labels() &&
           a.relations_.labels() == b.relations_.labels() &&
           a.attributes_.labels() == b.attributes_.labels() && a.rel_ == b.rel_ &&
           a.attr_ == b.attr_;
  }

 private:
  Interner entities_, relations_, attributes_;
  std::vector<RelTriple> rel_;
  std::vector<AttrTriple> attr_;
  std::vector<std::size_t> attr_offsets_;  // size N+1, CSR index into attr_
  std::vector<std::size_t> attr_counts_;
};

/// Reads the tab-separated relationship and attribute triple files.
/// Throws IoError when a file cannot be opened and ParseError (with the line
/// number) when a line does not hold exactly three fields.
KnowledgeGraph load_graph(const std::filesystem::path& rel_path,
                          const std::filesystem::path& attr_path);

void write_rel_triples(const KnowledgeGraph& g, const std::filesystem::path& path);
void write_attr_triples(const KnowledgeGraph& g, const std::filesystem::path& path);

/// Frequent attributes of both graphs (occurrence count strictly above the
/// threshold in their own graph).
struct FrequentAttributes {
  std::vector<bool> left;
  std::vector<bool> right;

  bool is_left(AttributeId a) const { return a.index() < left.size() && left[a.index()]; }
  bool is_right(AttributeId a) const { return a.index() < right.size() && right[a.index()]; }
};

FrequentAttributes frequent_attributes(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                       std::size_t min_count);

/// Frequent attributes of a single graph.
std::vector<bool> frequent_attribute_mask(const KnowledgeGraph& g, std::size_t min_count);

/// One value slot of an entity: the attribute and the index of the triple in
/// KnowledgeGraph::attr_triples().
struct AttrSlot {
  AttributeId attr;
  std::size_t triple;
};

/// Up to max_slots attribute slots of an entity drawn from frequent
/// attributes, ranked by (graph-wide attribute count desc, attribute id,
/// value string).
std::vector<AttrSlot> top_m_attr_slots(const KnowledgeGraph& g, EntityId e, std::size_t max_slots,
                                       const std::vector<bool>& frequent);

enum class Provenance { kSeed, kAttributeView, kRelationshipView, kMerged };

std::string_view to_string(Provenance p);

/// Set of cross-graph pairs in which every left and right element occurs at
/// most once. Pairs are kept in insertion order and never removed.
template <class L, class R>
class OneToOnePairs {
 public:
  struct Entry {
    L left;
    R right;
    Provenance provenance;
  };

  /// Inserts unless either endpoint is already paired. Returns whether the
  /// pair was added.
  bool insert(L left, R right, Provenance p) {
    if (left_.contains(left) || right_.contains(right)) return false;
    left_.emplace(left, right);
    right_.emplace(right, left);
    entries_.push_back({left, right, p});
    return true;
  }
  bool contains(L left, R right) const {
    auto it = left_.find(left);
    return it != left_.end() && it->second == right;
  }
  std::optional<R> right_of(L left) const {
    auto it = left_.find(left);
    if (it == left_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<L> left_of(R right) const {
    auto it = right_.find(right);
    if (it == right_.end()) return std::nullopt;
    return it->second;
  }
  bool has_left(L left) const { return left_.contains(left); }
  bool has_right(R right) const { return right_.contains(right); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::unordered_map<L, R, IdHash> left_;
  std::unordered_map<R, L, IdHash> right_;
  std::vector<Entry> entries_;
};

struct ValuePair {
  std::string left;
  std::string right;
  friend auto operator<=>(const ValuePair&, const ValuePair&) = default;
};

/// The alignment set I: entity, relationship, attribute and value pairs with
/// the provenance of each.
struct AlignmentStore {
  OneToOnePairs<EntityId, EntityId> entities;
  OneToOnePairs<RelationId, RelationId> relations;
  OneToOnePairs<AttributeId, AttributeId> attributes;
  /// Value pairs are many-to-many: the same literal can pair with several.
  std::map<ValuePair, Provenance> values;

  bool add_value(const ValueText& left, const ValueText& right, Provenance p) {
    return values.emplace(ValuePair{left.raw, right.raw}, p).second;
  }
  std::size_t total_size() const {
    return entities.size() + relations.size() + attributes.size() + values.size();
  }
};

struct EntityPair {
  EntityId left;
  EntityId right;
  friend auto operator<=>(const EntityPair&, const EntityPair&) = default;
};

/// Entity pairs still eligible for inference: implicitly every pair whose two
/// endpoints are both unaligned.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::size_t n_left, std::size_t n_right)
      : left_free_(n_left, true), right_free_(n_right, true) {}

  /// All pairs minus those touching the store's aligned entities.
  static CandidateSet from_store(std::size_t n_left, std::size_t n_right,
                                 const AlignmentStore& store);

  bool contains(EntityId m, EntityId n) const {
    return left_free_[m.index()] && right_free_[n.index()];
  }
  bool left_free(EntityId m) const { return left_free_[m.index()]; }
  bool right_free(EntityId n) const { return right_free_[n.index()]; }
  /// Consumes the pair and every other pair sharing one of its endpoints.
  void remove(EntityId m, EntityId n);
  const std::vector<EntityPair>& removed() const { return removed_; }
  std::size_t num_left() const { return left_free_.size(); }
  std::size_t num_right() const { return right_free_.size(); }

 private:
  std::vector<bool> left_free_;
  std::vector<bool> right_free_;
  std::vector<EntityPair> removed_;
};

struct LabelPair {
  std::string left;
  std::string right;
  friend auto operator<=>(const LabelPair&, const LabelPair&) = default;
};

/// Reads a two-column tab-separated pair file (ILL layout).
std::vector<LabelPair> read_pair_file(const std::filesystem::path& path);
void write_pair_file(std::span<const LabelPair> pairs, const std::filesystem::path& path);

/// Maps label pairs onto entity ids; throws LookupError naming the first
/// unknown entity.
std::vector<EntityPair> resolve_entity_pairs(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                             std::span<const LabelPair> pairs);

/// Calls fn(left_triple, right_triple) for every pair of attribute triples of
/// the entity pair whose attributes are aligned in the store.
void for_each_aligned_value(const KnowledgeGraph& g, const KnowledgeGraph& g2, EntityPair pair,
                            const OneToOnePairs<AttributeId, AttributeId>& attr_pairs,
                            const std::function<void(const AttrTriple&, const AttrTriple&)>& fn);

/// Seeds: the training ILLs, same-name relationships and attributes after
/// case folding, and the values those two imply.
AlignmentStore build_initial_seeds(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                   std::span<const LabelPair> ill_train);

}  // namespace kgalign
