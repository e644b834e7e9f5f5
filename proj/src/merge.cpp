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

#include "kgalign/merge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "kgalign/error.hpp"

namespace kgalign {

bool TieBreak::before(const EntityPair& a, const EntityPair& b) const {
  if (attr) {
    const double x = (*attr)(a.left.index(), a.right.index());
    const double y = (*attr)(b.left.index(), b.right.index());
    if (x != y) return x > y;
  }
  if (rel) {
    const double x = (*rel)(a.left.index(), a.right.index());
    const double y = (*rel)(b.left.index(), b.right.index());
    if (x != y) return x > y;
  }
  return a < b;
}

bool RankedAlignmentList::contains(const EntityPair& p) const {
  return std::any_of(pairs.begin(), pairs.end(), [&](const ScoredPair& s) { return s.pair == p; });
}

namespace {

// Accepts items in the given order while both endpoints are still free.
template <class Item, class PairOf>
std::vector<Item> greedy(std::vector<Item> ordered, PairOf pair_of) {
  std::set<EntityId> used_left, used_right;
  std::vector<Item> out;
  for (auto& item : ordered) {
    const EntityPair p = pair_of(item);
    if (used_left.contains(p.left) || used_right.contains(p.right)) continue;
    used_left.insert(p.left);
    used_right.insert(p.right);
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

RankedAlignmentList infer_entities(const Matrix& scores, const CandidateSet& candidates, double tau,
                                   const TieBreak& ties) {
  if (scores.rows != candidates.num_left() || scores.cols != candidates.num_right())
    throw ShapeError("score matrix does not match the candidate set");
  std::vector<ScoredPair> above;
  for (std::size_t m = 0; m < scores.rows; ++m) {
    if (!candidates.left_free(EntityId(m))) continue;
    for (std::size_t n = 0; n < scores.cols; ++n) {
      if (!candidates.right_free(EntityId(n))) continue;
      const double s = scores(m, n);
      if (s > tau) above.push_back({{EntityId(m), EntityId(n)}, s});
    }
  }
  std::sort(above.begin(), above.end(), [&](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    return ties.before(a.pair, b.pair);
  });
  return {greedy(std::move(above), [](const ScoredPair& s) { return s.pair; })};
}

MergeResult merge_standard(const RankedAlignmentList& attr, const CandidateSet& candidates,
                           const std::function<RankedAlignmentList(const CandidateSet&)>& infer_rel) {
  CandidateSet remaining = candidates;
  for (const auto& s : attr.pairs) remaining.remove(s.pair.left, s.pair.right);
  MergeResult result;
  result.relationship = infer_rel(remaining);
  for (const auto& s : attr.pairs) result.pairs.push_back({s.pair, Provenance::kAttributeView});
  for (const auto& s : result.relationship.pairs)
    result.pairs.push_back({s.pair, Provenance::kRelationshipView});
  return result;
}

namespace {

struct Proposal {
  EntityPair pair;
  bool from_attr = false;
  bool from_rel = false;
  double key = 0.0;
};

std::vector<Proposal> union_of(const RankedAlignmentList& attr, const RankedAlignmentList& rel) {
  std::map<EntityPair, Proposal> merged;
  for (const auto& s : attr.pairs) {
    auto& p = merged[s.pair];
    p.pair = s.pair;
    p.from_attr = true;
  }
  for (const auto& s : rel.pairs) {
    auto& p = merged[s.pair];
    p.pair = s.pair;
    p.from_rel = true;
  }
  std::vector<Proposal> out;
  for (auto& [k, v] : merged) out.push_back(v);
  return out;
}

Provenance provenance_of(const Proposal& p) {
  if (p.from_attr && p.from_rel) return Provenance::kMerged;
  return p.from_attr ? Provenance::kAttributeView : Provenance::kRelationshipView;
}

// Greedy resolution: smaller key wins when ascending, larger when not.
std::vector<MergedPair> resolve(std::vector<Proposal> props, bool ascending, const TieBreak& ties) {
  std::sort(props.begin(), props.end(), [&](const Proposal& a, const Proposal& b) {
    if (a.key != b.key) return ascending ? a.key < b.key : a.key > b.key;
    return ties.before(a.pair, b.pair);
  });
  auto kept = greedy(std::move(props), [](const Proposal& p) { return p.pair; });
  std::vector<MergedPair> out;
  out.reserve(kept.size());
  for (const auto& p : kept) out.push_back({p.pair, provenance_of(p)});
  return out;
}

}  // namespace

std::vector<MergedPair> merge_score(const RankedAlignmentList& attr, const RankedAlignmentList& rel,
                                    const Matrix& attr_scores, const Matrix& rel_scores) {
  auto props = union_of(attr, rel);
  for (auto& p : props)
    p.key = attr_scores(p.pair.left.index(), p.pair.right.index()) +
            rel_scores(p.pair.left.index(), p.pair.right.index());
  return resolve(std::move(props), false, {&attr_scores, &rel_scores});
}

std::vector<MergedPair> merge_rank(const RankedAlignmentList& attr, const RankedAlignmentList& rel,
                                   const Matrix& attr_scores, const Matrix& rel_scores) {
  std::map<EntityPair, double> ratio;
  auto record = [&](const RankedAlignmentList& list) {
    const double size = static_cast<double>(list.size());
    for (std::size_t i = 0; i < list.pairs.size(); ++i) {
      const double r = static_cast<double>(i + 1) / size;
      auto [it, fresh] = ratio.emplace(list.pairs[i].pair, r);
      if (!fresh) it->second = std::min(it->second, r);
    }
  };
  record(attr);
  record(rel);
  auto props = union_of(attr, rel);
  for (auto& p : props) p.key = ratio.at(p.pair);
  return resolve(std::move(props), true, {&attr_scores, &rel_scores});
}

double tune_threshold(std::span<const EntityPair> valid, const Matrix& scores) {
  if (valid.empty())
    throw ConfigError("validation set is empty; configure fixed entity thresholds instead");
  struct RowTop {
    double score;
    bool correct;
  };
  std::vector<RowTop> tops;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : valid) {
    if (p.left.index() >= scores.rows || p.right.index() >= scores.cols)
      throw LookupError("validation pair outside the score matrix");
    const auto row = scores.row(p.left.index());
    std::size_t best = 0;
    for (std::size_t n = 0; n < row.size(); ++n) {
      if (row[n] > row[best]) best = n;
      lo = std::min(lo, row[n]);
      hi = std::max(hi, row[n]);
    }
    if (row.empty()) continue;
    tops.push_back({row[best], best == p.right.index()});
  }

  std::vector<double> thresholds;
  for (const auto& t : tops) thresholds.push_back(t.score);
  if (std::isfinite(lo) && std::isfinite(hi)) {
    for (long k = static_cast<long>(std::ceil(lo * 100.0)); k <= static_cast<long>(std::floor(hi * 100.0)); ++k)
      thresholds.push_back(static_cast<double>(k) / 100.0);
  }
  thresholds.push_back(std::numeric_limits<double>::infinity());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  double best_tau = thresholds.back();
  long best_value = std::numeric_limits<long>::min();
  for (double tau : thresholds) {
    long value = 0;
    for (const auto& t : tops)
      if (t.score >= tau) value += t.correct ? 1 : -1;
    if (value >= best_value) {  // ascending sweep, so >= keeps the largest maximiser
      best_value = value;
      best_tau = tau;
    }
  }
  return best_tau;
}

}  // namespace kgalign
