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

#include <functional>
#include <span>
#include <vector>

#include "kgalign/kg.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

struct ScoredPair {
  EntityPair pair;
  double score;
};

/// Total order on entity pairs used to break every tie: higher S^A, then
/// higher S^R, then smaller (m, n). Either matrix may be absent.
struct TieBreak {
  const Matrix* attr = nullptr;
  const Matrix* rel = nullptr;

  /// True when a should come before b.
  bool before(const EntityPair& a, const EntityPair& b) const;
};

/// Pairs of one view sorted by descending score (ties per TieBreak); the
/// 1-based position is the pair's rank.
struct RankedAlignmentList {
  std::vector<ScoredPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  bool contains(const EntityPair& p) const;
};

/// Candidate pairs scoring strictly above tau, reduced to one-to-one by
/// accepting pairs in descending score order when neither endpoint is taken.
RankedAlignmentList infer_entities(const Matrix& scores, const CandidateSet& candidates, double tau,
                                   const TieBreak& ties);

enum class MergeMode { kStandard, kScore, kRank };

struct MergedPair {
  EntityPair pair;
  /// kAttributeView or kRelationshipView for single-view pairs, kMerged when
  /// both views proposed it.
  Provenance provenance;
};

struct MergeResult {
  std::vector<MergedPair> pairs;
  /// The relationship-view list actually used (for M1 this is inferred on
  /// the reduced candidate set).
  RankedAlignmentList relationship;
};

/// Co-training order: the relationship view only sees candidates whose
/// entities the attribute view left unclaimed.
MergeResult merge_standard(const RankedAlignmentList& attr, const CandidateSet& candidates,
                           const std::function<RankedAlignmentList(const CandidateSet&)>& infer_rel);

/// Conflicts resolved by the larger S^A + S^R.
std::vector<MergedPair> merge_score(const RankedAlignmentList& attr, const RankedAlignmentList& rel,
                                    const Matrix& attr_scores, const Matrix& rel_scores);

/// Conflicts resolved by the smaller normalised rank r / |list|.
std::vector<MergedPair> merge_rank(const RankedAlignmentList& attr, const RankedAlignmentList& rel,
                                   const Matrix& attr_scores, const Matrix& rel_scores);

/// Threshold on validation rows: each row predicts its best-scoring column;
/// a threshold accepts predictions scoring >= tau and is scored by (correct
/// accepted - wrong accepted). Candidates are the distinct row maxima, the
/// 0.01 grid over the validation score range, and +infinity; the largest
/// maximiser wins. Throws ConfigError on an empty validation set.
double tune_threshold(std::span<const EntityPair> valid, const Matrix& scores);

}  // namespace kgalign
