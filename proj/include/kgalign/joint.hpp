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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kgalign/attribute_model.hpp"
#include "kgalign/kernels.hpp"
#include "kgalign/kg.hpp"
#include "kgalign/merge.hpp"
#include "kgalign/relationship_model.hpp"

namespace kgalign {

struct Thresholds {
  double tau_e_attr = 0.5;
  double tau_e_rel = 0.9;
  double tau_v = 0.8;
  double tau_r = 0.9;
  /// Re-tune the two entity thresholds on the validation pairs every
  /// iteration; otherwise use the fixed values above.
  bool tune_on_validation = true;
};

/// Which views take part: both (the full model) or one alone.
enum class ViewMode { kJoint, kAttributeOnly, kRelationshipOnly };

struct PipelineOptions {
  std::size_t value_dim = 100;
  std::size_t max_slots = 20;
  std::size_t min_count = 50;
  int translator_iterations = 10;
  /// Retrain the translator on the grown value seeds every iteration; when
  /// false it is trained once before the first iteration.
  bool iterative_translator = true;
  std::uint64_t word_vector_seed = 0;
  TrainConfig transe;
  Thresholds thresholds;
  MergeMode merge = MergeMode::kRank;
  ViewMode views = ViewMode::kJoint;
  int max_iterations = 10;
  kernels::KernelOptions kernels;
};

struct PhaseSeconds {
  double translator = 0.0;
  double attribute = 0.0;
  double relationship = 0.0;
  double merge = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  std::size_t new_ent_attr = 0;
  std::size_t new_ent_rel = 0;
  std::size_t merged = 0;
  std::size_t new_attr = 0;
  std::size_t new_rel = 0;
  std::size_t new_val = 0;
  double tau_e_attr = 0.0;
  double tau_e_rel = 0.0;
  std::size_t store_size = 0;
  PhaseSeconds seconds;

  std::size_t delta() const { return merged + new_attr + new_rel + new_val; }
  /// One JSON object on a single line.
  std::string to_json_line() const;
};

struct PipelineResult {
  AlignmentStore store;
  CandidateSet candidates;
  std::vector<IterationRecord> log;
  /// Stopped at max_iterations while still finding new alignments.
  bool truncated = false;
  /// Score matrices computed against the final store (empty when the view
  /// is disabled).
  Matrix attr_scores;
  Matrix rel_scores;
};

using IterationObserver =
    std::function<void(const IterationRecord&, const AlignmentStore&, const CandidateSet&)>;

/// The bootstrap loop: each iteration retrains the translator, rebuilds the
/// value and slot matrices, scores S^A and infers entity, attribute and value
/// pairs; trains TransE on the swapped triples, scores S^R and infers entity
/// and relation pairs; merges the two entity lists, grows the store and
/// shrinks the candidates. Stops when an iteration adds nothing or after
/// max_iterations.
PipelineResult run_pipeline(const KnowledgeGraph& g, const KnowledgeGraph& g2, AlignmentStore seeds,
                            std::span<const EntityPair> valid, const PipelineOptions& options,
                            const IterationObserver& observer = {});

/// Ranking scores for evaluating a finished run. The base is S^A or S^R for a
/// single view; for both views it is S^A / max|S^A| + S^R. Entity pairs the
/// run inferred (not seeds) are lifted above every other score.
Matrix alignment_scores(const PipelineResult& result, ViewMode views);

/// `type<TAB>left<TAB>right<TAB>provenance` for every pair in the store.
void write_alignment_dump(const AlignmentStore& store, const KnowledgeGraph& g,
                          const KnowledgeGraph& g2, const std::filesystem::path& path);

}  // namespace kgalign
