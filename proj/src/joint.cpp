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

#include "kgalign/joint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "json.hpp"
#include "kgalign/error.hpp"

namespace kgalign {

std::string IterationRecord::to_json_line() const {
  nlohmann::ordered_json j;
  j["iteration"] = iteration;
  j["new_ent_attr"] = new_ent_attr;
  j["new_ent_rel"] = new_ent_rel;
  j["merged"] = merged;
  j["new_attr"] = new_attr;
  j["new_rel"] = new_rel;
  j["new_val"] = new_val;
  j["tau_e_attr"] = std::isfinite(tau_e_attr) ? nlohmann::ordered_json(tau_e_attr) : nlohmann::ordered_json("inf");
  j["tau_e_rel"] = std::isfinite(tau_e_rel) ? nlohmann::ordered_json(tau_e_rel) : nlohmann::ordered_json("inf");
  j["store_size"] = store_size;
  j["seconds"] = {{"translator", seconds.translator},
                  {"attribute", seconds.attribute},
                  {"relationship", seconds.relationship},
                  {"merge", seconds.merge}};
  return j.dump();
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::optional<TranslationTable> train_on_store(const AlignmentStore& store, int iterations) {
  std::vector<ValuePairText> corpus;
  corpus.reserve(store.values.size());
  for (const auto& [vp, prov] : store.values) corpus.emplace_back(ValueText(vp.left), ValueText(vp.right));
  bool trainable = std::any_of(corpus.begin(), corpus.end(), [](const ValuePairText& p) {
    return !p.first.tokens.empty() && !p.second.tokens.empty();
  });
  if (!trainable) return std::nullopt;
  return train_translation(corpus, iterations);
}

// Entity thresholds are tuned with ">=" acceptance; inference uses ">".
double strict_from_inclusive(double tau) {
  return std::isfinite(tau) ? std::nextafter(tau, -std::numeric_limits<double>::infinity()) : tau;
}

struct ViewState {
  std::optional<TranslationTable> table;
  ValueEmbeddingMatrix left_values, right_values;
  Matrix attr_scores, rel_scores;
  EmbeddingTable embeddings;
};

}  // namespace

PipelineResult run_pipeline(const KnowledgeGraph& g, const KnowledgeGraph& g2, AlignmentStore seeds,
                            std::span<const EntityPair> valid, const PipelineOptions& options,
                            const IterationObserver& observer) {
  options.transe.validate();
  const auto& th = options.thresholds;
  if (th.tau_v < 0.0 || th.tau_v > 1.0) throw ConfigError("tau_v must lie in [0, 1]");
  if (th.tau_r < 0.0 || th.tau_r > 1.0) throw ConfigError("tau_r must lie in [0, 1]");
  if (options.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (options.max_slots < 1) throw ConfigError("max_slots must be at least 1");
  if (options.min_count < 1) throw ConfigError("min_count must be at least 1");
  if (th.tune_on_validation && valid.empty())
    throw ConfigError("validation set is empty; configure fixed entity thresholds instead");

  const bool use_attr = options.views != ViewMode::kRelationshipOnly;
  const bool use_rel = options.views != ViewMode::kAttributeOnly;
  const auto frequent = frequent_attributes(g, g2, options.min_count);
  const WordVectorProvider provider(options.value_dim, options.word_vector_seed);
  const auto layout = JointLayout::of(g, g2);

  PipelineResult res;
  res.store = std::move(seeds);
  res.candidates = CandidateSet::from_store(g.num_entities(), g2.num_entities(), res.store);
  ViewState state;

  auto score_attribute_view = [&] {
    state.left_values = build_value_matrix(g, state.table ? &*state.table : nullptr, provider,
                                           options.max_slots, frequent.left);
    state.right_values = build_value_matrix(g2, nullptr, provider, options.max_slots, frequent.right);
    const auto ident = unify_attributes(g, g2, frequent, res.store.attributes);
    const auto left_ids = build_attr_slot_matrix(state.left_values, ident.left);
    const auto right_ids = build_attr_slot_matrix(state.right_values, ident.right);
    state.attr_scores = entity_similarity_attr(state.left_values, state.right_values, left_ids,
                                               right_ids, options.kernels);
  };
  auto score_relationship_view = [&](int iteration) {
    TrainConfig cfg = options.transe;
    cfg.rng_seed = mix_seed(options.transe.rng_seed, static_cast<std::uint64_t>(iteration));
    const auto triples = swap_triplets(g, g2, res.store);
    state.embeddings = train_transe(triples, layout, cfg);
    state.rel_scores = entity_similarity_rel(state.embeddings, layout, options.kernels);
  };

  for (int it = 1; it <= options.max_iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;

    // Both views read the store as it stood at the end of the last iteration.
    if (use_attr) {
      auto t0 = Clock::now();
      if (options.iterative_translator || it == 1)
        state.table = train_on_store(res.store, options.translator_iterations);
      rec.seconds.translator = since(t0);
      t0 = Clock::now();
      score_attribute_view();
      rec.seconds.attribute = since(t0);
    }
    if (use_rel) {
      const auto t0 = Clock::now();
      score_relationship_view(it);
      rec.seconds.relationship = since(t0);
    }

    const auto t_merge = Clock::now();
    double tau_attr = th.tau_e_attr, tau_rel = th.tau_e_rel;
    if (th.tune_on_validation) {
      if (use_attr) tau_attr = tune_threshold(valid, state.attr_scores);
      if (use_rel) tau_rel = tune_threshold(valid, state.rel_scores);
    }
    rec.tau_e_attr = tau_attr;
    rec.tau_e_rel = tau_rel;
    const double strict_attr = th.tune_on_validation ? strict_from_inclusive(tau_attr) : tau_attr;
    const double strict_rel = th.tune_on_validation ? strict_from_inclusive(tau_rel) : tau_rel;
    const TieBreak ties{use_attr ? &state.attr_scores : nullptr, use_rel ? &state.rel_scores : nullptr};

    RankedAlignmentList attr_list, rel_list;
    std::vector<MergedPair> merged;
    if (use_attr) attr_list = infer_entities(state.attr_scores, res.candidates, strict_attr, ties);
    if (use_attr && use_rel) {
      auto infer_rel = [&](const CandidateSet& c) {
        return infer_entities(state.rel_scores, c, strict_rel, ties);
      };
      switch (options.merge) {
        case MergeMode::kStandard: {
          auto m = merge_standard(attr_list, res.candidates, infer_rel);
          merged = std::move(m.pairs);
          rel_list = std::move(m.relationship);
          break;
        }
        case MergeMode::kScore:
          rel_list = infer_rel(res.candidates);
          merged = merge_score(attr_list, rel_list, state.attr_scores, state.rel_scores);
          break;
        case MergeMode::kRank:
          rel_list = infer_rel(res.candidates);
          merged = merge_rank(attr_list, rel_list, state.attr_scores, state.rel_scores);
          break;
      }
    } else if (use_attr) {
      for (const auto& s : attr_list.pairs) merged.push_back({s.pair, Provenance::kAttributeView});
    } else {
      rel_list = infer_entities(state.rel_scores, res.candidates, strict_rel, ties);
      for (const auto& s : rel_list.pairs) merged.push_back({s.pair, Provenance::kRelationshipView});
    }
    rec.new_ent_attr = attr_list.size();
    rec.new_ent_rel = rel_list.size();

    // Attribute and value pairs from I together with this iteration's
    // attribute-view entity pairs.
    std::vector<AttributePairVote> new_attrs;
    std::vector<ValuePair> new_values;
    if (use_attr) {
      std::vector<EntityPair> aligned;
      aligned.reserve(res.store.entities.size() + attr_list.size());
      for (const auto& p : res.store.entities) aligned.push_back({p.left, p.right});
      for (const auto& s : attr_list.pairs) aligned.push_back(s.pair);
      new_attrs = infer_attribute_pairs(state.left_values, state.right_values, aligned,
                                        res.store.attributes, th.tau_v);
      auto attrs = res.store.attributes;
      for (const auto& a : new_attrs) attrs.insert(a.left, a.right, Provenance::kAttributeView);
      new_values = infer_value_pairs(g, g2, aligned, attrs, res.store.values);
    }
    std::vector<RelationPairScore> new_rels;
    if (use_rel) new_rels = infer_relation_pairs(state.embeddings, layout, res.store.relations, th.tau_r);

    for (const auto& p : merged) {
      if (res.store.entities.insert(p.pair.left, p.pair.right, p.provenance)) {
        res.candidates.remove(p.pair.left, p.pair.right);
        ++rec.merged;
      }
    }
    for (const auto& r : new_rels)
      if (res.store.relations.insert(r.left, r.right, Provenance::kRelationshipView)) ++rec.new_rel;
    for (const auto& a : new_attrs)
      if (res.store.attributes.insert(a.left, a.right, Provenance::kAttributeView)) ++rec.new_attr;
    for (const auto& v : new_values)
      if (res.store.values.emplace(v, Provenance::kAttributeView).second) ++rec.new_val;
    rec.seconds.merge = since(t_merge);
    rec.store_size = res.store.total_size();

    res.log.push_back(rec);
    if (observer) observer(rec, res.store, res.candidates);
    if (rec.delta() == 0) break;
    if (it == options.max_iterations) {
      res.truncated = true;
      // Rescore so the returned matrices reflect the final store.
      if (use_attr) {
        if (options.iterative_translator) state.table = train_on_store(res.store, options.translator_iterations);
        score_attribute_view();
      }
      if (use_rel) score_relationship_view(it + 1);
    }
  }

  res.attr_scores = std::move(state.attr_scores);
  res.rel_scores = std::move(state.rel_scores);
  return res;
}

Matrix alignment_scores(const PipelineResult& result, ViewMode views) {
  Matrix base;
  switch (views) {
    case ViewMode::kAttributeOnly: base = result.attr_scores; break;
    case ViewMode::kRelationshipOnly: base = result.rel_scores; break;
    case ViewMode::kJoint: {
      base = result.attr_scores;
      double scale = 0.0;
      for (double x : base.data) scale = std::max(scale, std::abs(x));
      if (scale == 0.0) scale = 1.0;
      if (result.rel_scores.data.size() != base.data.size())
        throw ShapeError("attribute and relationship score matrices differ in shape");
      for (std::size_t i = 0; i < base.data.size(); ++i)
        base.data[i] = base.data[i] / scale + result.rel_scores.data[i];
      break;
    }
  }
  double top = 0.0;
  for (double x : base.data) top = std::max(top, std::abs(x));
  const double lifted = top + 1.0;
  for (const auto& p : result.store.entities)
    if (p.provenance != Provenance::kSeed) base(p.left.index(), p.right.index()) = lifted;
  return base;
}

void write_alignment_dump(const AlignmentStore& store, const KnowledgeGraph& g,
                          const KnowledgeGraph& g2, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& p : store.entities)
    out << "ent\t" << g.entity_label(p.left) << '\t' << g2.entity_label(p.right) << '\t'
        << to_string(p.provenance) << '\n';
  for (const auto& p : store.relations)
    out << "rel\t" << g.relation_label(p.left) << '\t' << g2.relation_label(p.right) << '\t'
        << to_string(p.provenance) << '\n';
  for (const auto& p : store.attributes)
    out << "attr\t" << g.attribute_label(p.left) << '\t' << g2.attribute_label(p.right) << '\t'
        << to_string(p.provenance) << '\n';
  for (const auto& [vp, prov] : store.values)
    out << "val\t" << vp.left << '\t' << vp.right << '\t' << to_string(prov) << '\n';
}

}  // namespace kgalign
