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

#include "kgalign/relationship_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "kgalign/error.hpp"

namespace kgalign {

void TrainConfig::validate() const {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  if (!(margin > 0.0)) throw ConfigError("margin must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (negatives_per_positive < 1) throw ConfigError("negatives per positive must be at least 1");
}

void EmbeddingTable::save(const std::filesystem::path& path, const KnowledgeGraph& g,
                          const KnowledgeGraph& g2) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write " + path.string());
  auto row = [&](const std::string& label, const double* v) {
    std::fprintf(f, "%s\t", label.c_str());
    for (std::size_t d = 0; d < dim; ++d) std::fprintf(f, d ? ",%.9g" : "%.9g", v[d]);
    std::fputc('\n', f);
  };
  for (std::size_t e = 0; e < n_entities; ++e) {
    const auto& label = e < g.num_entities() ? g.entity_label(EntityId(e))
                                             : g2.entity_label(EntityId(e - g.num_entities()));
    row(label, ent.data() + e * dim);
  }
  for (std::size_t r = 0; r < n_relations; ++r) {
    const auto& label = r < g.num_relations() ? g.relation_label(RelationId(r))
                                              : g2.relation_label(RelationId(r - g.num_relations()));
    row(label, rel.data() + r * dim);
  }
  std::fclose(f);
}

std::vector<RelTriple> swap_triplets(const KnowledgeGraph& g, const KnowledgeGraph& g2,
                                     const AlignmentStore& store) {
  const auto layout = JointLayout::of(g, g2);
  std::vector<RelTriple> base;
  base.reserve(g.rel_triples().size() + g2.rel_triples().size());
  for (const auto& t : g.rel_triples()) base.push_back(t);
  for (const auto& t : g2.rel_triples())
    base.push_back({layout.right_entity(t.head), layout.right_relation(t.rel), layout.right_entity(t.tail)});

  // Counterpart of each joint-space entity / relation, or invalid.
  std::vector<EntityId> ent_partner(layout.entities());
  std::vector<RelationId> rel_partner(layout.relations());
  for (const auto& p : store.entities) {
    const auto r = layout.right_entity(p.right);
    ent_partner[p.left.index()] = r;
    ent_partner[r.index()] = p.left;
  }
  for (const auto& p : store.relations) {
    const auto r = layout.right_relation(p.right);
    rel_partner[p.left.index()] = r;
    rel_partner[r.index()] = p.left;
  }

  std::vector<RelTriple> out = base;
  for (const auto& t : base) {
    auto swap_entity = [&](EntityId e) {
      const auto partner = ent_partner[e.index()];
      if (!partner.valid()) return;
      out.push_back({t.head == e ? partner : t.head, t.rel, t.tail == e ? partner : t.tail});
    };
    swap_entity(t.head);
    if (t.tail != t.head) swap_entity(t.tail);
    if (const auto partner = rel_partner[t.rel.index()]; partner.valid())
      out.push_back({t.head, partner, t.tail});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double transe_energy(const EmbeddingTable& emb, EntityId h, RelationId r, EntityId t) {
  if (!h.valid() || !t.valid() || h.index() >= emb.n_entities || t.index() >= emb.n_entities)
    throw LookupError("entity id outside the embedding table");
  if (!r.valid() || r.index() >= emb.n_relations)
    throw LookupError("relation id outside the embedding table");
  const auto hv = emb.entity(h), rv = emb.relation(r), tv = emb.entity(t);
  double s = 0.0;
  for (std::size_t d = 0; d < emb.dim; ++d) {
    const double x = hv[d] + rv[d] - tv[d];
    s += x * x;
  }
  return std::sqrt(s);
}

namespace {

void normalize(std::span<double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& x : v) x /= s;
}

// Unit direction of h + r - t (zero when the residual vanishes) and the energy.
double residual_direction(const EmbeddingTable& emb, const RelTriple& t, std::vector<double>& dir) {
  const auto hv = emb.entity(t.head), rv = emb.relation(t.rel), tv = emb.entity(t.tail);
  double s = 0.0;
  for (std::size_t d = 0; d < emb.dim; ++d) {
    dir[d] = hv[d] + rv[d] - tv[d];
    s += dir[d] * dir[d];
  }
  s = std::sqrt(s);
  for (double& x : dir) x = s > 0.0 ? x / s : 0.0;
  return s;
}

// Adds scale * dE/dparams of triple t into grad, given the residual direction.
void add_energy_gradient(EmbeddingTable& grad, const RelTriple& t, const std::vector<double>& dir,
                         double scale) {
  auto h = grad.entity(t.head);
  auto r = grad.relation(t.rel);
  auto tl = grad.entity(t.tail);
  for (std::size_t d = 0; d < grad.dim; ++d) {
    h[d] += scale * dir[d];
    r[d] += scale * dir[d];
    tl[d] -= scale * dir[d];
  }
}

struct TripleHash {
  std::size_t operator()(const RelTriple& t) const noexcept {
    std::uint64_t x = static_cast<std::uint32_t>(t.head.value);
    x = x * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(t.rel.value);
    x = x * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(t.tail.value);
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

}  // namespace

EmbeddingTable init_embeddings(const JointLayout& layout, const TrainConfig& cfg) {
  EmbeddingTable emb(layout.entities(), layout.relations(), cfg.dim);
  std::mt19937_64 rng(cfg.rng_seed);
  const double bound = 6.0 / std::sqrt(static_cast<double>(cfg.dim));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& x : emb.ent) x = u(rng);
  for (double& x : emb.rel) x = u(rng);
  for (std::size_t e = 0; e < emb.n_entities; ++e) normalize(emb.entity(EntityId(e)));
  return emb;
}

double margin_loss(const EmbeddingTable& emb, std::span<const TrainingPair> batch, double margin) {
  double loss = 0.0;
  for (const auto& p : batch) {
    const double pos = transe_energy(emb, p.positive.head, p.positive.rel, p.positive.tail);
    const double neg = transe_energy(emb, p.negative.head, p.negative.rel, p.negative.tail);
    loss += std::max(0.0, margin + pos - neg);
  }
  return loss;
}

EmbeddingTable margin_loss_gradient(const EmbeddingTable& emb, std::span<const TrainingPair> batch,
                                    double margin) {
  EmbeddingTable grad(emb.n_entities, emb.n_relations, emb.dim);
  std::vector<double> dpos(emb.dim), dneg(emb.dim);
  for (const auto& p : batch) {
    const double pos = residual_direction(emb, p.positive, dpos);
    const double neg = residual_direction(emb, p.negative, dneg);
    if (margin + pos - neg <= 0.0) continue;
    add_energy_gradient(grad, p.positive, dpos, 1.0);
    add_energy_gradient(grad, p.negative, dneg, -1.0);
  }
  return grad;
}

EmbeddingTable train_transe(std::span<const RelTriple> triples, const JointLayout& layout,
                            const TrainConfig& cfg, TrainStats* stats) {
  cfg.validate();
  EmbeddingTable emb = init_embeddings(layout, cfg);
  if (stats) stats->epoch_loss.clear();
  if (triples.empty() || cfg.epochs == 0) return emb;

  const std::unordered_set<RelTriple, TripleHash> positives(triples.begin(), triples.end());
  std::mt19937_64 rng(cfg.rng_seed ^ 0xA5A5A5A5DEADBEEFull);
  std::uniform_int_distribution<std::size_t> pick_left(0, layout.left_entities - 1);
  std::uniform_int_distribution<std::size_t> pick_right(0, layout.right_entities ? layout.right_entities - 1 : 0);
  std::bernoulli_distribution corrupt_head(0.5);
  auto random_like = [&](EntityId e) {
    return layout.is_left_entity(e) ? EntityId(pick_left(rng))
                                    : EntityId(layout.left_entities + pick_right(rng));
  };

  std::vector<std::size_t> order(triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> dpos(cfg.dim), dneg(cfg.dim);
  constexpr int kMaxResample = 10;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t pairs = 0;
    for (std::size_t idx : order) {
      const RelTriple& pos = triples[idx];
      for (int k = 0; k < cfg.negatives_per_positive; ++k) {
        RelTriple neg = pos;
        for (int attempt = 0; attempt < kMaxResample; ++attempt) {
          neg = pos;
          if (corrupt_head(rng))
            neg.head = random_like(pos.head);
          else
            neg.tail = random_like(pos.tail);
          if (!positives.contains(neg)) break;
        }
        const double ep = residual_direction(emb, pos, dpos);
        const double en = residual_direction(emb, neg, dneg);
        const double loss = cfg.margin + ep - en;
        ++pairs;
        if (loss <= 0.0) continue;
        epoch_loss += loss;
        const double lr = cfg.learning_rate;
        auto step = [&](const RelTriple& t, const std::vector<double>& dir, double sign) {
          auto h = emb.entity(t.head);
          auto r = emb.relation(t.rel);
          auto tl = emb.entity(t.tail);
          for (std::size_t d = 0; d < cfg.dim; ++d) {
            h[d] -= sign * lr * dir[d];
            r[d] -= sign * lr * dir[d];
            tl[d] += sign * lr * dir[d];
          }
        };
        step(pos, dpos, 1.0);
        step(neg, dneg, -1.0);
        normalize(emb.entity(pos.head));
        normalize(emb.entity(pos.tail));
        normalize(emb.entity(neg.head));
        normalize(emb.entity(neg.tail));
      }
    }
    if (stats) stats->epoch_loss.push_back(pairs ? epoch_loss / static_cast<double>(pairs) : 0.0);
  }
  return emb;
}

Matrix entity_similarity_rel(const EmbeddingTable& emb, const JointLayout& layout,
                             const kernels::KernelOptions& options) {
  if (emb.n_entities != layout.entities()) throw ShapeError("embedding table does not match layout");
  const std::span<const double> all(emb.ent);
  return kernels::dot_similarity(all.subspan(0, layout.left_entities * emb.dim), layout.left_entities,
                                 all.subspan(layout.left_entities * emb.dim), layout.right_entities,
                                 emb.dim, options);
}

std::vector<RelationPairScore> infer_relation_pairs(
    const EmbeddingTable& emb, const JointLayout& layout,
    const OneToOnePairs<RelationId, RelationId>& rel_pairs, double tau_r) {
  auto norm = [&](RelationId r) {
    double s = 0.0;
    for (double x : emb.relation(r)) s += x * x;
    return std::sqrt(s);
  };
  std::vector<RelationPairScore> above;
  for (std::size_t a = 0; a < layout.left_relations; ++a) {
    const RelationId ra(a);
    if (rel_pairs.has_left(ra)) continue;
    const double na = norm(ra);
    for (std::size_t b = 0; b < layout.right_relations; ++b) {
      const RelationId rb(b);
      if (rel_pairs.has_right(rb)) continue;
      const RelationId jb = layout.right_relation(rb);
      const double nb = norm(jb);
      if (na == 0.0 || nb == 0.0) continue;
      const double cos = kernels::dot(emb.relation(ra).data(), emb.relation(jb).data(), emb.dim) / (na * nb);
      if (cos > tau_r) above.push_back({ra, rb, cos});
    }
  }
  std::stable_sort(above.begin(), above.end(),
                   [](const auto& x, const auto& y) { return x.score > y.score; });
  std::vector<RelationPairScore> out;
  std::unordered_set<std::int32_t> used_left, used_right;
  for (const auto& p : above) {
    if (used_left.contains(p.left.value) || used_right.contains(p.right.value)) continue;
    used_left.insert(p.left.value);
    used_right.insert(p.right.value);
    out.push_back(p);
  }
  return out;
}

}  // namespace kgalign
