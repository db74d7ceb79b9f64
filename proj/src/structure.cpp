// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kgalign/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kgalign/error.hpp"
#include "kgalign/log.hpp"

namespace kgalign {

namespace {

// Rows are drawn per KB in local id order, so an item's initial vector does
// not depend on which seed pairs were merged. A shared slot keeps KB1's row.
Matrix init_slots(const SlotMap& map, std::size_t dim, Rng& rng) {
  Matrix t1(map.kb1.size(), dim);
  Matrix t2(map.kb2.size(), dim);
  init_truncated_normal(t1, rng);
  init_truncated_normal(t2, rng);
  Matrix out(map.slots, dim);
  std::vector<bool> filled(map.slots, false);
  for (std::size_t i = 0; i < map.kb1.size(); ++i) {
    std::copy_n(t1.row(i).begin(), dim, out.row(map.kb1[i]).begin());
    filled[map.kb1[i]] = true;
  }
  for (std::size_t j = 0; j < map.kb2.size(); ++j) {
    if (filled[map.kb2[j]]) continue;
    std::copy_n(t2.row(j).begin(), dim, out.row(map.kb2[j]).begin());
    filled[map.kb2[j]] = true;
  }
  return out;
}

}  // namespace

EmbeddingSpace init_space(const UnifiedIndex& index, std::size_t dim, Rng& rng) {
  EmbeddingSpace space;
  space.entities = init_slots(index.entities, dim, rng);
  space.relations = init_slots(index.relationships, dim, rng);
  return space;
}

void SEConfig::validate() const {
  if (dim < 2) throw ConfigError("se.dim must be >= 2");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("se.alpha must lie in [0, 1]");
  if (!(learning_rate > 0.0)) throw ConfigError("se.learning_rate must be positive");
  if (negatives_per_positive == 0) throw ConfigError("se.negatives_per_positive must be >= 1");
  if (batch_size == 0) throw ConfigError("se.batch_size must be >= 1");
  if (epochs_max == 0) throw ConfigError("se.epochs_max must be >= 1");
}

double score_triple(std::span<const double> h, std::span<const double> r,
                    std::span<const double> t) {
  if (h.size() != r.size() || h.size() != t.size()) {
    throw std::invalid_argument("score_triple: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = h[i] + r[i] - t[i];
    sum += x * x;
  }
  return sum;
}

std::vector<EntityId> structural_entities(const KnowledgeBase& kb) {
  const auto mask = kb.structural_mask();
  std::vector<EntityId> out;
  for (EntityId e = 0; e < mask.size(); ++e) {
    if (mask[e]) out.push_back(e);
  }
  return out;
}

std::vector<RelTriple> generate_negatives(const RelTriple& tr, std::size_t k,
                                          const KnowledgeBase& kb,
                                          std::span<const EntityId> candidates, Rng& rng,
                                          std::size_t* shortfall) {
  if (k == 0) throw std::invalid_argument("generate_negatives: k must be >= 1");
  const std::size_t n = candidates.size();
  std::vector<RelTriple> out;
  if (n < 2) {
    if (shortfall) *shortfall += k;
    return out;
  }
  const auto is_new = [&](const RelTriple& c) {
    if (kb.contains(c)) return false;
    for (const auto& o : out) {
      if (o == c) return false;
    }
    return true;
  };
  // Small pools are enumerated so that every admissible corruption is found.
  if (2 * n <= 64) {
    std::vector<RelTriple> pool;
    const auto offer = [&](const RelTriple& c) {
      // (e, r, e) can arise from both sides; keep one copy
      if (!kb.contains(c) && std::find(pool.begin(), pool.end(), c) == pool.end()) {
        pool.push_back(c);
      }
    };
    for (const EntityId e : candidates) {
      if (e != tr.head) offer({e, tr.rel, tr.tail});
      if (e != tr.tail) offer({tr.head, tr.rel, e});
    }
    for (std::size_t i = 0; i < pool.size() && out.size() < k; ++i) {
      std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
      out.push_back(pool[i]);
    }
  } else {
    const std::size_t budget = 20 * k + 20;
    for (std::size_t attempt = 0; attempt < budget && out.size() < k; ++attempt) {
      RelTriple c = tr;
      const EntityId e = candidates[uniform_index(rng, n)];
      if (uniform_index(rng, 2) == 0) {
        if (e == tr.head) continue;
        c.head = e;
      } else {
        if (e == tr.tail) continue;
        c.tail = e;
      }
      if (is_new(c)) out.push_back(c);
    }
  }
  if (out.size() < k && shortfall) *shortfall += k - out.size();
  return out;
}

std::vector<RelTriple> generate_negatives(const RelTriple& tr, std::size_t k,
                                          const KnowledgeBase& kb, Rng& rng,
                                          std::size_t* shortfall) {
  const auto candidates = structural_entities(kb);
  return generate_negatives(tr, k, kb, candidates, rng, shortfall);
}

namespace {

double term_score(const EmbeddingSpace& s, const SlotTriple& t) {
  return score_triple(s.entities.row(t.head), s.relations.row(t.rel), s.entities.row(t.tail));
}

void add_triple_gradient(const EmbeddingSpace& s, const SlotTriple& t, double scale,
                         std::span<double> gh, std::span<double> gr, std::span<double> gt) {
  const auto h = s.entities.row(t.head);
  const auto r = s.relations.row(t.rel);
  const auto tl = s.entities.row(t.tail);
  // Row spans may alias (head == tail); compute the residual first.
  thread_local std::vector<double> d;
  d.resize(h.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 2.0 * scale * (h[i] + r[i] - tl[i]);
  for (std::size_t i = 0; i < d.size(); ++i) {
    gh[i] += d[i];
    gr[i] += d[i];
    gt[i] -= d[i];
  }
}

}  // namespace

double se_objective(const EmbeddingSpace& space, std::span<const SETerm> terms, double alpha) {
  double loss = 0.0;
  for (const auto& term : terms) {
    loss += term_score(space, term.positive) - alpha * term_score(space, term.negative);
  }
  return loss;
}

void se_gradient(const EmbeddingSpace& space, std::span<const SETerm> terms, double alpha,
                 Matrix& grad_entities, Matrix& grad_relations) {
  for (const auto& term : terms) {
    for (const auto& [t, scale] : {std::pair{term.positive, 1.0}, std::pair{term.negative, -alpha}}) {
      add_triple_gradient(space, t, scale, grad_entities.row(t.head), grad_relations.row(t.rel),
                          grad_entities.row(t.tail));
    }
  }
}

StructureTrainer::StructureTrainer(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                   const UnifiedIndex& index, const SEConfig& cfg)
    : kb1_(kb1),
      kb2_(kb2),
      index_(index),
      candidates1_(structural_entities(kb1)),
      candidates2_(structural_entities(kb2)),
      cfg_(cfg),
      rng_(derive_seed(cfg.rng_seed, 11)),
      ent_opt_(index.entities.slots, cfg.dim, cfg.learning_rate),
      rel_opt_(index.relationships.slots, cfg.dim, cfg.learning_rate),
      ent_grad_(index.entities.slots, cfg.dim),
      rel_grad_(index.relationships.slots, cfg.dim) {
  cfg_.validate();
  pooled_.reserve(kb1.rel_triples().size() + kb2.rel_triples().size());
  for (const auto& t : kb1.rel_triples()) pooled_.push_back({1, t});
  for (const auto& t : kb2.rel_triples()) pooled_.push_back({2, t});
}

SlotTriple StructureTrainer::to_slots(int kb, const RelTriple& t) const {
  return {index_.entities.of(kb, t.head), index_.relationships.of(kb, t.rel),
          index_.entities.of(kb, t.tail)};
}

void StructureTrainer::accumulate(const EmbeddingSpace& space, const SlotTriple& t, double scale) {
  // Touch in a fixed order so aliasing rows resolve to the same buffer.
  auto gh = ent_grad_.row(t.head);
  auto gr = rel_grad_.row(t.rel);
  auto gt = ent_grad_.row(t.tail);
  add_triple_gradient(space, t, scale, gh, gr, gt);
}

void StructureTrainer::check_finite(double loss, const Pooled& p) const {
  if (std::isfinite(loss)) return;
  const auto& kb = p.kb == 1 ? kb1_ : kb2_;
  std::ostringstream msg;
  msg << "structure embedding: non-finite loss at epoch " << epochs_ + 1
      << " (lr=" << cfg_.learning_rate << ", triple KB" << p.kb << " "
      << kb.entities().resolve(p.local.head) << " " << kb.relationships().resolve(p.local.rel)
      << " " << kb.entities().resolve(p.local.tail) << ")";
  throw NumericError(msg.str());
}

double StructureTrainer::epoch(EmbeddingSpace& space) {
  for (std::size_t i = pooled_.size(); i > 1; --i) {
    std::swap(pooled_[i - 1], pooled_[uniform_index(rng_, i)]);
  }
  const std::size_t k = cfg_.negatives_per_positive;
  const double alpha = cfg_.alpha;
  const bool project_rel = cfg_.constrain_relations;
  double total = 0.0;
  std::vector<std::pair<SlotTriple, std::size_t>> positives;
  std::vector<SlotTriple> negatives;
  const std::size_t shortfall_before = shortfall_;

  for (std::size_t start = 0; start < pooled_.size(); start += cfg_.batch_size) {
    const std::size_t end = std::min(pooled_.size(), start + cfg_.batch_size);
    positives.clear();
    negatives.clear();
    for (std::size_t i = start; i < end; ++i) {
      const auto& p = pooled_[i];
      if (alpha == 0.0) {
        // The negative term vanishes; each positive still counts once per negative.
        positives.emplace_back(to_slots(p.kb, p.local), k);
        continue;
      }
      const auto& kb = p.kb == 1 ? kb1_ : kb2_;
      const auto& cand = p.kb == 1 ? candidates1_ : candidates2_;
      const auto negs = generate_negatives(p.local, k, kb, cand, rng_, &shortfall_);
      positives.emplace_back(to_slots(p.kb, p.local), negs.size());
      for (const auto& n : negs) negatives.push_back(to_slots(p.kb, n));
    }

    double batch_loss = 0.0;
    for (const auto& [t, count] : positives) {
      if (count == 0) continue;
      const double c = static_cast<double>(count);
      batch_loss += c * term_score(space, t);
      accumulate(space, t, c);
    }
    if (cfg_.alternate_terms) {
      ent_grad_.apply(ent_opt_, space.entities, true);
      rel_grad_.apply(rel_opt_, space.relations, project_rel);
    }
    for (const auto& t : negatives) {
      batch_loss -= alpha * term_score(space, t);
      accumulate(space, t, -alpha);
    }
    check_finite(batch_loss, pooled_[start]);
    ent_grad_.apply(ent_opt_, space.entities, true);
    rel_grad_.apply(rel_opt_, space.relations, project_rel);
    total += batch_loss;
  }
  ++epochs_;
  if (shortfall_ > shortfall_before) {
    log::warn("structure embedding: " + std::to_string(shortfall_ - shortfall_before) +
              " negatives could not be drawn this epoch (entity pool too small)");
  }
  return total;
}

}  // namespace kgalign
