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

#include "kgalign/joint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kgalign/error.hpp"

namespace kgalign {

void JointConfig::validate() const {
  if (!(beta >= 0.0) || !(delta >= 0.0)) throw ConfigError("joint.beta and joint.delta must be >= 0");
  if (!(os_learning_rate > 0.0)) throw ConfigError("joint.os_learning_rate must be positive");
  if (!(early_stop_ratio >= 0.0)) throw ConfigError("joint.early_stop_ratio must be >= 0");
  if (eval_every == 0) throw ConfigError("joint.eval_every must be >= 1");
  se.validate();
}

namespace {

void check_shapes(const Matrix& e1, const Matrix& e2, const SimilarityMatrices& s) {
  if (e1.cols() != e2.cols() || s.cross.rows() != e1.rows() || s.cross.cols() != e2.rows() ||
      s.inner1.rows() != e1.rows() || s.inner1.cols() != e1.rows() ||
      s.inner2.rows() != e2.rows() || s.inner2.cols() != e2.rows() ||
      s.mask1.size() != e1.rows() || s.mask2.size() != e2.rows()) {
    throw std::invalid_argument("os_loss: dimension mismatch");
  }
}

// Visits the residual x_i − (S·y)_i of every unmasked row, scaled by `weight`
// in the loss, and optionally pushes its gradient into gx and gy.
double residual_term(const Matrix& x, const Matrix& y, const SparseMatrix& s,
                     const std::vector<char>& mask, double weight, Matrix* gx, Matrix* gy) {
  const std::size_t d = x.cols();
  std::vector<double> r(d);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    // A row without stored similarities would only pull x_i toward zero.
    if (!mask[i] || s.row(i).empty()) continue;
    const auto xi = x.row(i);
    std::copy(xi.begin(), xi.end(), r.begin());
    for (const auto& e : s.row(i)) {
      const auto yj = y.row(e.col);
      for (std::size_t k = 0; k < d; ++k) r[k] -= e.value * yj[k];
    }
    loss += weight * squared_norm(r);
    if (gx == nullptr) continue;
    auto gxi = gx->row(i);
    for (std::size_t k = 0; k < d; ++k) gxi[k] += 2.0 * weight * r[k];
    for (const auto& e : s.row(i)) {
      auto gyj = gy->row(e.col);
      const double c = 2.0 * weight * e.value;
      for (std::size_t k = 0; k < d; ++k) gyj[k] -= c * r[k];
    }
  }
  return loss;
}

}  // namespace

double os_loss(const Matrix& e1, const Matrix& e2, const SimilarityMatrices& sims, double beta) {
  check_shapes(e1, e2, sims);
  double loss = residual_term(e1, e2, sims.cross, sims.mask1, 1.0, nullptr, nullptr);
  if (beta != 0.0) {
    loss += residual_term(e1, e1, sims.inner1, sims.mask1, beta, nullptr, nullptr);
    loss += residual_term(e2, e2, sims.inner2, sims.mask2, beta, nullptr, nullptr);
  }
  return loss;
}

void os_gradient(const Matrix& e1, const Matrix& e2, const SimilarityMatrices& sims, double beta,
                 Matrix& g1, Matrix& g2) {
  check_shapes(e1, e2, sims);
  residual_term(e1, e2, sims.cross, sims.mask1, 1.0, &g1, &g2);
  if (beta != 0.0) {
    residual_term(e1, e1, sims.inner1, sims.mask1, beta, &g1, &g1);
    residual_term(e2, e2, sims.inner2, sims.mask2, beta, &g2, &g2);
  }
}

namespace {

EmbeddingSpace initial_space(const UnifiedIndex& index, const SEConfig& se) {
  Rng rng(derive_seed(se.rng_seed, 1));
  return init_space(index, se.dim, rng);
}

}  // namespace

JointTrainer::JointTrainer(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                           const UnifiedIndex& index, const JointConfig& cfg,
                           const SimilarityMatrices* sims, std::vector<EntityPair> validation,
                           std::vector<EntityId> validation_pool)
    : kb1_(kb1),
      kb2_(kb2),
      index_(index),
      cfg_(cfg),
      sims_(sims),
      validation_(std::move(validation)),
      validation_pool_(std::move(validation_pool)),
      space_(initial_space(index, cfg.se)),
      se_(kb1, kb2, index, cfg.se),
      os_opt_(index.entities.slots, cfg.se.dim, cfg.os_learning_rate),
      os_grad_(index.entities.slots, cfg.se.dim) {
  cfg_.validate();
  if (sims_ && (sims_->cross.rows() != kb1.num_entities() || sims_->cross.cols() != kb2.num_entities())) {
    throw std::invalid_argument("joint trainer: similarity matrices do not match the KBs");
  }
}

double JointTrainer::similarity_step() {
  const Matrix e1 = gather_rows(space_.entities, index_.entities.kb1);
  const Matrix e2 = gather_rows(space_.entities, index_.entities.kb2);
  Matrix g1(e1.rows(), e1.cols());
  Matrix g2(e2.rows(), e2.cols());
  const double loss = os_loss(e1, e2, *sims_, cfg_.beta);
  if (!std::isfinite(loss)) {
    throw NumericError("similarity refinement: non-finite loss at epoch " + std::to_string(epochs_ + 1) +
                       " (lr=" + std::to_string(cfg_.os_learning_rate) + ")");
  }
  os_gradient(e1, e2, *sims_, cfg_.beta, g1, g2);
  // Seed pairs share a slot: both views accumulate onto it.
  const auto scatter = [&](const Matrix& g, const std::vector<Slot>& map) {
    for (std::size_t i = 0; i < map.size(); ++i) {
      const auto row = g.row(i);
      if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) continue;
      os_grad_.add(map[i], cfg_.delta, row);
    }
  };
  scatter(g1, index_.entities.kb1);
  scatter(g2, index_.entities.kb2);
  os_grad_.apply(os_opt_, space_.entities, true);
  return loss;
}

double JointTrainer::validation_mean() const {
  const Matrix e1 = gather_rows(space_.entities, index_.entities.kb1);
  const Matrix e2 = gather_rows(space_.entities, index_.entities.kb2);
  RankOptions opts;
  opts.ks = {1};
  opts.candidates = validation_pool_;
  return rank_targets(e1, e2, validation_, Direction::KB1ToKB2, opts).mean_rank;
}

EpochRecord JointTrainer::epoch() {
  EpochRecord rec;
  rec.se_loss = se_.epoch(space_);
  if (sims_ != nullptr && cfg_.delta > 0.0) rec.os_loss = similarity_step();
  ++epochs_;
  rec.epoch = epochs_;
  if (!validation_.empty() && epochs_ % cfg_.eval_every == 0) rec.valid_mean = validation_mean();
  return rec;
}

std::vector<EpochRecord> JointTrainer::run(const std::function<void(const EpochRecord&)>& on_epoch) {
  std::vector<EpochRecord> history;
  while (epochs_ < cfg_.se.epochs_max) {
    const auto rec = epoch();
    history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (std::isnan(rec.valid_mean)) continue;
    if (last_mean_ && epochs_ >= cfg_.min_epochs) {
      const double change = std::abs(rec.valid_mean - *last_mean_) / *last_mean_;
      if (change < cfg_.early_stop_ratio) {
        early_stopped_ = true;
        break;
      }
    }
    last_mean_ = rec.valid_mean;
  }
  return history;
}

}  // namespace kgalign
