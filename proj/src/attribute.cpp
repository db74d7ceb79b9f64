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

#include "kgalign/attribute.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kgalign/error.hpp"
#include "kgalign/log.hpp"

namespace kgalign {

namespace {

struct SlotFact {
  Slot slot;
  RangeType range;
};

// Distinct attribute slots of each entity with the range type of the first fact.
std::vector<std::vector<SlotFact>> entity_attributes(const KnowledgeBase& kb, const UnifiedIndex& index) {
  std::vector<std::vector<SlotFact>> out(kb.num_entities());
  for (const auto& f : kb.attr_facts()) {
    auto& list = out[f.entity];
    const Slot s = index.attributes.of(kb.kb_id(), f.attr);
    if (std::none_of(list.begin(), list.end(), [&](const SlotFact& x) { return x.slot == s; })) {
      list.push_back({s, f.range});
    }
  }
  return out;
}

std::uint8_t pair_weight(RangeType x, RangeType y) { return x == y ? 2 : 1; }

}  // namespace

CorrelationPairSet build_correlation_pairs(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                           std::span<const EntityPair> seeds,
                                           const UnifiedIndex& index) {
  CorrelationPairSet set;
  set.num_slots = index.attributes.slots;
  const auto attrs1 = entity_attributes(kb1, index);
  const auto attrs2 = entity_attributes(kb2, index);
  for (const auto* attrs : {&attrs1, &attrs2}) {
    for (const auto& list : *attrs) {
      for (const auto& x : list) {
        for (const auto& y : list) {
          if (x.slot == y.slot) continue;
          set.pairs.push_back({x.slot, y.slot, pair_weight(x.range, y.range)});
          ++set.mono_lingual;
        }
      }
    }
  }
  for (const auto& p : seeds) {
    for (const auto& x : attrs1[p.e1]) {
      for (const auto& y : attrs2[p.e2]) {
        if (x.slot == y.slot) continue;
        const auto w = pair_weight(x.range, y.range);
        set.pairs.push_back({x.slot, y.slot, w});
        set.pairs.push_back({y.slot, x.slot, w});
        set.cross_lingual += 2;
      }
    }
  }
  return set;
}

void AEConfig::validate() const {
  if (dim < 2) throw ConfigError("ae.dim must be >= 2");
  if (negatives_per_pair == 0) throw ConfigError("ae.negatives_per_pair must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("ae.learning_rate must be positive");
  if (epochs == 0) throw ConfigError("ae.epochs must be >= 1");
  if (batch_size == 0) throw ConfigError("ae.batch_size must be >= 1");
}

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double ae_loss_term(std::span<const double> a, std::span<const double> c,
                    std::span<const std::span<const double>> negatives, double w) {
  double sum = log_sigmoid(dot(a, c));
  for (const auto& n : negatives) sum += log_sigmoid(-dot(a, n));
  return -w * sum;
}

AEGradient ae_loss_gradient(std::span<const double> a, std::span<const double> c,
                            std::span<const std::span<const double>> negatives, double w) {
  const std::size_t d = a.size();
  AEGradient g;
  g.a.assign(d, 0.0);
  g.c.assign(d, 0.0);
  // d/dx [-log σ(x)] = σ(x) − 1; d/dx [-log σ(−x)] = σ(x).
  const double pos = w * (sigmoid(dot(a, c)) - 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    g.a[i] += pos * c[i];
    g.c[i] = pos * a[i];
  }
  for (const auto& n : negatives) {
    const double neg = w * sigmoid(dot(a, n));
    std::vector<double> gn(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.a[i] += neg * n[i];
      gn[i] = neg * a[i];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

LogUniformSampler::LogUniformSampler(std::span<const std::size_t> frequency)
    : by_rank_(frequency.size()), rank_(frequency.size()) {
  std::iota(by_rank_.begin(), by_rank_.end(), Slot{0});
  std::stable_sort(by_rank_.begin(), by_rank_.end(),
                   [&](Slot x, Slot y) { return frequency[x] > frequency[y]; });
  for (std::size_t r = 0; r < by_rank_.size(); ++r) rank_[by_rank_[r]] = r;
}

double LogUniformSampler::mass(std::size_t rank) const {
  const double v = static_cast<double>(by_rank_.size());
  const double i = static_cast<double>(rank);
  return (std::log(i + 2.0) - std::log(i + 1.0)) / std::log(v + 1.0);
}

std::size_t LogUniformSampler::draw_rank(Rng& rng) const {
  // Inverse CDF: F(i) = log(i + 2) / log(V + 1) for ranks 0..i.
  const double v = static_cast<double>(by_rank_.size());
  const double u = uniform_unit(rng);
  const auto r = static_cast<std::size_t>(std::exp(u * std::log(v + 1.0))) - 1;
  return std::min(r, by_rank_.size() - 1);
}

std::vector<Slot> LogUniformSampler::sample(Slot a, std::size_t k, std::span<const Slot> excluded,
                                            Rng& rng, std::size_t* shortfall) const {
  std::vector<Slot> out;
  if (by_rank_.size() > 1) {
    const std::size_t budget = 20 * k + 50;
    for (std::size_t attempt = 0; attempt < budget && out.size() < k; ++attempt) {
      const Slot s = by_rank_[draw_rank(rng)];
      if (s == a || std::binary_search(excluded.begin(), excluded.end(), s) ||
          std::find(out.begin(), out.end(), s) != out.end()) {
        continue;
      }
      out.push_back(s);
    }
  }
  if (out.size() < k && shortfall) *shortfall += k - out.size();
  return out;
}

std::vector<std::size_t> attribute_frequencies(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                               const UnifiedIndex& index) {
  std::vector<std::size_t> freq(index.attributes.slots, 0);
  for (const auto* kb : {&kb1, &kb2}) {
    for (const auto& f : kb->attr_facts()) ++freq[index.attributes.of(kb->kb_id(), f.attr)];
  }
  return freq;
}

AttributeTrainer::AttributeTrainer(const CorrelationPairSet& pairs,
                                   std::span<const std::size_t> frequency, const AEConfig& cfg)
    : pairs_(pairs),
      cfg_(cfg),
      sampler_(frequency),
      positives_(pairs.num_slots),
      rng_(derive_seed(cfg.rng_seed, 21)),
      vecs_(pairs.num_slots, cfg.dim),
      opt_(pairs.num_slots, cfg.dim, cfg.learning_rate),
      grad_(pairs.num_slots, cfg.dim) {
  cfg_.validate();
  if (pairs_.pairs.empty()) throw std::invalid_argument("attribute embedding: empty pair set");
  if (frequency.size() != pairs.num_slots) {
    throw std::invalid_argument("attribute embedding: frequency table size mismatch");
  }
  for (const auto& p : pairs_.pairs) positives_[p.a].push_back(p.c);
  for (auto& list : positives_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  init_truncated_normal(vecs_, rng_);
}

double AttributeTrainer::epoch() {
  auto& pairs = pairs_.pairs;
  for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[uniform_index(rng_, i)]);
  const std::size_t shortfall_before = shortfall_;
  double total = 0.0;
  std::vector<std::span<const double>> neg_rows;
  for (std::size_t start = 0; start < pairs.size(); start += cfg_.batch_size) {
    const std::size_t end = std::min(pairs.size(), start + cfg_.batch_size);
    double batch_loss = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const auto& p = pairs[i];
      const auto negs = sampler_.sample(p.a, cfg_.negatives_per_pair, positives_[p.a], rng_, &shortfall_);
      neg_rows.clear();
      for (const Slot s : negs) neg_rows.push_back(vecs_.row(s));
      const double w = p.weight;
      batch_loss += ae_loss_term(vecs_.row(p.a), vecs_.row(p.c), neg_rows, w);
      const auto g = ae_loss_gradient(vecs_.row(p.a), vecs_.row(p.c), neg_rows, w);
      grad_.add(p.a, 1.0, g.a);
      grad_.add(p.c, 1.0, g.c);
      for (std::size_t j = 0; j < negs.size(); ++j) grad_.add(negs[j], 1.0, g.negatives[j]);
    }
    if (!std::isfinite(batch_loss)) {
      throw NumericError("attribute embedding: non-finite loss at epoch " +
                         std::to_string(epochs_ + 1) + " (lr=" + std::to_string(cfg_.learning_rate) +
                         ", pair " + std::to_string(pairs[start].a) + "," +
                         std::to_string(pairs[start].c) + ")");
    }
    grad_.apply(opt_, vecs_, true);
    total += batch_loss;
  }
  ++epochs_;
  if (shortfall_ > shortfall_before) {
    log::warn("attribute embedding: " + std::to_string(shortfall_ - shortfall_before) +
              " negative attributes could not be drawn this epoch (vocabulary too small)");
  }
  return total;
}

Matrix train_ae(const CorrelationPairSet& pairs, std::span<const std::size_t> frequency,
                const AEConfig& cfg, std::vector<double>* epoch_losses) {
  AttributeTrainer trainer(pairs, frequency, cfg);
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    const double loss = trainer.epoch();
    if (epoch_losses) epoch_losses->push_back(loss);
  }
  return trainer.vectors();
}

}  // namespace kgalign
