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

#ifndef KGALIGN_ATTRIBUTE_HPP
#define KGALIGN_ATTRIBUTE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "kgalign/adagrad.hpp"
#include "kgalign/kb.hpp"
#include "kgalign/matrix.hpp"
#include "kgalign/rng.hpp"

namespace kgalign {

/// Positive (a, c) pair of correlated attribute slots. weight is 2 when the
/// two facts share a range type, else 1.
struct CorrelationPair {
  Slot a;
  Slot c;
  std::uint8_t weight;
  bool operator==(const CorrelationPair&) const = default;
};

/// The multiset H. Pairs co-occurring on many entities appear many times.
struct CorrelationPairSet {
  std::vector<CorrelationPair> pairs;
  std::size_t num_slots = 0;
  std::size_t mono_lingual = 0;
  std::size_t cross_lingual = 0;
};

/// Mono-lingual pairs: every ordered (a, c), a != c, over one entity's
/// attributes. Cross-lingual pairs: for every seed pair, every attribute of
/// one side against every attribute of the other, both orders. Pairs whose
/// two attributes share a slot are skipped. An entity's range type for an
/// attribute is that of its first fact for the attribute.
CorrelationPairSet build_correlation_pairs(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                           std::span<const EntityPair> seeds,
                                           const UnifiedIndex& index);

struct AEConfig {
  std::size_t dim = 75;
  std::size_t negatives_per_pair = 5;
  double learning_rate = 0.1;
  std::size_t epochs = 100;
  std::size_t batch_size = 1000;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// log σ(x), stable for large |x|.
double log_sigmoid(double x);
double sigmoid(double x);

/// −w · [log σ(a·c) + Σ log σ(−a·c′)].
double ae_loss_term(std::span<const double> a, std::span<const double> c,
                    std::span<const std::span<const double>> negatives, double w);

struct AEGradient {
  std::vector<double> a;
  std::vector<double> c;
  std::vector<std::vector<double>> negatives;
};

/// Analytic gradient of ae_loss_term with respect to a, c and each c′.
AEGradient ae_loss_gradient(std::span<const double> a, std::span<const double> c,
                            std::span<const std::span<const double>> negatives, double w);

/// Log-uniform (Zipfian) sampler over a frequency-ranked vocabulary:
/// P(rank i) = (log(i + 2) − log(i + 1)) / log(V + 1).
class LogUniformSampler {
 public:
  /// `frequency[s]` is the occurrence count of slot s. Rank 0 is the most
  /// frequent slot; ties go to the smaller slot.
  explicit LogUniformSampler(std::span<const std::size_t> frequency);

  std::size_t vocabulary_size() const noexcept { return by_rank_.size(); }
  Slot slot_at(std::size_t rank) const { return by_rank_[rank]; }
  std::size_t rank_of(Slot s) const { return rank_[s]; }
  double mass(std::size_t rank) const;
  std::size_t draw_rank(Rng& rng) const;

  /// k slots drawn by rank, never `a` and never a member of `excluded`
  /// (sorted), all distinct. Rejections are
  /// retried within a budget; a short result increases *shortfall.
  std::vector<Slot> sample(Slot a, std::size_t k, std::span<const Slot> excluded, Rng& rng,
                           std::size_t* shortfall = nullptr) const;

 private:
  std::vector<Slot> by_rank_;
  std::vector<std::size_t> rank_;
};

/// Occurrence count of every attribute slot over the facts of both KBs.
std::vector<std::size_t> attribute_frequencies(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                               const UnifiedIndex& index);

/// Mini-batch AdaGrad trainer for attribute vectors. Rows are kept on the
/// unit sphere.
class AttributeTrainer {
 public:
  AttributeTrainer(const CorrelationPairSet& pairs, std::span<const std::size_t> frequency,
                   const AEConfig& cfg);

  const Matrix& vectors() const noexcept { return vecs_; }
  Matrix& vectors() noexcept { return vecs_; }

  /// One shuffled pass over H; returns the summed loss.
  double epoch();
  std::size_t negative_shortfall() const noexcept { return shortfall_; }

 private:
  CorrelationPairSet pairs_;
  AEConfig cfg_;
  LogUniformSampler sampler_;
  std::vector<std::vector<Slot>> positives_;
  Rng rng_;
  Matrix vecs_;
  AdaGrad opt_;
  RowGradients grad_;
  std::size_t epochs_ = 0;
  std::size_t shortfall_ = 0;
};

/// Trains for cfg.epochs epochs and returns the unit-norm attribute table.
/// Throws std::invalid_argument on an empty pair set and NumericError on a
/// non-finite loss.
Matrix train_ae(const CorrelationPairSet& pairs, std::span<const std::size_t> frequency,
                const AEConfig& cfg, std::vector<double>* epoch_losses = nullptr);

}  // namespace kgalign

#endif  // KGALIGN_ATTRIBUTE_HPP
