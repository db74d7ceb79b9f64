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

#ifndef KGALIGN_STRUCTURE_HPP
#define KGALIGN_STRUCTURE_HPP

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "kgalign/adagrad.hpp"
#include "kgalign/kb.hpp"
#include "kgalign/matrix.hpp"
#include "kgalign/rng.hpp"

namespace kgalign {

/// Unit-norm vector tables of the unified space, one row per slot.
struct EmbeddingSpace {
  Matrix entities;
  Matrix relations;
  Matrix attributes;

  std::size_t dim() const noexcept { return entities.cols(); }
  bool operator==(const EmbeddingSpace&) const = default;
};

/// Random unit rows for every entity and relationship slot. Attribute rows
/// are left empty; attribute embedding trains its own table.
EmbeddingSpace init_space(const UnifiedIndex& index, std::size_t dim, Rng& rng);

/// Hyper-parameters of structure embedding. There is deliberately no margin:
/// the objective is the plain weighted difference of positive and negative scores.
struct SEConfig {
  std::size_t dim = 75;
  double alpha = 0.1;
  double learning_rate = 0.01;
  std::size_t negatives_per_positive = 1;
  std::size_t batch_size = 2000;
  std::size_t epochs_max = 500;
  std::uint64_t rng_seed = 1;
  // Apply the f(tr) step and the -alpha f(tr') step as two updates per batch.
  bool alternate_terms = false;
  bool constrain_relations = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// f(h, r, t) = ‖h + r − t‖²₂. Throws std::invalid_argument on size mismatch.
double score_triple(std::span<const double> h, std::span<const double> r,
                    std::span<const double> t);

/// Up to k distinct corruptions of `tr`, each replacing exactly one of head
/// or tail by another entity of `kb` and absent from kb's triples. When kb
/// cannot supply k such triples within the retry budget, fewer are returned
/// and *shortfall is increased by the difference.
/// Throws std::invalid_argument when k == 0.
/// Entities that occur in at least one relationship triple, ascending.
std::vector<EntityId> structural_entities(const KnowledgeBase& kb);

/// Corrupts the head or tail of `tr` with an entity from `candidates`.
/// Missing negatives are added to `*shortfall`.
std::vector<RelTriple> generate_negatives(const RelTriple& tr, std::size_t k,
                                          const KnowledgeBase& kb,
                                          std::span<const EntityId> candidates, Rng& rng,
                                          std::size_t* shortfall = nullptr);

std::vector<RelTriple> generate_negatives(const RelTriple& tr, std::size_t k,
                                          const KnowledgeBase& kb, Rng& rng,
                                          std::size_t* shortfall = nullptr);

struct SlotTriple {
  Slot head;
  Slot rel;
  Slot tail;
};

/// One summand f(tr) − α f(tr′) of the structure objective.
struct SETerm {
  SlotTriple positive;
  SlotTriple negative;
};

double se_objective(const EmbeddingSpace& space, std::span<const SETerm> terms, double alpha);

/// Adds ∂/∂θ Σ (f(tr) − α f(tr′)) into the entity and relation gradient tables,
/// which must match the shapes of space.entities and space.relations.
void se_gradient(const EmbeddingSpace& space, std::span<const SETerm> terms, double alpha,
                 Matrix& grad_entities, Matrix& grad_relations);

/// Mini-batch AdaGrad trainer for the structure objective over the pooled
/// triples of both KBs. Negatives are resampled every epoch.
class StructureTrainer {
 public:
  StructureTrainer(const KnowledgeBase& kb1, const KnowledgeBase& kb2, const UnifiedIndex& index,
                   const SEConfig& cfg);

  /// One shuffled pass over all triples; returns Σ (f(tr) − α f(tr′)).
  /// Touched rows are re-projected to unit norm right after their update.
  /// Throws NumericError on a non-finite loss.
  double epoch(EmbeddingSpace& space);

  std::size_t epochs_run() const noexcept { return epochs_; }
  std::size_t negative_shortfall() const noexcept { return shortfall_; }
  std::size_t num_triples() const noexcept { return pooled_.size(); }
  const SEConfig& config() const noexcept { return cfg_; }

 private:
  struct Pooled {
    int kb;
    RelTriple local;
  };

  SlotTriple to_slots(int kb, const RelTriple& t) const;
  void accumulate(const EmbeddingSpace& space, const SlotTriple& t, double scale);
  void check_finite(double loss, const Pooled& p) const;

  const KnowledgeBase& kb1_;
  const KnowledgeBase& kb2_;
  const UnifiedIndex& index_;
  std::vector<EntityId> candidates1_;
  std::vector<EntityId> candidates2_;
  SEConfig cfg_;
  Rng rng_;
  std::vector<Pooled> pooled_;
  AdaGrad ent_opt_;
  AdaGrad rel_opt_;
  RowGradients ent_grad_;
  RowGradients rel_grad_;
  std::size_t epochs_ = 0;
  std::size_t shortfall_ = 0;
};

}  // namespace kgalign

#endif  // KGALIGN_STRUCTURE_HPP
