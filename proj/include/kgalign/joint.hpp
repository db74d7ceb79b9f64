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

#ifndef KGALIGN_JOINT_HPP
#define KGALIGN_JOINT_HPP

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "kgalign/adagrad.hpp"
#include "kgalign/eval.hpp"
#include "kgalign/kb.hpp"
#include "kgalign/similarity.hpp"
#include "kgalign/structure.hpp"

namespace kgalign {

struct JointConfig {
  double beta = 0.05;
  double delta = 0.05;
  double os_learning_rate = 0.01;
  SEConfig se;
  double early_stop_ratio = 0.0005;
  std::size_t eval_every = 10;
  std::size_t min_epochs = 0;

  void validate() const;
};

/// ‖E1 − S12·E2‖²_F + β(‖E1 − S1·E1‖²_F + ‖E2 − S2·E2‖²_F), where rows
/// of masked-out entities contribute no residual.
double os_loss(const Matrix& e1, const Matrix& e2, const SimilarityMatrices& sims, double beta);

/// Adds ∂os_loss/∂E1 and ∂os_loss/∂E2 into g1 and g2.
void os_gradient(const Matrix& e1, const Matrix& e2, const SimilarityMatrices& sims, double beta,
                 Matrix& g1, Matrix& g2);

struct EpochRecord {
  std::size_t epoch = 0;
  double se_loss = 0.0;
  double os_loss = 0.0;
  double valid_mean = std::numeric_limits<double>::quiet_NaN();
};

/// Alternates one structure pass and one AdaGrad step on δ·O_S per epoch.
/// With δ = 0 or no similarity matrices the second step is skipped entirely,
/// leaving the structure-only trajectory untouched.
class JointTrainer {
 public:
  JointTrainer(const KnowledgeBase& kb1, const KnowledgeBase& kb2, const UnifiedIndex& index,
               const JointConfig& cfg, const SimilarityMatrices* sims,
               std::vector<EntityPair> validation = {}, std::vector<EntityId> validation_pool = {});

  EmbeddingSpace& space() noexcept { return space_; }
  const EmbeddingSpace& space() const noexcept { return space_; }

  /// One epoch: structure pass, similarity pass, optional validation.
  EpochRecord epoch();

  /// Runs until the relative change of the validation Mean drops below
  /// early_stop_ratio or se.epochs_max epochs have run.
  std::vector<EpochRecord> run(const std::function<void(const EpochRecord&)>& on_epoch = {});

  bool early_stopped() const noexcept { return early_stopped_; }
  std::size_t epochs_run() const noexcept { return epochs_; }

  /// Mean rank of the validation pairs, KB1 -> KB2.
  double validation_mean() const;

  /// Takes one δ·O_S AdaGrad step on the entity slots; returns O_S before it.
  double similarity_step();

 private:
  const KnowledgeBase& kb1_;
  const KnowledgeBase& kb2_;
  const UnifiedIndex& index_;
  JointConfig cfg_;
  const SimilarityMatrices* sims_;
  std::vector<EntityPair> validation_;
  std::vector<EntityId> validation_pool_;
  EmbeddingSpace space_;
  StructureTrainer se_;
  AdaGrad os_opt_;
  RowGradients os_grad_;
  std::size_t epochs_ = 0;
  std::optional<double> last_mean_;
  bool early_stopped_ = false;
};

}  // namespace kgalign

#endif  // KGALIGN_JOINT_HPP
