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

#ifndef KGALIGN_ADAGRAD_HPP
#define KGALIGN_ADAGRAD_HPP

#include <cmath>
#include <span>
#include <vector>

#include "kgalign/matrix.hpp"

namespace kgalign {

inline constexpr double kAdaGradEpsilon = 1e-8;

/// accum += g²; row -= lr * g / (sqrt(accum) + eps), elementwise.
inline void adagrad_update(std::span<double> row, std::span<const double> grad,
                           std::span<double> accum, double lr, double eps = kAdaGradEpsilon) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    accum[i] += grad[i] * grad[i];
    row[i] -= lr * grad[i] / (std::sqrt(accum[i]) + eps);
  }
}

/// Per-row AdaGrad state for one parameter table. Accumulators persist
/// across epochs.
class AdaGrad {
 public:
  AdaGrad() = default;
  AdaGrad(std::size_t rows, std::size_t cols, double lr) : accum_(rows, cols), lr_(lr) {}

  void step(std::size_t row, std::span<double> param, std::span<const double> grad) {
    adagrad_update(param, grad, accum_.row(row), lr_);
  }

  double learning_rate() const noexcept { return lr_; }
  const Matrix& accumulators() const noexcept { return accum_; }
  Matrix& accumulators() noexcept { return accum_; }

 private:
  Matrix accum_;
  double lr_ = 0.0;
};

/// Gradient rows accumulated for one mini-batch. Only touched rows are
/// updated, in first-touch order, so updates are deterministic.
class RowGradients {
 public:
  RowGradients() = default;
  RowGradients(std::size_t rows, std::size_t cols) : grad_(rows, cols), touched_(rows, 0) {}

  std::span<double> row(std::size_t r) {
    if (!touched_[r]) {
      touched_[r] = 1;
      order_.push_back(r);
    }
    return grad_.row(r);
  }

  void add(std::size_t r, double scale, std::span<const double> v) {
    auto g = row(r);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * v[i];
  }

  const std::vector<std::size_t>& touched() const noexcept { return order_; }

  /// AdaGrad step on every touched row, optional unit-norm projection,
  /// then reset.
  void apply(AdaGrad& opt, Matrix& param, bool project) {
    for (const auto r : order_) {
      opt.step(r, param.row(r), grad_.row(r));
      if (project) normalize(param.row(r));
    }
    clear();
  }

  void clear() {
    for (const auto r : order_) {
      auto g = grad_.row(r);
      std::fill(g.begin(), g.end(), 0.0);
      touched_[r] = 0;
    }
    order_.clear();
  }

 private:
  Matrix grad_;
  std::vector<char> touched_;
  std::vector<std::size_t> order_;
};

}  // namespace kgalign

#endif  // KGALIGN_ADAGRAD_HPP
