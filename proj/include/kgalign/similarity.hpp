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

#ifndef KGALIGN_SIMILARITY_HPP
#define KGALIGN_SIMILARITY_HPP

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "kgalign/kb.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

/// Compressed sparse row matrix.
class SparseMatrix {
 public:
  struct Entry {
    std::uint32_t col;
    double value;
  };

  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    row_ptr_.reserve(rows + 1);
    row_ptr_.push_back(0);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }

  /// Rows must be appended in order; entries within a row by ascending col.
  void push(std::uint32_t col, double value) { entries_.push_back({col, value}); }
  void finish_row() { row_ptr_.push_back(entries_.size()); }

  std::span<const Entry> row(std::size_t i) const {
    return {entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<Entry> row(std::size_t i) {
    return {entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// Stored value at (i, j), or 0.
  double at(std::size_t i, std::size_t j) const;

  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> to_coo() const;
  static SparseMatrix from_coo(std::size_t rows, std::size_t cols,
                               std::span<const std::tuple<std::uint32_t, std::uint32_t, double>> coo);

  bool operator==(const SparseMatrix&) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> entries_;
};

/// [Σ_{a ∈ attrs} a]₁: the normalized sum of the given attribute rows.
/// An empty list, or attributes summing to zero, give the zero vector.
std::vector<double> entity_attr_vector(std::span<const Slot> attrs, const Matrix& attr_vecs);

/// One row per entity of `kb`. mask[e] is 0 for entities without attributes;
/// their rows are zero.
Matrix entity_attribute_matrix(const KnowledgeBase& kb, const UnifiedIndex& index,
                               const Matrix& attr_vecs, std::vector<char>& mask);

/// Entries of A·Bᵀ that are ≥ tau, computed `block_rows` rows of A at a time.
SparseMatrix thresholded_product(const Matrix& a, const Matrix& b, double tau,
                                 std::size_t block_rows = 4096);

struct SimilarityConfig {
  double tau_cross = 0.9;
  double tau_inner = 0.95;
  // Set tau_cross to the mean cosine over seed pairs instead.
  bool auto_tau = false;
  // Scale each stored row to sum 1 so S·E is a weighted average.
  bool row_normalize = false;
  std::size_t block_rows = 4096;

  void validate() const;
};

/// Thresholded cosine matrices between and within the two KBs, plus the
/// masks of entities with attribute evidence.
struct SimilarityMatrices {
  SparseMatrix cross;
  SparseMatrix inner1;
  SparseMatrix inner2;
  double tau_cross = 0.9;
  double tau_inner = 0.95;
  std::vector<char> mask1;
  std::vector<char> mask2;

  bool operator==(const SimilarityMatrices&) const = default;
};

/// Rows of e1/e2 must be unit vectors (or zero for masked entities).
/// `seeds` is only consulted in auto_tau mode.
SimilarityMatrices build_similarity_matrices(const Matrix& e1, const Matrix& e2,
                                             std::vector<char> mask1, std::vector<char> mask2,
                                             const SimilarityConfig& cfg,
                                             std::span<const EntityPair> seeds = {});

}  // namespace kgalign

#endif  // KGALIGN_SIMILARITY_HPP
