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

#include "kgalign/similarity.hpp"

#include <algorithm>

#include "kgalign/error.hpp"
#include "kgalign/log.hpp"
#include "kgalign/parallel.hpp"

namespace kgalign {

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  const auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> SparseMatrix::to_coo() const {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& e : row(i)) out.emplace_back(static_cast<std::uint32_t>(i), e.col, e.value);
  }
  return out;
}

SparseMatrix SparseMatrix::from_coo(
    std::size_t rows, std::size_t cols,
    std::span<const std::tuple<std::uint32_t, std::uint32_t, double>> coo) {
  auto sorted = std::vector(coo.begin(), coo.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
  });
  SparseMatrix m(rows, cols);
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (; k < sorted.size() && std::get<0>(sorted[k]) == i; ++k) {
      if (std::get<1>(sorted[k]) >= cols) throw DataError("sparse matrix column out of range");
      m.push(std::get<1>(sorted[k]), std::get<2>(sorted[k]));
    }
    m.finish_row();
  }
  if (k != sorted.size()) throw DataError("sparse matrix row out of range");
  return m;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || row_ptr_ != o.row_ptr_) return false;
  return std::equal(entries_.begin(), entries_.end(), o.entries_.begin(), o.entries_.end(),
                    [](const Entry& x, const Entry& y) { return x.col == y.col && x.value == y.value; });
}

std::vector<double> entity_attr_vector(std::span<const Slot> attrs, const Matrix& attr_vecs) {
  std::vector<double> v(attr_vecs.cols(), 0.0);
  for (const Slot s : attrs) {
    const auto row = attr_vecs.row(s);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += row[i];
  }
  normalize(v);
  return v;
}

Matrix entity_attribute_matrix(const KnowledgeBase& kb, const UnifiedIndex& index,
                               const Matrix& attr_vecs, std::vector<char>& mask) {
  Matrix out(kb.num_entities(), attr_vecs.cols());
  mask.assign(kb.num_entities(), 0);
  std::vector<std::vector<Slot>> attrs(kb.num_entities());
  for (const auto& f : kb.attr_facts()) {
    auto& list = attrs[f.entity];
    const Slot s = index.attributes.of(kb.kb_id(), f.attr);
    if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
  }
  std::size_t empty = 0;
  for (std::size_t e = 0; e < attrs.size(); ++e) {
    const auto v = entity_attr_vector(attrs[e], attr_vecs);
    if (squared_norm(v) == 0.0) {
      ++empty;
      continue;
    }
    std::copy(v.begin(), v.end(), out.row(e).begin());
    mask[e] = 1;
  }
  if (empty > 0) {
    log::info("KB" + std::to_string(kb.kb_id()) + ": " + std::to_string(empty) +
              " entities without attributes are masked out of the similarity terms");
  }
  return out;
}

SparseMatrix thresholded_product(const Matrix& a, const Matrix& b, double tau,
                                 std::size_t block_rows) {
  if (a.cols() != b.cols()) throw std::invalid_argument("thresholded_product: dimension mismatch");
  block_rows = std::max<std::size_t>(block_rows, 1);
  SparseMatrix out(a.rows(), b.rows());
  std::vector<std::vector<SparseMatrix::Entry>> block;
  for (std::size_t start = 0; start < a.rows(); start += block_rows) {
    const std::size_t end = std::min(a.rows(), start + block_rows);
    block.assign(end - start, {});
    parallel_for(end - start, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        const auto x = a.row(start + r);
        for (std::size_t j = 0; j < b.rows(); ++j) {
          const double s = dot(x, b.row(j));
          if (s >= tau) block[r].push_back({static_cast<std::uint32_t>(j), s});
        }
      }
    });
    for (const auto& row : block) {
      for (const auto& e : row) out.push(e.col, e.value);
      out.finish_row();
    }
  }
  return out;
}

void SimilarityConfig::validate() const {
  if (!(tau_cross > 0.0 && tau_cross <= 1.0) || !(tau_inner > 0.0 && tau_inner <= 1.0)) {
    throw ConfigError("similarity thresholds must lie in (0, 1]");
  }
  if (block_rows == 0) throw ConfigError("similarity.block_rows must be >= 1");
}

namespace {

void normalize_row_sums(SparseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double sum = 0.0;
    for (const auto& e : r) sum += e.value;
    if (sum > 0.0) {
      for (auto& e : r) e.value /= sum;
    }
  }
}

}  // namespace

SimilarityMatrices build_similarity_matrices(const Matrix& e1, const Matrix& e2,
                                             std::vector<char> mask1, std::vector<char> mask2,
                                             const SimilarityConfig& cfg,
                                             std::span<const EntityPair> seeds) {
  cfg.validate();
  SimilarityMatrices sims;
  sims.tau_cross = cfg.tau_cross;
  sims.tau_inner = cfg.tau_inner;
  if (cfg.auto_tau) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : seeds) {
      if (!mask1[p.e1] || !mask2[p.e2]) continue;
      sum += dot(e1.row(p.e1), e2.row(p.e2));
      ++n;
    }
    if (n > 0) sims.tau_cross = std::clamp(sum / static_cast<double>(n), 1e-6, 1.0);
    log::info("auto threshold: tau_cross = " + std::to_string(sims.tau_cross) + " over " +
              std::to_string(n) + " seed pairs");
  }
  sims.cross = thresholded_product(e1, e2, sims.tau_cross, cfg.block_rows);
  sims.inner1 = thresholded_product(e1, e1, sims.tau_inner, cfg.block_rows);
  sims.inner2 = thresholded_product(e2, e2, sims.tau_inner, cfg.block_rows);
  if (cfg.row_normalize) {
    normalize_row_sums(sims.cross);
    normalize_row_sums(sims.inner1);
    normalize_row_sums(sims.inner2);
  }
  sims.mask1 = std::move(mask1);
  sims.mask2 = std::move(mask2);
  return sims;
}

}  // namespace kgalign
