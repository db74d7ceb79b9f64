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

// Matrix helpers, RNG utilities, AdaGrad, threading and digests.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "kgalign/adagrad.hpp"
#include "kgalign/digest.hpp"
#include "kgalign/error.hpp"
#include "kgalign/matrix.hpp"
#include "kgalign/parallel.hpp"
#include "kgalign/rng.hpp"
#include "support/generators.hpp"

using namespace kgalign;

TEST_CASE("normalize leaves zero vectors alone and scales others to unit length") {
  std::vector<double> z{0.0, 0.0};
  normalize(z);
  CHECK(z == std::vector<double>{0.0, 0.0});
  std::vector<double> v{3.0, 4.0};
  normalize(v);
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
}

TEST_CASE("truncated normal init gives unit rows") {
  Rng rng(7);
  Matrix m(200, 16);
  init_truncated_normal(m, rng);
  CHECK(max_norm_deviation(m) <= 1e-12);
}

TEST_CASE("derive_seed separates streams and is stable") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("adagrad first step moves each coordinate by about lr in the gradient's direction") {
  std::vector<double> row{0.5, -0.5, 0.0};
  std::vector<double> accum(3, 0.0);
  const std::vector<double> g{2.0, -0.25, 1e-3};
  adagrad_update(row, g, accum, 0.1);
  // lr * |g| / (|g| + eps)
  CHECK(row[0] == doctest::Approx(0.5 - 0.1 * 2.0 / (2.0 + kAdaGradEpsilon)).epsilon(1e-12));
  CHECK(row[1] == doctest::Approx(-0.5 + 0.1 * 0.25 / (0.25 + kAdaGradEpsilon)).epsilon(1e-12));
  CHECK(row[1] == doctest::Approx(-0.4).epsilon(1e-7));
  CHECK(row[2] == doctest::Approx(-0.1 * 1e-3 / (1e-3 + kAdaGradEpsilon)).epsilon(1e-12));
  CHECK(accum[0] == doctest::Approx(4.0));
}

TEST_CASE("adagrad steps shrink under a repeated gradient") {
  std::vector<double> row{0.0};
  std::vector<double> accum{0.0};
  const std::vector<double> g{0.7};
  adagrad_update(row, g, accum, 0.05);
  const double first = -row[0];
  const double before = row[0];
  adagrad_update(row, g, accum, 0.05);
  const double second = before - row[0];
  CHECK(second < first);
  CHECK(second == doctest::Approx(0.05 / std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("RowGradients applies touched rows only, projects and resets") {
  Matrix p(3, 2, 0.0);
  p(0, 0) = 1.0;
  p(2, 1) = 1.0;
  AdaGrad opt(3, 2, 0.1);
  RowGradients g(3, 2);
  const std::vector<double> v{1.0, -1.0};
  g.add(2, 1.0, v);
  g.add(0, 2.0, v);
  CHECK(g.touched() == std::vector<std::size_t>{2, 0});
  g.apply(opt, p, true);
  CHECK(g.touched().empty());
  CHECK(p(1, 0) == 0.0);
  CHECK(p(1, 1) == 0.0);
  CHECK(max_norm_deviation(Matrix(p)) > 0.5);  // row 1 is zero and untouched
  CHECK(std::sqrt(squared_norm(p.row(0))) == doctest::Approx(1.0));
  CHECK(std::sqrt(squared_norm(p.row(2))) == doctest::Approx(1.0));
  CHECK(opt.accumulators()(1, 0) == 0.0);
}

TEST_CASE("parallel_for covers every index exactly once") {
  for (const char* threads : {"1", "3", "8"}) {
    setenv("KGALIGN_THREADS", threads, 1);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i].fetch_add(1);
    });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  unsetenv("KGALIGN_THREADS");
}

TEST_CASE("parallel_for propagates worker exceptions") {
  setenv("KGALIGN_THREADS", "4", 1);
  CHECK_THROWS_AS(parallel_for(100,
                               [](std::size_t b, std::size_t) {
                                 if (b > 0) throw DataError("boom");
                               }),
                  DataError);
  unsetenv("KGALIGN_THREADS");
}

TEST_CASE("sha1 and git blob hashes match published values") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  // `printf 'hello\n' | git hash-object --stdin`
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("error classes map to exit codes") {
  CHECK(ConfigError("x").exit_code() == 2);
  CHECK(DataError("x").exit_code() == 3);
  CHECK(NumericError("x").exit_code() == 4);
  const StageError s("joint", NumericError("nan"));
  CHECK(s.exit_code() == 4);
  CHECK(s.stage() == "joint");
  CHECK(std::string(s.what()) == "joint: nan");
}
