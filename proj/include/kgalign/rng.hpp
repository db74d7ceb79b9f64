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

#ifndef KGALIGN_RNG_HPP
#define KGALIGN_RNG_HPP

#include <cstdint>
#include <random>

#include "kgalign/matrix.hpp"

namespace kgalign {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_unit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Fills every row from a normal distribution truncated at two standard
/// deviations, then projects each row onto the unit sphere.
inline void init_truncated_normal(Matrix& m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : m.data()) {
    double v;
    do {
      v = normal(rng);
    } while (std::abs(v) > 2.0);
    x = v;
  }
  normalize_rows(m);
}

/// Derives an independent stream seed from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace kgalign

#endif  // KGALIGN_RNG_HPP
