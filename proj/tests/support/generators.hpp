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

// Random instance generators for property tests. Every generator takes the
// RNG explicitly so a failing case can be replayed from its seed.

#ifndef KGALIGN_TESTS_GENERATORS_HPP
#define KGALIGN_TESTS_GENERATORS_HPP

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "kgalign/kb.hpp"
#include "kgalign/matrix.hpp"
#include "kgalign/rng.hpp"

namespace gen {

using kgalign::Rng;

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * kgalign::uniform_unit(rng); }

inline kgalign::Matrix matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
  kgalign::Matrix m(rows, cols);
  for (auto& x : m.data()) x = uniform(rng, lo, hi);
  return m;
}

inline kgalign::Matrix unit_rows(Rng& rng, std::size_t rows, std::size_t cols) {
  kgalign::Matrix m = matrix(rng, rows, cols);
  kgalign::normalize_rows(m);
  return m;
}

inline std::vector<double> vec(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

/// KB with `entities` entities e0.., `relations` relations r0.. and up to
/// `triples` random triples (duplicates collapse, self-loops allowed).
inline kgalign::KnowledgeBase kb(Rng& rng, int kb_id, std::size_t entities, std::size_t relations,
                                 std::size_t triples, const std::string& prefix = "") {
  std::vector<std::string> ents, rels;
  for (std::size_t e = 0; e < entities; ++e) ents.push_back(prefix + "e" + std::to_string(e));
  for (std::size_t r = 0; r < relations; ++r) rels.push_back(prefix + "r" + std::to_string(r));
  std::vector<kgalign::RelTriple> ts;
  for (std::size_t i = 0; i < triples; ++i) {
    const kgalign::RelTriple t{static_cast<kgalign::EntityId>(kgalign::uniform_index(rng, entities)),
                               static_cast<kgalign::RelationId>(kgalign::uniform_index(rng, relations)),
                               static_cast<kgalign::EntityId>(kgalign::uniform_index(rng, entities))};
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  return kgalign::KnowledgeBase::from_parts(kb_id, std::move(ents), std::move(rels), {}, std::move(ts), {});
}

/// String over a small alphabet that includes multi-byte UTF-8 characters.
inline std::string word(Rng& rng, std::size_t max_len) {
  static const char* const alphabet[] = {"a", "b", "c", "d", "\xc3\xa9", "\xe4\xb8\xad", "\xf0\x9f\x98\x80"};
  const std::size_t n = kgalign::uniform_index(rng, max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[kgalign::uniform_index(rng, 7)];
  return s;
}

/// Scratch directory under $KGALIGN_TEST_TMP (or the system temp dir), emptied first.
inline std::filesystem::path scratch(const std::string& name) {
  const char* base = std::getenv("KGALIGN_TEST_TMP");
  const std::filesystem::path dir =
      std::filesystem::path(base ? base : std::filesystem::temp_directory_path().string()) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gen

#endif  // KGALIGN_TESTS_GENERATORS_HPP
