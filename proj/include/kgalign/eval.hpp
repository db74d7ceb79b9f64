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

#ifndef KGALIGN_EVAL_HPP
#define KGALIGN_EVAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgalign/kb.hpp"
#include "kgalign/matrix.hpp"

namespace kgalign {

enum class Direction { KB1ToKB2, KB2ToKB1 };

std::string_view to_string(Direction d);

/// Rank of the true target for every evaluated pair plus Hits@k and Mean.
struct AlignmentResult {
  Direction direction = Direction::KB1ToKB2;
  std::vector<std::uint32_t> ranks;  // parallel to the input pairs; 0 = excluded
  std::size_t excluded = 0;
  std::size_t candidates = 0;
  std::vector<std::size_t> ks;
  std::vector<double> hits;  // percentages, parallel to ks
  double mean_rank = 0.0;

  std::size_t evaluated() const noexcept { return ranks.size() - excluded; }
  /// Percentage of evaluated pairs ranked within the top k.
  double hits_at(std::size_t k) const;
};

/// Recomputes hits and mean_rank from ranks and ks.
void summarize(AlignmentResult& result);

struct RankOptions {
  std::vector<std::size_t> ks{1, 10, 50};
  // Candidates are every entity of the target KB instead of the test targets.
  bool full_pool = false;
  // Explicit target-side candidate ids; overrides both pool modes when set.
  std::vector<EntityId> candidates;
  // Entities without a trained embedding (empty = all have one).
  std::vector<char> has_embedding1;
  std::vector<char> has_embedding2;
};

/// For each pair, ranks the candidates of the other KB by descending dot
/// product with the source row; ties go to the smaller target id. Rank 1 is
/// best. Pairs whose source or target has no embedding are excluded.
AlignmentResult rank_targets(const Matrix& e1, const Matrix& e2, std::span<const EntityPair> pairs,
                             Direction direction, const RankOptions& options = {});

/// The `k` best candidates for one source row, best first, same ordering rule.
std::vector<EntityId> top_candidates(std::span<const double> source, const Matrix& targets,
                                     std::span<const EntityId> candidates, std::size_t k);

/// min(r_embed, r_string).
std::uint32_t combine_ranks(std::uint32_t r_embed, std::uint32_t r_string);

/// Per-pair minimum rank over the pairs both results ranked. Both inputs
/// must come from the same pair list and direction.
AlignmentResult combine_results(const AlignmentResult& a, const AlignmentResult& b);

/// `r` restricted to the pairs that `other` also ranked.
AlignmentResult restrict_to_common(const AlignmentResult& r, const AlignmentResult& other);

/// Rows of a slot table as seen from one KB: row e is slots[map[e]].
Matrix gather_rows(const Matrix& slots, std::span<const Slot> map);

/// CSV with one line per (label, result): label,direction,hits@k...,mean,evaluated,excluded.
std::string metrics_csv(std::span<const std::pair<std::string, AlignmentResult>> rows);

/// Text table with one column group per direction, Hits@k and Mean.
std::string metrics_table(std::span<const std::pair<std::string, AlignmentResult>> rows);

}  // namespace kgalign

#endif  // KGALIGN_EVAL_HPP
