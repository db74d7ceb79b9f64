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

#include "kgalign/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kgalign/parallel.hpp"

namespace kgalign {

std::string_view to_string(Direction d) {
  return d == Direction::KB1ToKB2 ? "KB1->KB2" : "KB2->KB1";
}

double AlignmentResult::hits_at(std::size_t k) const {
  const auto n = evaluated();
  if (n == 0) return 0.0;
  const auto hit = std::count_if(ranks.begin(), ranks.end(),
                                 [k](std::uint32_t r) { return r != 0 && r <= k; });
  return 100.0 * static_cast<double>(hit) / static_cast<double>(n);
}

void summarize(AlignmentResult& result) {
  result.excluded = static_cast<std::size_t>(std::count(result.ranks.begin(), result.ranks.end(), 0u));
  result.hits.clear();
  for (const auto k : result.ks) result.hits.push_back(result.hits_at(k));
  double sum = 0.0;
  for (const auto r : result.ranks) sum += r;
  const auto n = result.evaluated();
  result.mean_rank = n > 0 ? sum / static_cast<double>(n) : 0.0;
}

AlignmentResult rank_targets(const Matrix& e1, const Matrix& e2, std::span<const EntityPair> pairs,
                             Direction direction, const RankOptions& options) {
  if (e1.cols() != e2.cols()) throw std::invalid_argument("rank_targets: dimension mismatch");
  const bool forward = direction == Direction::KB1ToKB2;
  const Matrix& src = forward ? e1 : e2;
  const Matrix& tgt = forward ? e2 : e1;
  const auto& src_has = forward ? options.has_embedding1 : options.has_embedding2;
  const auto& tgt_has = forward ? options.has_embedding2 : options.has_embedding1;
  const auto has = [](const std::vector<char>& m, EntityId e) { return m.empty() || m[e] != 0; };
  const auto source_of = [&](const EntityPair& p) { return forward ? p.e1 : p.e2; };
  const auto target_of = [&](const EntityPair& p) { return forward ? p.e2 : p.e1; };

  std::vector<char> keep(pairs.size(), 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    keep[i] = has(src_has, source_of(pairs[i])) && has(tgt_has, target_of(pairs[i]));
  }

  std::vector<EntityId> pool;
  if (!options.candidates.empty()) {
    pool = options.candidates;
  } else if (options.full_pool) {
    for (EntityId e = 0; e < tgt.rows(); ++e) {
      if (has(tgt_has, e)) pool.push_back(e);
    }
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (keep[i]) pool.push_back(target_of(pairs[i]));
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  AlignmentResult result;
  result.direction = direction;
  result.ks = options.ks;
  result.candidates = pool.size();
  result.ranks.assign(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (!keep[i]) continue;
      const auto s = src.row(source_of(pairs[i]));
      const EntityId t = target_of(pairs[i]);
      const double truth = dot(s, tgt.row(t));
      std::uint32_t rank = 1;
      for (const EntityId c : pool) {
        if (c == t) continue;
        const double v = dot(s, tgt.row(c));
        if (v > truth || (v == truth && c < t)) ++rank;
      }
      result.ranks[i] = rank;
    }
  });
  summarize(result);
  return result;
}

std::vector<EntityId> top_candidates(std::span<const double> source, const Matrix& targets,
                                     std::span<const EntityId> candidates, std::size_t k) {
  std::vector<std::pair<double, EntityId>> scored;
  scored.reserve(candidates.size());
  for (const EntityId c : candidates) scored.emplace_back(dot(source, targets.row(c)), c);
  k = std::min(k, scored.size());
  const auto better = [](const auto& x, const auto& y) {
    return x.first > y.first || (x.first == y.first && x.second < y.second);
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
  std::vector<EntityId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

std::uint32_t combine_ranks(std::uint32_t r_embed, std::uint32_t r_string) {
  return std::min(r_embed, r_string);
}

AlignmentResult combine_results(const AlignmentResult& a, const AlignmentResult& b) {
  if (a.ranks.size() != b.ranks.size() || a.direction != b.direction) {
    throw std::invalid_argument("combine_results: results cover different pair lists");
  }
  AlignmentResult out;
  out.direction = a.direction;
  out.ks = a.ks;
  out.candidates = std::max(a.candidates, b.candidates);
  out.ranks.resize(a.ranks.size(), 0);
  for (std::size_t i = 0; i < a.ranks.size(); ++i) {
    if (a.ranks[i] != 0 && b.ranks[i] != 0) out.ranks[i] = combine_ranks(a.ranks[i], b.ranks[i]);
  }
  summarize(out);
  return out;
}

AlignmentResult restrict_to_common(const AlignmentResult& r, const AlignmentResult& other) {
  if (r.ranks.size() != other.ranks.size()) {
    throw std::invalid_argument("restrict_to_common: results cover different pair lists");
  }
  AlignmentResult out = r;
  for (std::size_t i = 0; i < out.ranks.size(); ++i) {
    if (other.ranks[i] == 0) out.ranks[i] = 0;
  }
  summarize(out);
  return out;
}

Matrix gather_rows(const Matrix& slots, std::span<const Slot> map) {
  Matrix out(map.size(), slots.cols());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto src = slots.row(map[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::string metrics_csv(std::span<const std::pair<std::string, AlignmentResult>> rows) {
  std::ostringstream out;
  out << "method,direction";
  if (!rows.empty()) {
    for (const auto k : rows.front().second.ks) out << ",hits@" << k;
  }
  out << ",mean,evaluated,excluded\n";
  out << std::fixed;
  for (const auto& [label, r] : rows) {
    out << label << ',' << to_string(r.direction);
    for (const double h : r.hits) out << ',' << std::setprecision(2) << h;
    out << ',' << std::setprecision(3) << r.mean_rank << ',' << r.evaluated() << ','
        << r.excluded << '\n';
  }
  return out.str();
}

std::string metrics_table(std::span<const std::pair<std::string, AlignmentResult>> rows) {
  // Group by label; one column block per direction.
  std::vector<std::string> labels;
  std::map<std::pair<std::string, Direction>, const AlignmentResult*> cell;
  std::vector<std::size_t> ks;
  for (const auto& [label, r] : rows) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
    cell[{label, r.direction}] = &r;
    if (ks.empty()) ks = r.ks;
  }
  std::ostringstream out;
  out << std::fixed;
  const int w = 10;
  out << std::left << std::setw(14) << "" << std::right;
  for (const auto d : {Direction::KB1ToKB2, Direction::KB2ToKB1}) {
    out << " | " << std::left << std::setw(static_cast<int>(ks.size() + 1) * w) << to_string(d)
        << std::right;
  }
  out << '\n' << std::left << std::setw(14) << "method" << std::right;
  for (int d = 0; d < 2; ++d) {
    out << " | ";
    for (const auto k : ks) out << std::setw(w) << ("Hits@" + std::to_string(k));
    out << std::setw(w) << "Mean";
  }
  out << '\n';
  for (const auto& label : labels) {
    out << std::left << std::setw(14) << label << std::right;
    for (const auto d : {Direction::KB1ToKB2, Direction::KB2ToKB1}) {
      out << " | ";
      const auto it = cell.find({label, d});
      if (it == cell.end()) {
        for (std::size_t i = 0; i <= ks.size(); ++i) out << std::setw(w) << "-";
        continue;
      }
      for (const double h : it->second->hits) out << std::setw(w) << std::setprecision(2) << h;
      out << std::setw(w) << std::setprecision(1) << it->second->mean_rank;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace kgalign
