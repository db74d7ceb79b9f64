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

#include "kgalign/string_baseline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "kgalign/error.hpp"
#include "kgalign/parallel.hpp"

namespace kgalign {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + static_cast<std::size_t>(len) <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

namespace {

std::size_t levenshtein_u32(const std::u32string& a, const std::u32string& b) {
  // Two-row dynamic programme over the shorter string.
  const auto& s = a.size() < b.size() ? a : b;
  const auto& t = a.size() < b.size() ? b : a;
  std::vector<std::size_t> prev(s.size() + 1), cur(s.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= t.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= s.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (t[i - 1] == s[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[s.size()];
}

double similarity_u32(const std::u32string& a, const std::u32string& b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return 1.0 - static_cast<double>(levenshtein_u32(a, b)) / static_cast<double>(longest);
}

}  // namespace

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein_u32(decode_utf8(a), decode_utf8(b));
}

double label_similarity(std::string_view a, std::string_view b) {
  return similarity_u32(decode_utf8(a), decode_utf8(b));
}

std::vector<std::string> load_labels(const std::filesystem::path& path, const KnowledgeBase& kb) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<std::string> labels(kb.num_entities());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string iri = line.substr(0, tab);
    if (iri.size() >= 2 && iri.front() == '<' && iri.back() == '>') iri = iri.substr(1, iri.size() - 2);
    if (const auto id = kb.entities().find(iri)) labels[*id] = line.substr(tab + 1);
  }
  return labels;
}

std::vector<std::string> labels_from_pairs(std::span<const std::pair<std::string, std::string>> pairs,
                                           const KnowledgeBase& kb) {
  std::vector<std::string> labels(kb.num_entities());
  for (const auto& [iri, label] : pairs) {
    if (const auto id = kb.entities().find(iri)) labels[*id] = label;
  }
  return labels;
}

std::string label_from_iri(std::string_view iri) {
  if (const auto pos = iri.find_last_of("/#"); pos != std::string_view::npos) iri.remove_prefix(pos + 1);
  const auto hex = [](char h) -> int {
    if (h >= '0' && h <= '9') return h - '0';
    if (h >= 'a' && h <= 'f') return h - 'a' + 10;
    if (h >= 'A' && h <= 'F') return h - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < iri.size(); ++i) {
    const char c = iri[i];
    if (c == '%' && i + 2 < iri.size() && hex(iri[i + 1]) >= 0 && hex(iri[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(iri[i + 1]) * 16 + hex(iri[i + 2])));
      i += 2;
      continue;
    }
    out.push_back(c == '_' ? ' ' : c);
  }
  return out;
}

std::vector<std::string> labels_from_iris(const KnowledgeBase& kb) {
  std::vector<std::string> out;
  out.reserve(kb.num_entities());
  for (const auto& iri : kb.entities().names()) out.push_back(label_from_iri(iri));
  return out;
}

AlignmentResult string_rank(const LabelTable& labels, std::span<const EntityPair> pairs,
                            Direction direction, std::vector<std::size_t> ks) {
  const bool forward = direction == Direction::KB1ToKB2;
  const auto& translated = forward ? labels.translated1 : labels.translated2;
  const auto& targets = forward ? labels.labels2 : labels.labels1;
  const auto source_of = [&](const EntityPair& p) { return forward ? p.e1 : p.e2; };
  const auto target_of = [&](const EntityPair& p) { return forward ? p.e2 : p.e1; };
  const auto translation = [&](EntityId e) -> std::string_view {
    return e < translated.size() ? std::string_view(translated[e]) : std::string_view();
  };

  std::vector<EntityId> pool;
  for (const auto& p : pairs) pool.push_back(target_of(p));
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::vector<std::u32string> pool_labels;
  for (const EntityId c : pool) pool_labels.push_back(decode_utf8(c < targets.size() ? targets[c] : ""));

  AlignmentResult result;
  result.direction = direction;
  result.ks = std::move(ks);
  result.candidates = pool.size();
  result.ranks.assign(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      // An empty translation scores 0 against every label; ties fall back to id order.
      const auto s = decode_utf8(translation(source_of(pairs[i])));
      const EntityId t = target_of(pairs[i]);
      const auto t_pos = static_cast<std::size_t>(
          std::lower_bound(pool.begin(), pool.end(), t) - pool.begin());
      const double truth = similarity_u32(s, pool_labels[t_pos]);
      std::uint32_t rank = 1;
      for (std::size_t c = 0; c < pool.size(); ++c) {
        if (c == t_pos) continue;
        const double v = similarity_u32(s, pool_labels[c]);
        if (v > truth || (v == truth && pool[c] < t)) ++rank;
      }
      result.ranks[i] = rank;
    }
  });
  summarize(result);
  return result;
}

}  // namespace kgalign
