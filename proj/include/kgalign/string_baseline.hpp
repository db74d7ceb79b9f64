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

#ifndef KGALIGN_STRING_BASELINE_HPP
#define KGALIGN_STRING_BASELINE_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgalign/eval.hpp"
#include "kgalign/kb.hpp"

namespace kgalign {

/// Unicode scalar values of a UTF-8 string. Invalid bytes decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);

/// Edit distance with unit insert, delete and substitute costs, counted
/// over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 − lev(a, b) / max(|a|, |b|); 0 when both are empty.
double label_similarity(std::string_view a, std::string_view b);

/// Labels of both KBs indexed by entity id; "" means no label. translated1
/// holds KB1 labels rendered in KB2's language and translated2 the reverse.
struct LabelTable {
  std::vector<std::string> labels1;
  std::vector<std::string> labels2;
  std::vector<std::string> translated1;
  std::vector<std::string> translated2;
};

/// Reads `iri \t label` lines for the entities of `kb`. Unknown IRIs are skipped.
std::vector<std::string> load_labels(const std::filesystem::path& path, const KnowledgeBase& kb);

/// Same as load_labels for pairs already in memory.
std::vector<std::string> labels_from_pairs(std::span<const std::pair<std::string, std::string>> pairs,
                                           const KnowledgeBase& kb);

/// Label from an IRI's local name: text after the last '/' or '#',
/// percent-decoded, underscores turned into spaces.
std::string label_from_iri(std::string_view iri);
std::vector<std::string> labels_from_iris(const KnowledgeBase& kb);

/// Ranks the test targets of each pair by label_similarity between the
/// source's translated label and each target label, with the tie rule of
/// rank_targets. A source without a translated label scores 0 against every
/// target, so its rank falls to the id tie-break.
AlignmentResult string_rank(const LabelTable& labels, std::span<const EntityPair> pairs,
                            Direction direction, std::vector<std::size_t> ks = {1, 10, 50});

}  // namespace kgalign

#endif  // KGALIGN_STRING_BASELINE_HPP
