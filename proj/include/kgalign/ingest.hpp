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

#ifndef KGALIGN_INGEST_HPP
#define KGALIGN_INGEST_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgalign/kb.hpp"

namespace kgalign {

using RawTriple = std::array<std::string, 3>;

enum class TripleFormat {
  Tsv,    // head \t relation \t tail, N-Triples lines also accepted
  Jsonl,  // ["head", "relation", "tail"] or {"h": .., "r": .., "t": ..}
};

/// Counters filled while parsing one triple file.
struct ParseReport {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t duplicates = 0;
  std::size_t malformed = 0;
  std::vector<std::string> warnings;
};

/// Reads one relationship triple per line. Duplicate lines collapse;
/// malformed lines are skipped with a warning, and DataError is raised when
/// more than 10% of the non-blank lines are malformed or the file is unreadable.
std::vector<RawTriple> load_relationship_triples(const std::filesystem::path& path,
                                                 ParseReport* report = nullptr,
                                                 TripleFormat format = TripleFormat::Tsv);

/// Same contract for attribute triples. The third field is the literal in
/// lexical form: N-Triples quoting, datatype and language tags are removed.
std::vector<RawTriple> load_attribute_triples(const std::filesystem::path& path,
                                              ParseReport* report = nullptr,
                                              TripleFormat format = TripleFormat::Tsv);

/// Lexical form of a literal: strips N-Triples quotes, ^^<datatype> and @lang.
std::string literal_lexical_form(std::string_view literal);

/// Ordered rule table mapping literals to range types. Custom regex rules
/// are tried first, then the built-in Integer, Double and Datetime matchers;
/// anything else is String.
class RangeRules {
 public:
  RangeRules() = default;

  /// Adds a rule whose full-match regex selects `type_name`. Unknown names
  /// get a fresh custom code after the built-in four.
  void add_rule(const std::string& pattern, const std::string& type_name);

  RangeType classify(std::string_view literal) const;
  std::string type_name(RangeType t) const;

 private:
  struct Rule {
    std::regex pattern;
    RangeType type;
  };
  std::vector<Rule> rules_;
  std::vector<std::string> custom_names_;
};

/// Built-in classifier: trimmed literal -> Integer | Double | Datetime | String.
RangeType abstract_attribute_value(std::string_view literal);

/// Filenames of one dataset. Label files are only used by the string baseline.
struct DatasetLayout {
  std::filesystem::path rel_triples_1;
  std::filesystem::path rel_triples_2;
  std::filesystem::path attr_triples_1;
  std::filesystem::path attr_triples_2;
  std::filesystem::path reference_alignment;
  std::optional<std::filesystem::path> labels_1;
  std::optional<std::filesystem::path> labels_2;
  std::optional<std::filesystem::path> translated_labels_1;
  std::optional<std::filesystem::path> translated_labels_2;

  /// Standard names (rel_triples_1, ..., ent_links) or the published
  /// DBP15K names (zh_rel_triples, en_att_triples, ent_ILLs) when the
  /// directory is named like "zh_en".
  static DatasetLayout from_dir(const std::filesystem::path& dir);

  /// Throws DataError when a required file is missing or empty.
  /// Attribute files may be empty.
  void validate() const;
};

/// String-level dataset prior to interning.
struct RawDataset {
  std::vector<RawTriple> rel1, rel2;
  std::vector<RawTriple> attr1, attr2;
  std::vector<std::pair<std::string, std::string>> gold;
};

struct IngestReport {
  struct Side {
    std::size_t entities = 0;
    std::size_t relationships = 0;
    std::size_t attributes = 0;
    std::size_t rel_triples = 0;
    std::size_t attr_triples = 0;
    std::size_t attribute_only_entities = 0;
  };
  Side kb1, kb2;
  std::size_t gold_pairs = 0;
  std::size_t dropped_gold_pairs = 0;
  std::vector<std::string> warnings;

  /// Table-style summary: Entities, Relationships, Attributes, Rel. triples, Attr. triples.
  std::string table(std::string_view name1 = "KB1", std::string_view name2 = "KB2") const;
};

struct Dataset {
  KnowledgeBase kb1{1};
  KnowledgeBase kb2{2};
  std::vector<EntityPair> gold;
  IngestReport report;
};

/// Interns a raw dataset. Relationship triples are interned before
/// attribute triples so entity ids follow first occurrence in that order.
/// Gold pairs naming unknown IRIs are dropped with a warning.
Dataset build_dataset(const RawDataset& raw, const RangeRules& rules = {});

/// Reads a two-column file (a \t b), e.g. the reference alignment or labels.
std::vector<std::pair<std::string, std::string>> load_pairs(const std::filesystem::path& path,
                                                            ParseReport* report = nullptr);

Dataset load_dataset(const DatasetLayout& layout, const RangeRules& rules = {},
                     TripleFormat format = TripleFormat::Tsv);

/// Versioned binary snapshot of both KBs and the gold pairs.
void write_dataset_cache(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_cache(const std::filesystem::path& path);

}  // namespace kgalign

#endif  // KGALIGN_INGEST_HPP
