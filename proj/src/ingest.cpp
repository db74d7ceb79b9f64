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

#include "kgalign/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "kgalign/binary_io.hpp"
#include "kgalign/error.hpp"
#include "kgalign/log.hpp"

namespace kgalign {
namespace fs = std::filesystem;

namespace {

constexpr double kMaxMalformedRatio = 0.10;

std::string_view trim(std::string_view s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::string strip_brackets(std::string_view s) {
  if (s.size() >= 2 && s.front() == '<' && s.back() == '>') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Tokenizes "<s> <p> <o> ." or "<s> <p> "lit"^^<t> .". Returns nothing on
// malformed input; blank nodes come back as "_:..." tokens.
std::optional<std::vector<std::string>> parse_ntriples(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  };
  while (true) {
    skip_ws();
    if (i >= line.size()) break;
    if (line[i] == '.' && tokens.size() == 3) {
      ++i;
      skip_ws();
      if (i != line.size()) return std::nullopt;
      return tokens;
    }
    if (tokens.size() == 3) return std::nullopt;
    const auto start = i;
    if (line[i] == '<') {
      const auto end = line.find('>', i);
      if (end == std::string_view::npos) return std::nullopt;
      i = end + 1;
    } else if (line[i] == '"') {
      ++i;
      while (i < line.size() && line[i] != '"') i += (line[i] == '\\') ? 2 : 1;
      if (i >= line.size()) return std::nullopt;
      ++i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    } else {
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    }
    tokens.emplace_back(line.substr(start, i - start));
  }
  return std::nullopt;
}

enum class LineKind { Ok, Blank, Skip, Malformed };

LineKind parse_line(std::string_view line, TripleFormat format, bool literal_object,
                    RawTriple& out) {
  line = trim(line);
  if (line.empty() || line.front() == '#') return LineKind::Blank;
  if (format == TripleFormat::Jsonl) {
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.is_array() && j.size() == 3) {
        for (int k = 0; k < 3; ++k) out[k] = j[k].get<std::string>();
      } else if (j.is_object()) {
        const char* keys[3] = {"h", "r", "t"};
        const char* attr_keys[3] = {"e", "a", "v"};
        const auto& ks = j.contains("h") ? keys : attr_keys;
        for (int k = 0; k < 3; ++k) out[k] = j.at(ks[k]).get<std::string>();
      } else {
        return LineKind::Malformed;
      }
    } catch (const nlohmann::json::exception&) {
      return LineKind::Malformed;
    }
  } else {
    const auto fields = split_tabs(line);
    if (fields.size() == 3 || (literal_object && fields.size() > 3)) {
      out[0] = strip_brackets(trim(fields[0]));
      out[1] = strip_brackets(trim(fields[1]));
      // Literals may legitimately contain tabs.
      const auto third_start = fields[0].size() + fields[1].size() + 2;
      out[2] = std::string(literal_object ? trim(line.substr(third_start)) : trim(fields[2]));
      if (!literal_object) out[2] = strip_brackets(out[2]);
    } else if (fields.size() == 1 && (line.front() == '<' || line.starts_with("_:"))) {
      auto tokens = parse_ntriples(line);
      if (!tokens) return LineKind::Malformed;
      for (const auto& t : *tokens) {
        if (t.starts_with("_:")) return LineKind::Skip;
      }
      out[0] = strip_brackets((*tokens)[0]);
      out[1] = strip_brackets((*tokens)[1]);
      out[2] = literal_object ? (*tokens)[2] : strip_brackets((*tokens)[2]);
    } else {
      return LineKind::Malformed;
    }
  }
  if (literal_object) out[2] = literal_lexical_form(out[2]);
  if (out[0].empty() || out[1].empty() || (!literal_object && out[2].empty())) {
    return LineKind::Malformed;
  }
  return LineKind::Ok;
}

std::vector<RawTriple> load_triples(const fs::path& path, ParseReport* report,
                                    TripleFormat format, bool literal_object) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  ParseReport local;
  ParseReport& rep = report ? *report : local;
  rep = {};
  std::vector<RawTriple> triples;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t content_lines = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++rep.lines;
    RawTriple t;
    switch (parse_line(line, format, literal_object, t)) {
      case LineKind::Blank:
        continue;
      case LineKind::Skip:
        ++content_lines;
        continue;
      case LineKind::Malformed: {
        ++content_lines;
        ++rep.malformed;
        std::string msg = path.filename().string() + ":" + std::to_string(line_no) +
                          ": malformed line skipped";
        log::warn(msg);
        rep.warnings.push_back(std::move(msg));
        continue;
      }
      case LineKind::Ok:
        break;
    }
    ++content_lines;
    std::string key = t[0] + '\t' + t[1] + '\t' + t[2];
    if (!seen.insert(std::move(key)).second) {
      ++rep.duplicates;
      continue;
    }
    ++rep.parsed;
    triples.push_back(std::move(t));
  }
  if (content_lines > 0 &&
      static_cast<double>(rep.malformed) > kMaxMalformedRatio * static_cast<double>(content_lines)) {
    throw DataError(path.string() + ": " + std::to_string(rep.malformed) + " of " +
                    std::to_string(content_lines) + " lines malformed");
  }
  return triples;
}

// Built-in lexical matchers. tests/unit/test_ingest.cpp checks them against
// equivalent std::regex patterns.
bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string_view drop_sign(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  return s;
}

bool is_integer(std::string_view s) { return all_digits(drop_sign(s)); }

bool is_double(std::string_view s) {
  s = drop_sign(s);
  std::string_view mantissa = s;
  std::string_view exponent;
  bool has_exp = false;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    exponent = drop_sign(s.substr(e + 1));
    has_exp = true;
    if (!all_digits(exponent)) return false;
  }
  const auto dot = mantissa.find('.');
  if (dot == std::string_view::npos) return has_exp && all_digits(mantissa);
  const auto whole = mantissa.substr(0, dot);
  const auto frac = mantissa.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;
  return (whole.empty() || all_digits(whole)) && (frac.empty() || all_digits(frac));
}

bool two_digits_in(std::string_view s, std::size_t pos, int lo, int hi) {
  if (pos + 2 > s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])) ||
      !std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
    return false;
  }
  const int v = (s[pos] - '0') * 10 + (s[pos + 1] - '0');
  return v >= lo && v <= hi;
}

// Z | +HH:MM | -HH:MM | +HHMM | -HHMM, or nothing.
bool is_zone(std::string_view z) {
  if (z.empty() || z == "Z") return true;
  if (z.front() != '+' && z.front() != '-') return false;
  z.remove_prefix(1);
  if (z.size() == 5 && z[2] == ':') return two_digits_in(z, 0, 0, 23) && two_digits_in(z, 3, 0, 59);
  if (z.size() == 4) return two_digits_in(z, 0, 0, 23) && two_digits_in(z, 2, 0, 59);
  return false;
}

// YYYY-MM-DD[(T| )hh:mm[:ss[.fff]]][zone]
bool is_datetime(std::string_view s) {
  if (s.size() < 10 || !all_digits(s.substr(0, 4)) || s[4] != '-' || s[7] != '-') return false;
  if (!two_digits_in(s, 5, 1, 12) || !two_digits_in(s, 8, 1, 31)) return false;
  std::string_view rest = s.substr(10);
  if (!rest.empty() && (rest.front() == 'T' || rest.front() == ' ')) {
    rest.remove_prefix(1);
    if (rest.size() < 5 || !two_digits_in(rest, 0, 0, 23) || rest[2] != ':' ||
        !two_digits_in(rest, 3, 0, 59)) {
      return false;
    }
    rest.remove_prefix(5);
    if (!rest.empty() && rest.front() == ':') {
      if (!two_digits_in(rest, 1, 0, 60)) return false;
      rest.remove_prefix(3);
      if (!rest.empty() && rest.front() == '.') {
        rest.remove_prefix(1);
        std::size_t n = 0;
        while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n]))) ++n;
        if (n == 0) return false;
        rest.remove_prefix(n);
      }
    }
  }
  return is_zone(rest);
}

}  // namespace

std::string literal_lexical_form(std::string_view literal) {
  literal = trim(literal);
  if (literal.size() < 2 || literal.front() != '"') return std::string(literal);
  const auto close = literal.rfind('"');
  if (close == 0) return std::string(literal);
  const auto body = literal.substr(1, close - 1);
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size()) {
      const char c = body[++i];
      out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c == 'r' ? '\r' : c);
    } else {
      out.push_back(body[i]);
    }
  }
  return out;
}

RangeType abstract_attribute_value(std::string_view literal) {
  literal = trim(literal);
  if (is_integer(literal)) return RangeType::Integer;
  if (is_double(literal)) return RangeType::Double;
  if (is_datetime(literal)) return RangeType::Datetime;
  return RangeType::String;
}

void RangeRules::add_rule(const std::string& pattern, const std::string& type_name) {
  RangeType type = RangeType::String;
  bool found = false;
  for (auto t : {RangeType::Integer, RangeType::Double, RangeType::Datetime, RangeType::String}) {
    if (to_string(t) == type_name) {
      type = t;
      found = true;
    }
  }
  if (!found) {
    auto it = std::find(custom_names_.begin(), custom_names_.end(), type_name);
    if (it == custom_names_.end()) {
      if (custom_names_.size() >= 250) throw ConfigError("too many custom range types");
      custom_names_.push_back(type_name);
      it = custom_names_.end() - 1;
    }
    type = static_cast<RangeType>(4 + (it - custom_names_.begin()));
  }
  try {
    rules_.push_back({std::regex(pattern, std::regex::ECMAScript), type});
  } catch (const std::regex_error& e) {
    throw ConfigError("bad range rule pattern '" + pattern + "': " + e.what());
  }
}

RangeType RangeRules::classify(std::string_view literal) const {
  literal = trim(literal);
  for (const auto& rule : rules_) {
    if (std::regex_match(literal.begin(), literal.end(), rule.pattern)) return rule.type;
  }
  return abstract_attribute_value(literal);
}

std::string RangeRules::type_name(RangeType t) const {
  const auto code = static_cast<std::size_t>(t);
  if (code < 4) return std::string(to_string(t));
  if (code - 4 < custom_names_.size()) return custom_names_[code - 4];
  return "Custom" + std::to_string(code);
}

std::vector<RawTriple> load_relationship_triples(const fs::path& path, ParseReport* report,
                                                 TripleFormat format) {
  return load_triples(path, report, format, false);
}

std::vector<RawTriple> load_attribute_triples(const fs::path& path, ParseReport* report,
                                              TripleFormat format) {
  return load_triples(path, report, format, true);
}

std::vector<std::pair<std::string, std::string>> load_pairs(const fs::path& path,
                                                            ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  ParseReport local;
  ParseReport& rep = report ? *report : local;
  rep = {};
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t content = 0;
  while (std::getline(in, line)) {
    ++rep.lines;
    const auto t = trim(line);
    if (t.empty()) continue;
    ++content;
    const auto tab = t.find('\t');
    if (tab == std::string_view::npos) {
      ++rep.malformed;
      continue;
    }
    out.emplace_back(strip_brackets(trim(t.substr(0, tab))), std::string(trim(t.substr(tab + 1))));
    ++rep.parsed;
  }
  if (content > 0 &&
      static_cast<double>(rep.malformed) > kMaxMalformedRatio * static_cast<double>(content)) {
    throw DataError(path.string() + ": too many malformed lines");
  }
  return out;
}

DatasetLayout DatasetLayout::from_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  DatasetLayout layout;
  const auto opt = [&](const char* name) -> std::optional<fs::path> {
    const auto p = dir / name;
    return fs::exists(p) ? std::optional<fs::path>(p) : std::nullopt;
  };
  if (fs::exists(dir / "rel_triples_1")) {
    layout.rel_triples_1 = dir / "rel_triples_1";
    layout.rel_triples_2 = dir / "rel_triples_2";
    layout.attr_triples_1 = dir / "attr_triples_1";
    layout.attr_triples_2 = dir / "attr_triples_2";
    layout.reference_alignment = dir / "ent_links";
  } else {
    // Published DBP15K naming: <dir>/zh_en/{zh,en}_{rel,att}_triples, ent_ILLs.
    const auto name = dir.filename().empty() ? dir.parent_path().filename().string()
                                             : dir.filename().string();
    const auto us = name.find('_');
    if (us == std::string::npos) throw DataError("unrecognized dataset layout in " + dir.string());
    const auto l1 = name.substr(0, us);
    const auto l2 = name.substr(us + 1);
    layout.rel_triples_1 = dir / (l1 + "_rel_triples");
    layout.rel_triples_2 = dir / (l2 + "_rel_triples");
    layout.attr_triples_1 = dir / (l1 + "_att_triples");
    layout.attr_triples_2 = dir / (l2 + "_att_triples");
    layout.reference_alignment = dir / "ent_ILLs";
  }
  layout.labels_1 = opt("labels_1");
  layout.labels_2 = opt("labels_2");
  layout.translated_labels_1 = opt("translated_labels_1");
  layout.translated_labels_2 = opt("translated_labels_2");
  return layout;
}

void DatasetLayout::validate() const {
  for (const auto* p : {&rel_triples_1, &rel_triples_2, &reference_alignment}) {
    if (!fs::exists(*p)) throw DataError("missing dataset file " + p->string());
    if (fs::file_size(*p) == 0) throw DataError("empty dataset file " + p->string());
  }
  for (const auto* p : {&attr_triples_1, &attr_triples_2}) {
    if (!fs::exists(*p)) throw DataError("missing dataset file " + p->string());
  }
}

Dataset build_dataset(const RawDataset& raw, const RangeRules& rules) {
  Dataset data;
  const auto fill = [&](KnowledgeBase& kb, const std::vector<RawTriple>& rel,
                        const std::vector<RawTriple>& attr, IngestReport::Side& side) {
    for (const auto& t : rel) kb.add_rel_triple(t[0], t[1], t[2]);
    for (const auto& t : attr) kb.add_attr_fact(t[0], t[1], rules.classify(t[2]));
    side.entities = kb.num_entities();
    side.relationships = kb.num_relationships();
    side.attributes = kb.num_attributes();
    side.rel_triples = kb.rel_triples().size();
    side.attr_triples = attr.size();
    const auto mask = kb.structural_mask();
    side.attribute_only_entities = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 0));
  };
  fill(data.kb1, raw.rel1, raw.attr1, data.report.kb1);
  fill(data.kb2, raw.rel2, raw.attr2, data.report.kb2);
  std::vector<char> used1(data.kb1.num_entities(), 0), used2(data.kb2.num_entities(), 0);
  for (const auto& [a, b] : raw.gold) {
    const auto e1 = data.kb1.entities().find(a);
    const auto e2 = data.kb2.entities().find(b);
    if (!e1 || !e2) {
      ++data.report.dropped_gold_pairs;
      continue;
    }
    if (used1[*e1] || used2[*e2]) {
      ++data.report.dropped_gold_pairs;
      data.report.warnings.push_back("duplicate gold membership dropped: " + a + " / " + b);
      continue;
    }
    used1[*e1] = used2[*e2] = 1;
    data.gold.push_back({*e1, *e2});
  }
  if (data.report.dropped_gold_pairs > 0) {
    std::string msg = std::to_string(data.report.dropped_gold_pairs) +
                      " reference pairs dropped (unknown IRI or repeated entity)";
    log::warn(msg);
    data.report.warnings.push_back(std::move(msg));
  }
  data.report.gold_pairs = data.gold.size();
  return data;
}

Dataset load_dataset(const DatasetLayout& layout, const RangeRules& rules, TripleFormat format) {
  layout.validate();
  RawDataset raw;
  std::vector<std::string> warnings;
  ParseReport rep;
  const auto collect = [&] {
    warnings.insert(warnings.end(), rep.warnings.begin(), rep.warnings.end());
  };
  raw.rel1 = load_relationship_triples(layout.rel_triples_1, &rep, format);
  collect();
  raw.rel2 = load_relationship_triples(layout.rel_triples_2, &rep, format);
  collect();
  raw.attr1 = load_attribute_triples(layout.attr_triples_1, &rep, format);
  collect();
  raw.attr2 = load_attribute_triples(layout.attr_triples_2, &rep, format);
  collect();
  raw.gold = load_pairs(layout.reference_alignment, &rep);
  collect();
  for (auto& [a, b] : raw.gold) b = strip_brackets(b);
  auto data = build_dataset(raw, rules);
  data.report.warnings.insert(data.report.warnings.begin(), warnings.begin(), warnings.end());
  return data;
}

std::string IngestReport::table(std::string_view name1, std::string_view name2) const {
  std::ostringstream out;
  const auto row = [&](std::string_view name, const Side& s) {
    out << std::left << std::setw(10) << name << std::right << std::setw(10) << s.entities
        << std::setw(15) << s.relationships << std::setw(12) << s.attributes << std::setw(14)
        << s.rel_triples << std::setw(15) << s.attr_triples << '\n';
  };
  out << std::left << std::setw(10) << "" << std::right << std::setw(10) << "Entities"
      << std::setw(15) << "Relationships" << std::setw(12) << "Attributes" << std::setw(14)
      << "Rel. triples" << std::setw(15) << "Attr. triples" << '\n';
  row(name1, kb1);
  row(name2, kb2);
  out << "reference pairs: " << gold_pairs;
  if (dropped_gold_pairs > 0) out << " (" << dropped_gold_pairs << " dropped)";
  out << '\n';
  return out.str();
}

namespace {

constexpr std::array<char, 8> kCacheMagic = {'K', 'G', 'A', 'L', 'C', 'A', 'C', 'H'};
constexpr std::uint8_t kCacheVersion = 1;

void write_kb(std::ostream& out, const KnowledgeBase& kb) {
  binio::write<std::uint8_t>(out, static_cast<std::uint8_t>(kb.kb_id()));
  for (const auto* table : {&kb.entities(), &kb.relationships(), &kb.attributes()}) {
    binio::write<std::uint64_t>(out, table->size());
    for (const auto& s : table->names()) binio::write_string(out, s);
  }
  binio::write_vector(out, kb.rel_triples());
  binio::write<std::uint64_t>(out, kb.attr_facts().size());
  for (const auto& f : kb.attr_facts()) {
    binio::write<std::uint32_t>(out, f.entity);
    binio::write<std::uint32_t>(out, f.attr);
    binio::write<std::uint8_t>(out, static_cast<std::uint8_t>(f.range));
  }
}

KnowledgeBase read_kb(std::istream& in) {
  const int kb_id = binio::read<std::uint8_t>(in);
  std::array<std::vector<std::string>, 3> tables;
  for (auto& t : tables) {
    const auto n = binio::read<std::uint64_t>(in);
    t.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) t.push_back(binio::read_string(in));
  }
  auto triples = binio::read_vector<RelTriple>(in);
  std::vector<AttrFact> facts(binio::read<std::uint64_t>(in));
  for (auto& f : facts) {
    f.entity = binio::read<std::uint32_t>(in);
    f.attr = binio::read<std::uint32_t>(in);
    f.range = static_cast<RangeType>(binio::read<std::uint8_t>(in));
  }
  return KnowledgeBase::from_parts(kb_id, std::move(tables[0]), std::move(tables[1]),
                                   std::move(tables[2]), std::move(triples), std::move(facts));
}

}  // namespace

void write_dataset_cache(const fs::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  binio::write_header(out, kCacheMagic, kCacheVersion);
  write_kb(out, data.kb1);
  write_kb(out, data.kb2);
  binio::write_vector(out, data.gold);
  binio::write<std::uint64_t>(out, data.report.kb1.attr_triples);
  binio::write<std::uint64_t>(out, data.report.kb2.attr_triples);
  binio::write<std::uint64_t>(out, data.report.dropped_gold_pairs);
  if (!out) throw DataError("failed writing " + path.string());
}

Dataset read_dataset_cache(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  binio::expect_header(in, kCacheMagic, kCacheVersion, "dataset cache");
  Dataset data;
  data.kb1 = read_kb(in);
  data.kb2 = read_kb(in);
  data.gold = binio::read_vector<EntityPair>(in);
  const auto side = [](const KnowledgeBase& kb, std::uint64_t attr_triples) {
    IngestReport::Side s;
    s.entities = kb.num_entities();
    s.relationships = kb.num_relationships();
    s.attributes = kb.num_attributes();
    s.rel_triples = kb.rel_triples().size();
    s.attr_triples = attr_triples;
    const auto mask = kb.structural_mask();
    s.attribute_only_entities = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 0));
    return s;
  };
  data.report.kb1 = side(data.kb1, binio::read<std::uint64_t>(in));
  data.report.kb2 = side(data.kb2, binio::read<std::uint64_t>(in));
  data.report.dropped_gold_pairs = binio::read<std::uint64_t>(in);
  data.report.gold_pairs = data.gold.size();
  for (const auto& p : data.gold) {
    if (p.e1 >= data.kb1.num_entities() || p.e2 >= data.kb2.num_entities()) {
      throw DataError("dataset cache: gold pair out of range");
    }
  }
  return data;
}

}  // namespace kgalign
