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

#include "kgalign/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <tuple>

#include "kgalign/error.hpp"
#include "kgalign/rng.hpp"

namespace kgalign {
namespace fs = std::filesystem;

void SynthSpec::validate() const {
  if (n_entities < 5 || n_relations == 0 || n_attributes == 0 || attribute_groups == 0) {
    throw ConfigError("synth: counts must be positive (n_entities >= 5)");
  }
  if (triples_per_entity < 4) {
    throw ConfigError("synth: triples_per_entity must be >= 4 so every gold entity has 4 triples");
  }
  if (triples_per_entity > (n_entities - 1) * n_relations / 2) {
    throw ConfigError("synth: triples_per_entity too large for n_entities and n_relations");
  }
  if (attribute_groups > n_attributes) throw ConfigError("synth: more attribute groups than attributes");
  if (attributes_per_entity_min == 0 || attributes_per_entity_min > attributes_per_entity_max) {
    throw ConfigError("synth: need 1 <= attributes_per_entity_min <= attributes_per_entity_max");
  }
  if (!(structural_noise >= 0.0 && structural_noise < 1.0)) {
    throw ConfigError("synth: structural_noise must lie in [0, 1)");
  }
  if (!(seed_fraction > 0.0 && seed_fraction < 1.0)) throw ConfigError("synth: seed_fraction must lie in (0, 1)");
  for (const double f : {group_overlap, shared_property_fraction, label_noise}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("synth: fractions must lie in [0, 1]");
  }
}

namespace {

const char* const kSyllables1[] = {"ka", "lo", "mi", "ru", "sen", "ta", "vi", "no", "pe", "zu",
                                   "ha", "ri", "do", "me", "ku", "sa"};
const char* const kSyllables2[] = {"bra", "del", "fin", "gor", "jas", "kel", "mor", "pra",
                                   "qui", "ston", "tre", "vel", "wan", "yor", "zel", "cru"};

template <std::size_t N>
std::string pseudo_word(Rng& rng, const char* const (&syllables)[N]) {
  std::string w;
  const std::size_t n = 2 + uniform_index(rng, 3);
  for (std::size_t i = 0; i < n; ++i) w += syllables[uniform_index(rng, N)];
  return w;
}

std::string literal_for(RangeType t, Rng& rng) {
  switch (t) {
    case RangeType::Integer:
      return std::to_string(uniform_index(rng, 100000));
    case RangeType::Double:
      return std::to_string(uniform_index(rng, 10000)) + "." + std::to_string(uniform_index(rng, 100));
    case RangeType::Datetime: {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04zu-%02zu-%02zu", 1800 + uniform_index(rng, 220),
                    1 + uniform_index(rng, 12), 1 + uniform_index(rng, 28));
      return buf;
    }
    default:
      return pseudo_word(rng, kSyllables1);
  }
}

std::vector<std::size_t> permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_index(rng, i)]);
  return p;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace

SynthDataset generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.rng_seed);
  const std::size_t n = spec.n_entities;
  const std::string ns1 = "http://kb1.example.org/";
  const std::string ns2 = "http://kb2.example.org/";
  const auto ent1 = [&](std::size_t i) { return ns1 + "resource/E" + std::to_string(i); };
  const auto rel1 = [&](std::size_t r) { return ns1 + "property/rel" + std::to_string(r); };
  const auto att1 = [&](std::size_t a) { return ns1 + "property/attr" + std::to_string(a); };

  // Relationship triples of KB1, each entity heading triples_per_entity of them.
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> triples;
  std::vector<std::size_t> urn(n);
  std::iota(urn.begin(), urn.end(), std::size_t{0});
  for (const std::size_t h : permutation(n, rng)) {
    std::size_t made = 0;
    for (std::size_t attempt = 0; made < spec.triples_per_entity; ++attempt) {
      if (attempt > 1000 * spec.triples_per_entity) throw ConfigError("synth: cannot place triples");
      const std::size_t t = spec.preferential_attachment ? urn[uniform_index(rng, urn.size())]
                                                         : uniform_index(rng, n);
      const std::size_t r = uniform_index(rng, spec.n_relations);
      if (t == h || !seen.emplace(h, r, t).second) continue;
      triples.emplace_back(h, r, t);
      urn.push_back(t);
      ++made;
    }
  }

  // Attribute groups and per-entity attribute sets.
  std::vector<RangeType> attr_type(spec.n_attributes);
  for (auto& t : attr_type) t = static_cast<RangeType>(uniform_index(rng, 4));
  const std::size_t groups = spec.attribute_groups;
  std::vector<std::vector<std::size_t>> group_attrs(groups);
  for (std::size_t a = 0; a < spec.n_attributes; ++a) group_attrs[a % groups].push_back(a);
  std::vector<std::vector<std::size_t>> entity_attrs(n);
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t g = uniform_index(rng, groups);
    const std::size_t want = spec.attributes_per_entity_min +
        uniform_index(rng, spec.attributes_per_entity_max - spec.attributes_per_entity_min + 1);
    auto& list = entity_attrs[e];
    for (std::size_t attempt = 0; list.size() < want && attempt < 50 * want; ++attempt) {
      const bool foreign = groups > 1 && uniform_unit(rng) < spec.group_overlap;
      const std::size_t src = foreign ? (g + 1 + uniform_index(rng, groups - 1)) % groups : g;
      const std::size_t a = group_attrs[src][uniform_index(rng, group_attrs[src].size())];
      if (std::find(list.begin(), list.end(), a) == list.end()) list.push_back(a);
    }
  }

  SynthDataset out;
  auto& raw = out.raw;
  std::vector<std::vector<std::string>> literals(n);
  for (const auto& [h, r, t] : triples) raw.rel1.push_back({ent1(h), rel1(r), ent1(t)});
  for (std::size_t e = 0; e < n; ++e) {
    for (const std::size_t a : entity_attrs[e]) {
      literals[e].push_back(literal_for(attr_type[a], rng));
      raw.attr1.push_back({ent1(e), att1(a), literals[e].back()});
    }
  }

  // KB2: hidden relabeling of entities and properties.
  out.permutation = permutation(n, rng);
  const auto rel_perm = permutation(spec.n_relations, rng);
  const auto att_perm = permutation(spec.n_attributes, rng);
  std::vector<std::string> rel2(spec.n_relations), att2(spec.n_attributes);
  for (std::size_t r = 0; r < spec.n_relations; ++r) {
    rel2[r] = uniform_unit(rng) < spec.shared_property_fraction
                  ? ns2 + "property/rel" + std::to_string(r)
                  : ns2 + "property/p" + std::to_string(rel_perm[r]);
  }
  for (std::size_t a = 0; a < spec.n_attributes; ++a) {
    att2[a] = uniform_unit(rng) < spec.shared_property_fraction
                  ? ns2 + "property/attr" + std::to_string(a)
                  : ns2 + "property/q" + std::to_string(att_perm[a]);
  }
  const auto ent2 = [&](std::size_t i) { return ns2 + "resource/F" + std::to_string(out.permutation[i]); };
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> kb2_seen;
  for (const auto& [h, r, t] : triples) {
    std::size_t tail = t;
    if (uniform_unit(rng) < spec.structural_noise) {
      if (uniform_index(rng, 2) == 0) continue;  // dropped
      do {
        tail = uniform_index(rng, n);
      } while (tail == h);
    }
    if (!kb2_seen.emplace(h, r, tail).second) continue;
    raw.rel2.push_back({ent2(h), rel2[r], ent2(tail)});
  }
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t k = 0; k < entity_attrs[e].size(); ++k) {
      raw.attr2.push_back({ent2(e), att2[entity_attrs[e][k]], literals[e][k]});
    }
  }
  shuffle(raw.rel2, rng);
  shuffle(raw.attr2, rng);
  for (std::size_t e = 0; e < n; ++e) raw.gold.emplace_back(ent1(e), ent2(e));

  // Labels in two made-up languages; translations are right except for label_noise.
  std::vector<std::string> word1(n), word2(n);
  for (std::size_t e = 0; e < n; ++e) {
    word1[e] = pseudo_word(rng, kSyllables1);
    word2[e] = pseudo_word(rng, kSyllables2);
  }
  for (std::size_t e = 0; e < n; ++e) {
    out.labels1.emplace_back(ent1(e), word1[e]);
    out.labels2.emplace_back(ent2(e), word2[e]);
    const bool wrong1 = uniform_unit(rng) < spec.label_noise;
    const bool wrong2 = uniform_unit(rng) < spec.label_noise;
    out.translated1.emplace_back(ent1(e), wrong1 ? pseudo_word(rng, kSyllables2) : word2[e]);
    out.translated2.emplace_back(ent2(e), wrong2 ? pseudo_word(rng, kSyllables1) : word1[e]);
  }
  return out;
}

namespace {

void write_rows(const fs::path& path, const std::vector<RawTriple>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : rows) out << r[0] << '\t' << r[1] << '\t' << r[2] << '\n';
}

void write_pairs(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& [a, b] : rows) out << a << '\t' << b << '\n';
}

}  // namespace

void write_dataset(const SynthDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  write_rows(dir / "rel_triples_1", data.raw.rel1);
  write_rows(dir / "rel_triples_2", data.raw.rel2);
  write_rows(dir / "attr_triples_1", data.raw.attr1);
  write_rows(dir / "attr_triples_2", data.raw.attr2);
  write_pairs(dir / "ent_links", data.raw.gold);
  write_pairs(dir / "labels_1", data.labels1);
  write_pairs(dir / "labels_2", data.labels2);
  write_pairs(dir / "translated_labels_1", data.translated1);
  write_pairs(dir / "translated_labels_2", data.translated2);
}

}  // namespace kgalign
