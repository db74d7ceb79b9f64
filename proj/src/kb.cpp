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

#include "kgalign/kb.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kgalign/error.hpp"
#include "kgalign/rng.hpp"

namespace kgalign {

std::string_view to_string(RangeType t) {
  switch (t) {
    case RangeType::Integer: return "Integer";
    case RangeType::Double: return "Double";
    case RangeType::Datetime: return "Datetime";
    case RangeType::String: return "String";
  }
  return "Custom";
}

std::uint32_t Interner::intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(s);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::uint64_t fact_key(const AttrFact& f) {
  return (std::uint64_t{f.entity} << 32) ^ (std::uint64_t{f.attr} << 8) ^
         static_cast<std::uint64_t>(f.range);
}

}  // namespace

bool KnowledgeBase::add_rel_triple(std::string_view head, std::string_view rel,
                                   std::string_view tail) {
  const RelTriple t{entities_.intern(head), relationships_.intern(rel), entities_.intern(tail)};
  if (!triple_set_.insert(t).second) return false;
  rel_triples_.push_back(t);
  return true;
}

bool KnowledgeBase::add_attr_fact(std::string_view entity, std::string_view attr,
                                  RangeType range) {
  const AttrFact f{entities_.intern(entity), attributes_.intern(attr), range};
  if (!fact_set_.insert(fact_key(f)).second) return false;
  attr_facts_.push_back(f);
  return true;
}

std::vector<char> KnowledgeBase::structural_mask() const {
  std::vector<char> mask(num_entities(), 0);
  for (const auto& t : rel_triples_) {
    mask[t.head] = 1;
    mask[t.tail] = 1;
  }
  return mask;
}

std::vector<std::vector<AttrFact>> KnowledgeBase::facts_by_entity() const {
  std::vector<std::vector<AttrFact>> out(num_entities());
  for (const auto& f : attr_facts_) out[f.entity].push_back(f);
  return out;
}

void KnowledgeBase::validate() const {
  const auto ne = num_entities();
  for (const auto& t : rel_triples_) {
    if (t.head >= ne || t.tail >= ne || t.rel >= num_relationships()) {
      throw DataError("KB" + std::to_string(kb_id_) + ": relationship triple id out of range");
    }
  }
  for (const auto& f : attr_facts_) {
    if (f.entity >= ne || f.attr >= num_attributes()) {
      throw DataError("KB" + std::to_string(kb_id_) + ": attribute fact id out of range");
    }
  }
}

bool KnowledgeBase::operator==(const KnowledgeBase& o) const {
  return kb_id_ == o.kb_id_ && entities_ == o.entities_ && relationships_ == o.relationships_ &&
         attributes_ == o.attributes_ && rel_triples_ == o.rel_triples_ &&
         attr_facts_ == o.attr_facts_;
}

KnowledgeBase KnowledgeBase::from_parts(int kb_id, std::vector<std::string> entities,
                                        std::vector<std::string> relationships,
                                        std::vector<std::string> attributes,
                                        std::vector<RelTriple> rel_triples,
                                        std::vector<AttrFact> attr_facts) {
  KnowledgeBase kb(kb_id);
  for (const auto& s : entities) kb.entities_.intern(s);
  for (const auto& s : relationships) kb.relationships_.intern(s);
  for (const auto& s : attributes) kb.attributes_.intern(s);
  if (kb.entities_.size() != entities.size() || kb.relationships_.size() != relationships.size() ||
      kb.attributes_.size() != attributes.size()) {
    throw DataError("KB" + std::to_string(kb_id) + ": duplicate names in id table");
  }
  for (const auto& t : rel_triples) {
    if (kb.triple_set_.insert(t).second) kb.rel_triples_.push_back(t);
  }
  for (const auto& f : attr_facts) {
    if (kb.fact_set_.insert(fact_key(f)).second) kb.attr_facts_.push_back(f);
  }
  kb.validate();
  return kb;
}

namespace {

std::string pair_str(std::uint32_t a, std::uint32_t b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

template <typename Pairs>
void check_injective(const Pairs& pairs, std::size_t n1, std::size_t n2, const char* kind) {
  std::vector<char> used1(n1, 0), used2(n2, 0);
  for (const auto& [a, b] : pairs) {
    if (a >= n1 || b >= n2) {
      throw DataError(std::string("seed ") + kind + " pair " + pair_str(a, b) +
                      " references an unknown id");
    }
    if (used1[a] || used2[b]) {
      throw DataError(std::string("seed ") + kind + " pair " + pair_str(a, b) +
                      " reuses an item already paired");
    }
    used1[a] = used2[b] = 1;
  }
}

}  // namespace

void SeedAlignment::validate(const KnowledgeBase& kb1, const KnowledgeBase& kb2) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ents;
  ents.reserve(entity_pairs.size());
  for (const auto& p : entity_pairs) ents.emplace_back(p.e1, p.e2);
  check_injective(ents, kb1.num_entities(), kb2.num_entities(), "entity");
  check_injective(relationship_pairs, kb1.num_relationships(), kb2.num_relationships(),
                  "relationship");
  check_injective(attribute_pairs, kb1.num_attributes(), kb2.num_attributes(), "attribute");
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t rng_seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(rng_seed);
  // Fisher-Yates with our own index draw so the order only depends on mt19937_64.
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
  return idx;
}

}  // namespace

GoldStandard split_gold(std::span<const EntityPair> full, double p, std::uint64_t rng_seed) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("seed fraction must lie in (0, 1), got " + std::to_string(p));
  }
  GoldStandard gold;
  gold.full.assign(full.begin(), full.end());
  gold.seed_fraction = p;
  gold.rng_seed = rng_seed;
  const auto idx = shuffled_indices(full.size(), rng_seed);
  const auto n_seed = static_cast<std::size_t>(std::llround(p * static_cast<double>(full.size())));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    (i < n_seed ? gold.seed : gold.test).push_back(full[idx[i]]);
  }
  return gold;
}

std::pair<std::vector<EntityPair>, std::vector<EntityPair>> hold_out(
    std::span<const EntityPair> pairs, double fraction, std::uint64_t rng_seed) {
  const auto n_out =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pairs.size())));
  const auto idx = shuffled_indices(pairs.size(), rng_seed);
  std::pair<std::vector<EntityPair>, std::vector<EntityPair>> out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    (i < n_out ? out.second : out.first).push_back(pairs[idx[i]]);
  }
  return out;
}

namespace {

template <typename Pairs>
SlotMap unify(std::size_t n1, std::size_t n2, const Pairs& pairs) {
  SlotMap m;
  m.kb1.resize(n1);
  std::iota(m.kb1.begin(), m.kb1.end(), Slot{0});
  constexpr Slot kUnset = ~Slot{0};
  m.kb2.assign(n2, kUnset);
  for (const auto& [a, b] : pairs) {
    m.kb2[b] = m.kb1[a];
    ++m.shared;
  }
  Slot next = static_cast<Slot>(n1);
  for (auto& s : m.kb2) {
    if (s == kUnset) s = next++;
  }
  m.slots = next;
  return m;
}

}  // namespace

UnifiedIndex merge_for_training(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                const SeedAlignment& seeds, bool unify_properties) {
  seeds.validate(kb1, kb2);
  UnifiedIndex index;
  std::vector<std::pair<EntityId, EntityId>> ents;
  for (const auto& p : seeds.entity_pairs) ents.emplace_back(p.e1, p.e2);
  index.entities = unify(kb1.num_entities(), kb2.num_entities(), ents);
  using PropPairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  index.relationships = unify(kb1.num_relationships(), kb2.num_relationships(),
                              unify_properties ? seeds.relationship_pairs : PropPairs{});
  index.attributes = unify(kb1.num_attributes(), kb2.num_attributes(),
                           unify_properties ? seeds.attribute_pairs : PropPairs{});
  return index;
}

std::string normalize_property_label(std::string_view iri) {
  if (!iri.empty() && iri.front() == '<') iri.remove_prefix(1);
  if (!iri.empty() && iri.back() == '>') iri.remove_suffix(1);
  if (const auto pos = iri.find_last_of("/#"); pos != std::string_view::npos) {
    iri.remove_prefix(pos + 1);
  } else if (const auto colon = iri.find(':'); colon != std::string_view::npos) {
    iri.remove_prefix(colon + 1);
  }
  std::string out(iri);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> match_labels(const Interner& a,
                                                                  const Interner& b) {
  std::unordered_map<std::string, std::uint32_t> first_b;
  for (std::uint32_t j = 0; j < b.size(); ++j) first_b.try_emplace(normalize_property_label(b.resolve(j)), j);
  std::unordered_set<std::string> seen_a;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    auto label = normalize_property_label(a.resolve(i));
    if (label.empty() || !seen_a.insert(label).second) continue;
    if (auto it = first_b.find(label); it != first_b.end()) out.emplace_back(i, it->second);
  }
  return out;
}

}  // namespace

void match_property_pairs(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                          SeedAlignment& seeds) {
  seeds.relationship_pairs = match_labels(kb1.relationships(), kb2.relationships());
  seeds.attribute_pairs = match_labels(kb1.attributes(), kb2.attributes());
}

}  // namespace kgalign
