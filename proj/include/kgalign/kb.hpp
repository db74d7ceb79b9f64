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

#ifndef KGALIGN_KB_HPP
#define KGALIGN_KB_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kgalign {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using AttributeId = std::uint32_t;
using Slot = std::uint32_t;

/// Abstract range type of an attribute value. Codes 0-3 are built in;
/// custom range rules may introduce further codes.
enum class RangeType : std::uint8_t { Integer = 0, Double = 1, Datetime = 2, String = 3 };

std::string_view to_string(RangeType t);

struct RelTriple {
  EntityId head;
  RelationId rel;
  EntityId tail;
  bool operator==(const RelTriple&) const = default;
};

struct RelTripleHash {
  std::size_t operator()(const RelTriple& t) const noexcept {
    std::uint64_t h = (std::uint64_t{t.head} << 32) ^ t.tail;
    h ^= std::uint64_t{t.rel} * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xbf58476d1ce4e5b9ULL);
  }
};

struct AttrFact {
  EntityId entity;
  AttributeId attr;
  RangeType range;
  bool operator==(const AttrFact&) const = default;
};

struct EntityPair {
  EntityId e1;
  EntityId e2;
  bool operator==(const EntityPair&) const = default;
};

// Snapshots write these structs as raw bytes.
static_assert(sizeof(RelTriple) == 12 && sizeof(EntityPair) == 8);

/// Bidirectional string <-> dense id table. Ids follow first-occurrence order.
class Interner {
 public:
  std::uint32_t intern(std::string_view s);
  std::optional<std::uint32_t> find(std::string_view s) const;
  const std::string& resolve(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool operator==(const Interner& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// One knowledge base: interned entities, relationships and attributes plus
/// its relationship triples and abstracted attribute facts.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(int kb_id = 1) : kb_id_(kb_id) {}

  int kb_id() const noexcept { return kb_id_; }

  /// Interns the three IRIs and records the triple. Returns false when the
  /// triple was already present.
  bool add_rel_triple(std::string_view head, std::string_view rel, std::string_view tail);
  /// Records (entity, attribute, range). Duplicate facts collapse.
  bool add_attr_fact(std::string_view entity, std::string_view attr, RangeType range);

  const Interner& entities() const noexcept { return entities_; }
  const Interner& relationships() const noexcept { return relationships_; }
  const Interner& attributes() const noexcept { return attributes_; }
  const std::vector<RelTriple>& rel_triples() const noexcept { return rel_triples_; }
  const std::vector<AttrFact>& attr_facts() const noexcept { return attr_facts_; }

  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_relationships() const noexcept { return relationships_.size(); }
  std::size_t num_attributes() const noexcept { return attributes_.size(); }

  bool contains(const RelTriple& t) const { return triple_set_.contains(t); }

  /// true for entities that occur in at least one relationship triple.
  /// Entities outside this mask appear only in attribute triples; structure
  /// embedding never updates them.
  std::vector<char> structural_mask() const;

  /// Attribute facts grouped by entity, in fact order.
  std::vector<std::vector<AttrFact>> facts_by_entity() const;

  /// Throws DataError when an id is out of range.
  void validate() const;

  bool operator==(const KnowledgeBase& o) const;

  /// Rebuilds a KB from its tables, e.g. when reading a snapshot.
  static KnowledgeBase from_parts(int kb_id, std::vector<std::string> entities,
                                  std::vector<std::string> relationships,
                                  std::vector<std::string> attributes,
                                  std::vector<RelTriple> rel_triples,
                                  std::vector<AttrFact> attr_facts);

 private:

  int kb_id_;
  Interner entities_;
  Interner relationships_;
  Interner attributes_;
  std::vector<RelTriple> rel_triples_;
  std::vector<AttrFact> attr_facts_;
  std::unordered_set<RelTriple, RelTripleHash> triple_set_;
  std::unordered_set<std::uint64_t> fact_set_;
};

/// Pre-aligned entities and properties bridging KB1 and KB2.
struct SeedAlignment {
  std::vector<EntityPair> entity_pairs;
  std::vector<std::pair<RelationId, RelationId>> relationship_pairs;
  std::vector<std::pair<AttributeId, AttributeId>> attribute_pairs;

  /// Throws DataError naming the offending pair when an id is invalid or an
  /// item occurs in more than one pair.
  void validate(const KnowledgeBase& kb1, const KnowledgeBase& kb2) const;
};

/// Reference alignment and its seed/test partition.
struct GoldStandard {
  std::vector<EntityPair> full;
  std::vector<EntityPair> seed;
  std::vector<EntityPair> test;
  double seed_fraction = 0.0;
  std::uint64_t rng_seed = 0;
};

/// Deterministic shuffle-and-cut of `full`; |seed| = round(p * |full|).
/// Throws std::invalid_argument unless 0 < p < 1.
GoldStandard split_gold(std::span<const EntityPair> full, double p, std::uint64_t rng_seed);

/// Splits `pairs` into (kept, held_out) with |held_out| = round(fraction * n).
std::pair<std::vector<EntityPair>, std::vector<EntityPair>> hold_out(
    std::span<const EntityPair> pairs, double fraction, std::uint64_t rng_seed);

/// Maps the ids of one item kind (entities, relationships or attributes) of
/// both KBs to embedding slots.
struct SlotMap {
  std::vector<Slot> kb1;
  std::vector<Slot> kb2;
  std::size_t slots = 0;
  std::size_t shared = 0;

  Slot of(int kb, std::uint32_t id) const { return kb == 1 ? kb1[id] : kb2[id]; }
};

/// Unified id space in which every seed pair owns a single embedding slot.
struct UnifiedIndex {
  SlotMap entities;
  SlotMap relationships;
  SlotMap attributes;
};

/// KB1 items take slots [0, n1); a KB2 item reuses its seed partner's slot or
/// takes the next free slot. With `unify_properties` false, property seed
/// pairs are ignored and every property keeps its own slot.
UnifiedIndex merge_for_training(const KnowledgeBase& kb1, const KnowledgeBase& kb2,
                                const SeedAlignment& seeds, bool unify_properties = true);

/// Lowercased local name: text after the last '/' or '#', angle brackets and
/// a leading namespace prefix ("dbo:") removed.
std::string normalize_property_label(std::string_view iri);

/// Property pairs whose normalized labels are equal. Labels occurring more
/// than once on one side are paired only on their first occurrence.
void match_property_pairs(const KnowledgeBase& kb1, const KnowledgeBase& kb2, SeedAlignment& seeds);

}  // namespace kgalign

#endif  // KGALIGN_KB_HPP
