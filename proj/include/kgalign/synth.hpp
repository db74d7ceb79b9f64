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

#ifndef KGALIGN_SYNTH_HPP
#define KGALIGN_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kgalign/ingest.hpp"

namespace kgalign {

/// Shape of a synthetic KB pair with a known alignment.
struct SynthSpec {
  std::size_t n_entities = 1000;
  std::size_t n_relations = 20;
  std::size_t n_attributes = 40;
  std::size_t triples_per_entity = 5;
  // Attributes are partitioned into this many co-occurrence groups; each
  // entity draws its attributes from its own group.
  std::size_t attribute_groups = 4;
  std::size_t attributes_per_entity_min = 2;
  std::size_t attributes_per_entity_max = 5;
  // Chance that each attribute slot of an entity is drawn from a foreign group.
  double group_overlap = 0.0;
  // Fraction of KB2 triples dropped or rewired (half each).
  double structural_noise = 0.05;
  double seed_fraction = 0.3;
  // Fraction of relationships and attributes whose KB2 label equals KB1's.
  double shared_property_fraction = 0.0;
  bool preferential_attachment = true;
  // Fraction of translated labels replaced by a wrong label.
  double label_noise = 0.3;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError when the spec is invalid or infeasible.
  void validate() const;
};

struct SynthDataset {
  RawDataset raw;
  std::vector<std::pair<std::string, std::string>> labels1;
  std::vector<std::pair<std::string, std::string>> labels2;
  std::vector<std::pair<std::string, std::string>> translated1;
  std::vector<std::pair<std::string, std::string>> translated2;
  // KB1 entity index -> KB2 entity index of the hidden relabeling.
  std::vector<std::size_t> permutation;
};

/// KB1 is a random multigraph in which every entity heads
/// triples_per_entity triples; KB2 is a relabeled, shuffled copy with
/// structural noise applied. The gold standard is the relabeling.
SynthDataset generate(const SynthSpec& spec);

/// Writes the layout read by DatasetLayout::from_dir.
void write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace kgalign

#endif  // KGALIGN_SYNTH_HPP
