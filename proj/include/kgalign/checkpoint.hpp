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

#ifndef KGALIGN_CHECKPOINT_HPP
#define KGALIGN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kgalign/kb.hpp"
#include "kgalign/similarity.hpp"
#include "kgalign/structure.hpp"

namespace kgalign {

/// Snapshot after structure or joint training. Layout: magic "KGALCKPT",
/// version byte, config JSON, epoch counter, the unified index, the entity,
/// relation and attribute tables, the seed / validation / test pairs and,
/// when present, the similarity matrices as (row, col, value) triplets.
struct TrainingCheckpoint {
  std::string config_json;
  std::uint64_t epoch = 0;
  UnifiedIndex index;
  EmbeddingSpace space;
  std::vector<EntityPair> seeds;
  std::vector<EntityPair> validation;
  std::vector<EntityPair> test;
  std::optional<SimilarityMatrices> sims;
};

/// Snapshot of trained attribute vectors. Layout: magic "KGALAECK", version
/// byte, config JSON, epoch counter, attribute slot map, vector table,
/// per-epoch losses.
struct AttributeCheckpoint {
  std::string config_json;
  std::uint64_t epoch = 0;
  SlotMap attributes;
  Matrix vectors;
  std::vector<double> losses;
};

void save_checkpoint(const std::filesystem::path& path, const TrainingCheckpoint& ckpt);
TrainingCheckpoint load_training_checkpoint(const std::filesystem::path& path);

void save_checkpoint(const std::filesystem::path& path, const AttributeCheckpoint& ckpt);
AttributeCheckpoint load_attribute_checkpoint(const std::filesystem::path& path);

}  // namespace kgalign

#endif  // KGALIGN_CHECKPOINT_HPP
