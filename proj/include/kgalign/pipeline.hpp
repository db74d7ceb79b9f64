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

#ifndef KGALIGN_PIPELINE_HPP
#define KGALIGN_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgalign/checkpoint.hpp"
#include "kgalign/config.hpp"
#include "kgalign/eval.hpp"
#include "kgalign/ingest.hpp"
#include "kgalign/joint.hpp"
#include "kgalign/string_baseline.hpp"

namespace kgalign {

/// Input data after ingestion, the gold split and slot unification.
struct PreparedData {
  Dataset data;
  LabelTable labels;
  bool has_translations = false;
  GoldStandard gold;
  std::vector<EntityPair> validation;  // held out of the seeds for early stopping
  SeedAlignment seeds;                 // training seeds plus matched property pairs
  UnifiedIndex index;
};

/// Loads the configured input (directory, cache or synthetic spec), splits
/// the gold standard and builds the unified index. `cfg` must be effective().
PreparedData prepare_data(const RunConfig& cfg);

/// Attribute embedding over the correlation pairs of the training seeds.
/// Throws DataError when the KBs have no attribute correlations at all.
AttributeCheckpoint train_attributes(const PreparedData& prepared, const RunConfig& cfg);

SimilarityMatrices build_similarities(const PreparedData& prepared, const Matrix& attr_vecs,
                                      const RunConfig& cfg);

using MetricRows = std::vector<std::pair<std::string, AlignmentResult>>;

/// Ranks the test pairs of a checkpoint in the given directions.
MetricRows evaluate_checkpoint(const TrainingCheckpoint& ckpt, const std::vector<Direction>& directions,
                               const EvalOptions& options, const std::string& label);

/// `source \t target \t rank` per pair, rank 0 for excluded pairs.
void write_ranks(const std::filesystem::path& path, std::span<const EntityPair> pairs,
                 const AlignmentResult& result);
/// Reads a file written by write_ranks and recomputes Hits@k and Mean.
std::pair<std::vector<EntityPair>, AlignmentResult> read_ranks(const std::filesystem::path& path,
                                                               Direction direction,
                                                               std::vector<std::size_t> ks);

struct PipelineOptions {
  // Reuse trained attribute vectors instead of running attribute embedding.
  std::optional<std::filesystem::path> ae_checkpoint;
  // Stop after joint training (checkpoint and epochs.csv only).
  bool evaluate = true;
};

struct PipelineResult {
  std::filesystem::path output_dir;
  std::vector<EpochRecord> epochs;
  bool early_stopped = false;
  MetricRows metrics;
  std::string manifest;
};

/// ingest -> attribute embedding -> similarity -> joint training -> eval ->
/// reports. Writes config.json, ingest.txt, ae.ckpt, model.ckpt, epochs.csv,
/// ranks_*.tsv, metrics.csv, metrics.txt and manifest.json under
/// cfg.output_dir. The config is validated before anything is written.
/// Failures are rethrown as StageError naming the stage.
PipelineResult run_pipeline(const RunConfig& cfg, const PipelineOptions& options = {});

/// JSON listing the SHA-1 of config.json and the git blob hash of `files`
/// (relative to dir), in the given order.
std::string build_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files);

}  // namespace kgalign

#endif  // KGALIGN_PIPELINE_HPP
