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

#ifndef KGALIGN_CONFIG_HPP
#define KGALIGN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgalign/attribute.hpp"
#include "kgalign/joint.hpp"
#include "kgalign/similarity.hpp"
#include "kgalign/synth.hpp"

namespace kgalign {

/// Ablation variants. SeOnly skips attribute embedding and the O_S step;
/// SeNoNeg additionally sets alpha to 0.
enum class Variant { Full, SeOnly, SeNoNeg };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct EvalOptions {
  std::vector<std::size_t> ks{1, 10, 50};
  bool full_pool = false;
  // Rank with translated labels too and report the min-rank combination.
  bool string_baseline = true;
};

/// Everything one pipeline run needs. Exactly one of dataset_dir,
/// dataset_cache and synth names the input.
struct RunConfig {
  std::string dataset_dir;
  std::string dataset_cache;
  std::string format = "tsv";
  std::optional<SynthSpec> synth;
  std::vector<std::pair<std::string, std::string>> range_rules;  // (regex, type name)

  Variant variant = Variant::Full;
  double seed_fraction = 0.3;
  double validation_fraction = 0.1;
  bool unify_properties = true;
  bool match_property_labels = true;

  SEConfig se;
  AEConfig ae;
  SimilarityConfig similarity;
  JointConfig joint;  // joint.se is ignored; `se` is used instead
  EvalOptions eval;

  std::string output_dir = "out";
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError. Does not require an input to be named.
  void validate() const;

  /// Copy with the variant applied and seeds propagated to every section.
  RunConfig effective() const;
};

/// Pretty JSON with a fixed key order. Defaults round-trip byte for byte.
std::string dump_config(const RunConfig& cfg);

/// Strict parse: unknown keys and wrong types throw ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Parses a config after applying "a.b.c=value" overrides. The value is read
/// as JSON when it parses, else as a string.
RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides);

/// Strict parse of a synthetic dataset spec.
SynthSpec parse_synth_spec(std::string_view json_text);
std::string dump_synth_spec(const SynthSpec& spec);

}  // namespace kgalign

#endif  // KGALIGN_CONFIG_HPP
