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

// Command-line front end. Exit codes: 0 ok, 2 config, 3 data, 4 numeric.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgalign/checkpoint.hpp"
#include "kgalign/config.hpp"
#include "kgalign/digest.hpp"
#include "kgalign/error.hpp"
#include "kgalign/ingest.hpp"
#include "kgalign/log.hpp"
#include "kgalign/pipeline.hpp"
#include "kgalign/synth.hpp"

namespace fs = std::filesystem;
using namespace kgalign;

namespace {

struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::string variant;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config,-c", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--set", overrides, "Override a config value, e.g. --set se.dim=32");
    cmd->add_option("--out,-o", out, "Output directory (overrides output_dir)");
    cmd->add_option("--variant", variant, "full, se-only or se-no-neg");
    cmd->add_option("--seed", seed, "Master RNG seed");
  }

  RunConfig load() const {
    std::string text = "{}";
    if (!config_path.empty()) text = read_file(config_path);
    RunConfig cfg = parse_config(text, overrides);
    if (!out.empty()) cfg.output_dir = out;
    if (!variant.empty()) cfg.variant = parse_variant(variant);
    if (seed) cfg.rng_seed = *seed;
    return cfg;
  }
};

std::vector<std::size_t> parse_ks(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      const long v = std::stol(part);
      if (v <= 0) throw ConfigError("--ks entries must be positive");
      ks.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw ConfigError("--ks expects a comma-separated list of integers, got '" + text + "'");
    }
  }
  if (ks.empty()) throw ConfigError("--ks must not be empty");
  return ks;
}

std::vector<Direction> parse_directions(const std::string& d) {
  if (d == "both") return {Direction::KB1ToKB2, Direction::KB2ToKB1};
  if (d == "kb1" || d == "kb1-kb2") return {Direction::KB1ToKB2};
  if (d == "kb2" || d == "kb2-kb1") return {Direction::KB2ToKB1};
  throw ConfigError("--direction must be both, kb1 or kb2");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

void print_result(const PipelineResult& r) {
  if (!r.metrics.empty()) std::cout << metrics_table(r.metrics);
  std::cout << "epochs run: " << r.epochs.size() << (r.early_stopped ? " (early stop)" : "") << "\n";
  std::cout << "artifacts: " << r.output_dir.string() << "\n";
}

int run_report(const fs::path& dir) {
  const std::string manifest_text = read_file(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(manifest_text, nullptr, false);
  if (manifest.is_discarded()) throw DataError("manifest.json is not valid JSON");
  if (fs::exists(dir / "metrics.txt")) std::cout << read_file(dir / "metrics.txt");
  if (fs::exists(dir / "epochs.csv")) {
    std::stringstream ss(read_file(dir / "epochs.csv"));
    std::string line, last;
    std::size_t n = 0;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
      if (!line.empty()) {
        last = line;
        ++n;
      }
    }
    std::cout << "epochs: " << n << (n ? ", last: " + last : "") << "\n";
  }
  bool ok = sha1_hex(read_file(dir / "config.json")) == manifest.value("config_sha1", "");
  for (const auto& f : manifest.value("files", nlohmann::json::array())) {
    const std::string path = f.value("path", "");
    const bool match = fs::exists(dir / path) && git_blob_hash(read_file(dir / path)) == f.value("git_blob", "");
    if (!match) std::cout << "hash mismatch: " << path << "\n";
    ok = ok && match;
  }
  std::cout << "manifest: " << (ok ? "verified" : "MISMATCH") << "\n";
  if (!ok) throw DataError("artifacts do not match manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgalign: cross-lingual entity alignment by joint attribute-preserving embedding"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Only log warnings and errors");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a dataset directory into a binary cache");
  std::string ingest_dir, ingest_out, ingest_format = "tsv";
  ingest->add_option("--dir", ingest_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--out", ingest_out, "Cache file to write")->required();
  ingest->add_option("--format", ingest_format, "tsv or jsonl")->check(CLI::IsMember({"tsv", "jsonl"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic KB pair with known alignment");
  std::string gen_spec, gen_out;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--spec", gen_spec, "JSON synthetic spec (defaults when omitted)")->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "RNG seed override");

  // train-se / train / run share the config flags
  ConfigFlags se_flags, train_flags, run_flags, ae_flags;
  auto* train_se = app.add_subcommand("train-se", "Structure embedding only (delta = 0), no evaluation");
  se_flags.attach(train_se);
  auto* train_ae = app.add_subcommand("train-ae", "Train attribute vectors and write ae.ckpt");
  ae_flags.attach(train_ae);
  auto* train = app.add_subcommand("train", "Joint training, writing model.ckpt and epochs.csv");
  train_flags.attach(train);
  std::string ae_ckpt;
  train->add_option("--ae-checkpoint", ae_ckpt, "Reuse attribute vectors from train-ae");
  auto* run = app.add_subcommand("run", "Full pipeline: ingest, train, evaluate, report");
  run_flags.attach(run);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a training checkpoint");
  std::string eval_ckpt, eval_dir = "both", eval_ks, eval_out;
  bool eval_full = false;
  eval->add_option("--checkpoint", eval_ckpt, "model.ckpt")->required()->check(CLI::ExistingFile);
  eval->add_option("--direction", eval_dir, "both, kb1 or kb2");
  eval->add_option("--ks", eval_ks, "Comma-separated k values (default from the checkpoint config)");
  eval->add_flag("--full-pool", eval_full, "Rank against every target-KB entity");
  eval->add_option("--out", eval_out, "Write metrics CSV here");

  // combine
  auto* combine = app.add_subcommand("combine", "Min-rank combination of two rank files");
  std::string comb_a, comb_b, comb_dir = "kb1", comb_ks = "1,10,50", comb_out;
  combine->add_option("--embed", comb_a, "Rank file of the embedding method")->required()->check(CLI::ExistingFile);
  combine->add_option("--string", comb_b, "Rank file of the string baseline")->required()->check(CLI::ExistingFile);
  combine->add_option("--direction", comb_dir, "kb1 or kb2");
  combine->add_option("--ks", comb_ks, "Comma-separated k values");
  combine->add_option("--out", comb_out, "Write metrics CSV here");

  // report
  auto* report = app.add_subcommand("report", "Print metrics of a run directory and verify its manifest");
  std::string report_dir;
  report->add_option("--run", report_dir, "Run output directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  log::set_level(quiet ? log::Level::Warn : log::Level::Info);

  try {
    if (*ingest) {
      const auto layout = DatasetLayout::from_dir(ingest_dir);
      const Dataset data = load_dataset(layout, {}, ingest_format == "jsonl" ? TripleFormat::Jsonl : TripleFormat::Tsv);
      for (const auto& w : data.report.warnings) log::warn(w);
      write_dataset_cache(ingest_out, data);
      std::cout << data.report.table();
      std::cout << "gold pairs: " << data.report.gold_pairs << " (dropped " << data.report.dropped_gold_pairs << ")\n";
      return 0;
    }
    if (*gen) {
      SynthSpec spec = gen_spec.empty() ? SynthSpec{} : parse_synth_spec(read_file(gen_spec));
      if (gen_seed) spec.rng_seed = *gen_seed;
      const SynthDataset data = generate(spec);
      write_dataset(data, gen_out);
      write_file(fs::path(gen_out) / "spec.json", dump_synth_spec(spec));
      std::cout << "wrote " << data.raw.rel1.size() << " / " << data.raw.rel2.size() << " relationship triples, "
                << data.raw.gold.size() << " gold pairs to " << gen_out << "\n";
      return 0;
    }
    if (*train_se) {
      RunConfig cfg = se_flags.load();
      cfg.variant = se_flags.variant == "se-no-neg" ? Variant::SeNoNeg : Variant::SeOnly;
      print_result(run_pipeline(cfg, {.ae_checkpoint = std::nullopt, .evaluate = false}));
      return 0;
    }
    if (*train_ae) {
      RunConfig cfg = ae_flags.load();
      cfg.validate();
      cfg = cfg.effective();
      const PreparedData prep = prepare_data(cfg);
      const AttributeCheckpoint ckpt = train_attributes(prep, cfg);
      fs::create_directories(cfg.output_dir);
      const fs::path path = fs::path(cfg.output_dir) / "ae.ckpt";
      save_checkpoint(path, ckpt);
      std::cout << "attribute vectors: " << ckpt.vectors.rows() << " x " << ckpt.vectors.cols()
                << ", final loss " << (ckpt.losses.empty() ? 0.0 : ckpt.losses.back()) << "\n"
                << "wrote " << path.string() << "\n";
      return 0;
    }
    if (*train) {
      PipelineOptions opts;
      opts.evaluate = false;
      if (!ae_ckpt.empty()) opts.ae_checkpoint = ae_ckpt;
      print_result(run_pipeline(train_flags.load(), opts));
      return 0;
    }
    if (*run) {
      print_result(run_pipeline(run_flags.load()));
      return 0;
    }
    if (*eval) {
      const TrainingCheckpoint ckpt = load_training_checkpoint(eval_ckpt);
      const RunConfig cfg = parse_config(ckpt.config_json);
      EvalOptions opts = cfg.eval;
      if (!eval_ks.empty()) opts.ks = parse_ks(eval_ks);
      if (eval_full) opts.full_pool = true;
      const auto rows =
          evaluate_checkpoint(ckpt, parse_directions(eval_dir), opts, "embed-" + std::string(to_string(cfg.variant)));
      std::cout << metrics_table(rows);
      if (!eval_out.empty()) write_file(eval_out, metrics_csv(rows));
      return 0;
    }
    if (*combine) {
      const auto dirs = parse_directions(comb_dir);
      if (dirs.size() != 1) throw ConfigError("combine takes a single --direction");
      const auto ks = parse_ks(comb_ks);
      auto [pairs_a, a] = read_ranks(comb_a, dirs[0], ks);
      auto [pairs_b, b] = read_ranks(comb_b, dirs[0], ks);
      if (pairs_a != pairs_b) throw DataError("rank files list different pairs");
      std::vector<std::pair<std::string, AlignmentResult>> rows{
          {"embedding", a}, {"string", b}, {"combined", combine_results(a, b)}};
      std::cout << metrics_table(rows);
      if (!comb_out.empty()) write_file(comb_out, metrics_csv(rows));
      return 0;
    }
    if (*report) return run_report(report_dir);
  } catch (const Error& e) {
    log::error(e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    log::error(e.what());
    return 1;
  }
  return 0;
}
