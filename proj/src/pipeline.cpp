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

#include "kgalign/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgalign/attribute.hpp"
#include "kgalign/digest.hpp"
#include "kgalign/error.hpp"
#include "kgalign/log.hpp"
#include "kgalign/synth.hpp"

namespace kgalign {
namespace fs = std::filesystem;
namespace {

template <typename F>
auto in_stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const std::exception& e) {
    throw StageError(name, Error(e.what()));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw DataError("cannot write " + path.string());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string epochs_csv(const std::vector<EpochRecord>& records) {
  std::string out = "epoch,se_loss,os_loss,valid_mean\n";
  for (const auto& r : records) {
    out += std::to_string(r.epoch) + "," + format_double(r.se_loss) + "," + format_double(r.os_loss) +
           "," + format_double(r.valid_mean) + "\n";
  }
  return out;
}

RangeRules make_rules(const RunConfig& cfg) {
  RangeRules rules;
  for (const auto& [pattern, type] : cfg.range_rules) rules.add_rule(pattern, type);
  return rules;
}

std::string method_label(Variant v) { return "embed-" + std::string(to_string(v)); }

std::string direction_tag(Direction d) { return d == Direction::KB1ToKB2 ? "kb1_kb2" : "kb2_kb1"; }

}  // namespace

PreparedData prepare_data(const RunConfig& cfg) {
  PreparedData p;
  const RangeRules rules = make_rules(cfg);
  in_stage("ingest", [&] {
    if (cfg.synth) {
      const SynthDataset synth = generate(*cfg.synth);
      p.data = build_dataset(synth.raw, rules);
      p.labels.labels1 = labels_from_pairs(synth.labels1, p.data.kb1);
      p.labels.labels2 = labels_from_pairs(synth.labels2, p.data.kb2);
      p.labels.translated1 = labels_from_pairs(synth.translated1, p.data.kb1);
      p.labels.translated2 = labels_from_pairs(synth.translated2, p.data.kb2);
    } else if (!cfg.dataset_cache.empty()) {
      p.data = read_dataset_cache(cfg.dataset_cache);
      p.labels.labels1 = labels_from_iris(p.data.kb1);
      p.labels.labels2 = labels_from_iris(p.data.kb2);
    } else if (!cfg.dataset_dir.empty()) {
      const auto layout = DatasetLayout::from_dir(cfg.dataset_dir);
      p.data = load_dataset(layout, rules, cfg.format == "jsonl" ? TripleFormat::Jsonl : TripleFormat::Tsv);
      p.labels.labels1 = layout.labels_1 ? load_labels(*layout.labels_1, p.data.kb1) : labels_from_iris(p.data.kb1);
      p.labels.labels2 = layout.labels_2 ? load_labels(*layout.labels_2, p.data.kb2) : labels_from_iris(p.data.kb2);
      if (layout.translated_labels_1) p.labels.translated1 = load_labels(*layout.translated_labels_1, p.data.kb1);
      if (layout.translated_labels_2) p.labels.translated2 = load_labels(*layout.translated_labels_2, p.data.kb2);
    } else {
      throw ConfigError("no input: set dataset.dir, dataset.cache or synth");
    }
    for (const auto& w : p.data.report.warnings) log::warn(w);
  });
  const auto nonempty = [](const std::vector<std::string>& v) {
    return std::any_of(v.begin(), v.end(), [](const std::string& s) { return !s.empty(); });
  };
  p.has_translations = nonempty(p.labels.translated1) || nonempty(p.labels.translated2);
  if (p.labels.translated1.empty()) p.labels.translated1.resize(p.data.kb1.num_entities());
  if (p.labels.translated2.empty()) p.labels.translated2.resize(p.data.kb2.num_entities());

  in_stage("split", [&] {
    if (p.data.gold.size() < 2) throw DataError("need at least two gold pairs to split");
    p.gold = split_gold(p.data.gold, cfg.seed_fraction, derive_seed(cfg.rng_seed, 2));
    auto [kept, held] = hold_out(p.gold.seed, cfg.validation_fraction, derive_seed(cfg.rng_seed, 3));
    if (kept.empty()) throw DataError("no training seeds left after the validation hold-out");
    p.validation = std::move(held);
    p.seeds.entity_pairs = std::move(kept);
    if (cfg.match_property_labels) match_property_pairs(p.data.kb1, p.data.kb2, p.seeds);
    p.seeds.validate(p.data.kb1, p.data.kb2);
    p.index = merge_for_training(p.data.kb1, p.data.kb2, p.seeds, cfg.unify_properties);
  });
  return p;
}

AttributeCheckpoint train_attributes(const PreparedData& prepared, const RunConfig& cfg) {
  return in_stage("attribute", [&] {
    const auto& kb1 = prepared.data.kb1;
    const auto& kb2 = prepared.data.kb2;
    const auto pairs = build_correlation_pairs(kb1, kb2, prepared.seeds.entity_pairs, prepared.index);
    if (pairs.pairs.empty()) throw DataError("no attribute correlations: attribute embedding has nothing to learn");
    log::info("attribute embedding: " + std::to_string(pairs.pairs.size()) + " correlation pairs (" +
              std::to_string(pairs.mono_lingual) + " mono-lingual, " + std::to_string(pairs.cross_lingual) +
              " cross-lingual)");
    const auto freq = attribute_frequencies(kb1, kb2, prepared.index);
    AttributeCheckpoint ckpt;
    ckpt.config_json = dump_config(cfg);
    ckpt.epoch = cfg.ae.epochs;
    ckpt.attributes = prepared.index.attributes;
    ckpt.vectors = train_ae(pairs, freq, cfg.ae, &ckpt.losses);
    return ckpt;
  });
}

SimilarityMatrices build_similarities(const PreparedData& prepared, const Matrix& attr_vecs,
                                      const RunConfig& cfg) {
  return in_stage("similarity", [&] {
    std::vector<char> mask1, mask2;
    const Matrix e1 = entity_attribute_matrix(prepared.data.kb1, prepared.index, attr_vecs, mask1);
    const Matrix e2 = entity_attribute_matrix(prepared.data.kb2, prepared.index, attr_vecs, mask2);
    auto sims = build_similarity_matrices(e1, e2, std::move(mask1), std::move(mask2), cfg.similarity,
                                          prepared.seeds.entity_pairs);
    log::info("similarity: nnz cross=" + std::to_string(sims.cross.nnz()) + " inner1=" +
              std::to_string(sims.inner1.nnz()) + " inner2=" + std::to_string(sims.inner2.nnz()));
    return sims;
  });
}

MetricRows evaluate_checkpoint(const TrainingCheckpoint& ckpt, const std::vector<Direction>& directions,
                               const EvalOptions& options, const std::string& label) {
  const Matrix e1 = gather_rows(ckpt.space.entities, ckpt.index.entities.kb1);
  const Matrix e2 = gather_rows(ckpt.space.entities, ckpt.index.entities.kb2);
  RankOptions ro;
  ro.ks = options.ks;
  ro.full_pool = options.full_pool;
  MetricRows rows;
  for (const Direction d : directions) rows.emplace_back(label, rank_targets(e1, e2, ckpt.test, d, ro));
  return rows;
}

void write_ranks(const fs::path& path, std::span<const EntityPair> pairs, const AlignmentResult& result) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out += std::to_string(pairs[i].e1) + "\t" + std::to_string(pairs[i].e2) + "\t" +
           std::to_string(result.ranks[i]) + "\n";
  }
  write_text(path, out);
}

std::pair<std::vector<EntityPair>, AlignmentResult> read_ranks(const fs::path& path, Direction direction,
                                                               std::vector<std::size_t> ks) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<EntityPair> pairs;
  AlignmentResult r;
  r.direction = direction;
  r.ks = std::move(ks);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    long long a = -1, b = -1, rank = -1;
    if (!(ss >> a >> b >> rank) || a < 0 || b < 0 || rank < 0 || a > UINT32_MAX || b > UINT32_MAX ||
        rank > UINT32_MAX) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 'source target rank'");
    }
    pairs.push_back({static_cast<EntityId>(a), static_cast<EntityId>(b)});
    r.ranks.push_back(static_cast<std::uint32_t>(rank));
    if (rank == 0) ++r.excluded;
  }
  summarize(r);
  return {std::move(pairs), std::move(r)};
}

std::string build_manifest(const fs::path& dir, const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["config_sha1"] = sha1_hex(read_file(dir / "config.json"));
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    const std::string data = read_file(dir / f);
    list.push_back({{"path", f}, {"bytes", data.size()}, {"git_blob", git_blob_hash(data)}});
  }
  j["files"] = list;
  return j.dump(2) + "\n";
}

PipelineResult run_pipeline(const RunConfig& raw_cfg, const PipelineOptions& options) {
  const RunConfig cfg = in_stage("config", [&] {
    raw_cfg.validate();
    if (raw_cfg.dataset_dir.empty() && raw_cfg.dataset_cache.empty() && !raw_cfg.synth) {
      throw ConfigError("no input: set dataset.dir, dataset.cache or synth");
    }
    if (options.ae_checkpoint && !fs::exists(*options.ae_checkpoint)) {
      throw DataError("missing AE checkpoint " + options.ae_checkpoint->string());
    }
    return raw_cfg.effective();
  });

  PipelineResult result;
  result.output_dir = cfg.output_dir;
  const fs::path dir = cfg.output_dir;
  std::vector<std::string> files;
  in_stage("output", [&] {
    fs::create_directories(dir);
    write_text(dir / "config.json", dump_config(cfg));
  });

  PreparedData prep = prepare_data(cfg);
  in_stage("ingest", [&] {
    std::ostringstream report;
    report << prep.data.report.table();
    report << "gold pairs: " << prep.gold.full.size() << " (seed " << prep.gold.seed.size() << ", test "
           << prep.gold.test.size() << ", validation " << prep.validation.size() << ")\n";
    report << "property seed pairs: " << prep.seeds.relationship_pairs.size() << " relationships, "
           << prep.seeds.attribute_pairs.size() << " attributes\n";
    write_text(dir / "ingest.txt", report.str());
    files.push_back("ingest.txt");
    log::info("ingest: " + std::to_string(prep.data.kb1.num_entities()) + " / " +
              std::to_string(prep.data.kb2.num_entities()) + " entities, " +
              std::to_string(prep.gold.seed.size()) + " seed pairs");
  });

  // Attribute embedding and similarity matrices only matter when O_S is on.
  std::optional<SimilarityMatrices> sims;
  if (cfg.joint.delta > 0.0) {
    AttributeCheckpoint ae;
    if (options.ae_checkpoint) {
      ae = in_stage("attribute", [&] {
        auto c = load_attribute_checkpoint(*options.ae_checkpoint);
        if (c.attributes.kb1 != prep.index.attributes.kb1 || c.attributes.kb2 != prep.index.attributes.kb2) {
          throw DataError("AE checkpoint was trained on a different attribute index");
        }
        return c;
      });
    } else {
      ae = train_attributes(prep, cfg);
      in_stage("attribute", [&] { save_checkpoint(dir / "ae.ckpt", ae); });
      files.push_back("ae.ckpt");
    }
    sims = build_similarities(prep, ae.vectors, cfg);
  }

  TrainingCheckpoint ckpt = in_stage("joint", [&] {
    std::set<EntityId> pool;
    for (const auto& p : prep.validation) pool.insert(p.e2);
    for (const auto& p : prep.gold.test) pool.insert(p.e2);
    JointTrainer trainer(prep.data.kb1, prep.data.kb2, prep.index, cfg.joint, sims ? &*sims : nullptr,
                         prep.validation, std::vector<EntityId>(pool.begin(), pool.end()));
    result.epochs = trainer.run([](const EpochRecord& r) {
      std::string line = "epoch=" + std::to_string(r.epoch) + " se_loss=" + format_double(r.se_loss) +
                         " os_loss=" + format_double(r.os_loss);
      if (!std::isnan(r.valid_mean)) line += " valid_mean=" + format_double(r.valid_mean);
      log::info(line);
    });
    result.early_stopped = trainer.early_stopped();
    TrainingCheckpoint c;
    c.config_json = dump_config(cfg);
    c.epoch = trainer.epochs_run();
    c.index = prep.index;
    c.space = trainer.space();
    c.seeds = prep.seeds.entity_pairs;
    c.validation = prep.validation;
    c.test = prep.gold.test;
    c.sims = sims;
    save_checkpoint(dir / "model.ckpt", c);
    write_text(dir / "epochs.csv", epochs_csv(result.epochs));
    return c;
  });
  files.push_back("model.ckpt");
  files.push_back("epochs.csv");

  if (options.evaluate) {
    in_stage("eval", [&] {
      const std::vector<Direction> dirs{Direction::KB1ToKB2, Direction::KB2ToKB1};
      const std::string label = method_label(cfg.variant);
      const MetricRows embed = evaluate_checkpoint(ckpt, dirs, cfg.eval, label);
      for (const auto& [name, r] : embed) {
        const std::string f = "ranks_" + label + "_" + direction_tag(r.direction) + ".tsv";
        write_ranks(dir / f, ckpt.test, r);
        files.push_back(f);
        result.metrics.emplace_back(name, r);
      }
      if (cfg.eval.string_baseline && prep.has_translations) {
        for (std::size_t i = 0; i < dirs.size(); ++i) {
          const AlignmentResult s = string_rank(prep.labels, ckpt.test, dirs[i], cfg.eval.ks);
          const std::string f = "ranks_string_" + direction_tag(dirs[i]) + ".tsv";
          write_ranks(dir / f, ckpt.test, s);
          files.push_back(f);
          result.metrics.emplace_back("string", s);
          result.metrics.emplace_back("combined", combine_results(embed[i].second, s));
        }
      } else if (cfg.eval.string_baseline) {
        log::info("eval: no translated labels, string baseline skipped");
      }
    });
  }

  in_stage("report", [&] {
    if (options.evaluate) {
      write_text(dir / "metrics.csv", metrics_csv(result.metrics));
      write_text(dir / "metrics.txt", metrics_table(result.metrics));
      files.push_back("metrics.csv");
      files.push_back("metrics.txt");
    }
    result.manifest = build_manifest(dir, files);
    write_text(dir / "manifest.json", result.manifest);
  });
  return result;
}

}  // namespace kgalign
