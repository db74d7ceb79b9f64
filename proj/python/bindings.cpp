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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "kgalign/checkpoint.hpp"
#include "kgalign/config.hpp"
#include "kgalign/error.hpp"
#include "kgalign/eval.hpp"
#include "kgalign/ingest.hpp"
#include "kgalign/pipeline.hpp"
#include "kgalign/string_baseline.hpp"
#include "kgalign/structure.hpp"
#include "kgalign/synth.hpp"

namespace py = pybind11;
using namespace kgalign;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
  Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

Array to_array(const Matrix& m) {
  Array a({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

Direction parse_direction(const std::string& d) {
  if (d == "kb1" || d == "KB1->KB2") return Direction::KB1ToKB2;
  if (d == "kb2" || d == "KB2->KB1") return Direction::KB2ToKB1;
  throw ConfigError("direction must be 'kb1' or 'kb2'");
}

py::dict result_dict(const AlignmentResult& r) {
  py::dict d;
  d["direction"] = std::string(to_string(r.direction));
  d["ranks"] = r.ranks;
  d["excluded"] = r.excluded;
  d["candidates"] = r.candidates;
  py::dict hits;
  for (std::size_t i = 0; i < r.ks.size(); ++i) hits[py::int_(r.ks[i])] = r.hits[i];
  d["hits"] = hits;
  d["mean_rank"] = r.mean_rank;
  return d;
}

std::vector<EntityPair> to_pairs(const std::vector<std::pair<EntityId, EntityId>>& pairs) {
  std::vector<EntityPair> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.push_back({a, b});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cross-lingual entity alignment by joint attribute-preserving embedding";

  static py::exception<Error> error(m, "Error");
  static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
  static py::exception<DataError> data_error(m, "DataError", error.ptr());
  static py::exception<NumericError> numeric_error(m, "NumericError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const StageError& e) {
      // Surface the class matching the exit code so callers can branch on it.
      switch (e.exit_code()) {
        case 2:
          py::set_error(config_error, e.what());
          return;
        case 3:
          py::set_error(data_error, e.what());
          return;
        case 4:
          py::set_error(numeric_error, e.what());
          return;
        default:
          py::set_error(error, e.what());
          return;
      }
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const DataError& e) {
      py::set_error(data_error, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("levenshtein", &levenshtein, py::arg("a"), py::arg("b"));
  m.def("label_similarity", &label_similarity, py::arg("a"), py::arg("b"));
  m.def("combine_ranks", &combine_ranks, py::arg("r_embed"), py::arg("r_string"));
  m.def(
      "abstract_attribute_value",
      [](const std::string& literal) { return std::string(to_string(abstract_attribute_value(literal))); },
      py::arg("literal"));
  m.def("score_triple", [](std::vector<double> h, std::vector<double> r, std::vector<double> t) {
    return score_triple(h, r, t);
  });

  m.def("default_config", [] { return dump_config(RunConfig{}); }, "Default run configuration as JSON.");
  m.def(
      "normalize_config",
      [](const std::string& json, const std::vector<std::string>& overrides) {
        const RunConfig cfg = parse_config(json, overrides);
        cfg.validate();
        return dump_config(cfg);
      },
      py::arg("json") = "{}", py::arg("overrides") = std::vector<std::string>{},
      "Strictly parses, validates and re-serializes a run configuration.");

  m.def(
      "generate",
      [](const std::string& spec_json, const std::string& out_dir) {
        const SynthDataset data = generate(parse_synth_spec(spec_json));
        write_dataset(data, out_dir);
        return data.raw.gold.size();
      },
      py::arg("spec_json"), py::arg("out_dir"),
      "Writes a synthetic KB pair under out_dir; returns the number of gold pairs.");

  m.def(
      "rank_targets",
      [](const Array& e1, const Array& e2, const std::vector<std::pair<EntityId, EntityId>>& pairs,
         const std::string& direction, std::vector<std::size_t> ks, bool full_pool) {
        RankOptions opts;
        opts.ks = std::move(ks);
        opts.full_pool = full_pool;
        const auto p = to_pairs(pairs);
        return result_dict(rank_targets(to_matrix(e1), to_matrix(e2), p, parse_direction(direction), opts));
      },
      py::arg("e1"), py::arg("e2"), py::arg("pairs"), py::arg("direction") = "kb1",
      py::arg("ks") = std::vector<std::size_t>{1, 10, 50}, py::arg("full_pool") = false);

  m.def(
      "run_pipeline",
      [](const std::string& json, const std::vector<std::string>& overrides) {
        const RunConfig cfg = parse_config(json, overrides);
        PipelineResult r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(cfg);
        }
        py::dict out;
        out["output_dir"] = r.output_dir.string();
        out["epochs"] = r.epochs.size();
        out["early_stopped"] = r.early_stopped;
        py::list metrics;
        for (const auto& [name, res] : r.metrics) {
          py::dict d = result_dict(res);
          d["method"] = name;
          metrics.append(d);
        }
        out["metrics"] = metrics;
        out["manifest"] = r.manifest;
        return out;
      },
      py::arg("json") = "{}", py::arg("overrides") = std::vector<std::string>{},
      "Runs the full pipeline and returns per-method metrics.");

  m.def(
      "load_checkpoint",
      [](const std::string& path) {
        const TrainingCheckpoint c = load_training_checkpoint(path);
        py::dict d;
        d["config"] = c.config_json;
        d["epoch"] = c.epoch;
        d["entities"] = to_array(c.space.entities);
        d["relations"] = to_array(c.space.relations);
        d["entity_slots_kb1"] = c.index.entities.kb1;
        d["entity_slots_kb2"] = c.index.entities.kb2;
        std::vector<std::pair<EntityId, EntityId>> test;
        for (const auto& p : c.test) test.emplace_back(p.e1, p.e2);
        d["test"] = test;
        return d;
      },
      py::arg("path"));
}
