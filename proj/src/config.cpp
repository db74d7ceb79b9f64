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

#include "kgalign/config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgalign/error.hpp"

namespace kgalign {
namespace {

using json = nlohmann::ordered_json;
static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seeds are read as size_t");

// Reads the members of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config: " + where() + " must be an object");
  }

  void get(const char* key, double& out) { read(key, out, &json::is_number, "a number"); }
  void get(const char* key, bool& out) { read(key, out, &json::is_boolean, "a boolean"); }
  void get(const char* key, std::string& out) { read(key, out, &json::is_string, "a string"); }
  void get(const char* key, std::size_t& out) {
    read(key, out, &json::is_number_unsigned, "a non-negative integer");
  }

  const json* child(const char* key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  std::string path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError("config: unknown key '" + path(k.c_str()) + "'");
    }
  }

 private:
  template <typename T>
  void read(const char* key, T& out, bool (json::*check)() const noexcept, const char* what) {
    const json* v = child(key);
    if (!v) return;
    if (!((*v).*check)()) throw ConfigError("config: '" + path(key) + "' must be " + what);
    out = v->get<T>();
  }

  std::string where() const { return path_.empty() ? "top level" : "'" + path_ + "'"; }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
}

json synth_to_json(const SynthSpec& s) {
  json j;
  j["n_entities"] = s.n_entities;
  j["n_relations"] = s.n_relations;
  j["n_attributes"] = s.n_attributes;
  j["triples_per_entity"] = s.triples_per_entity;
  j["attribute_groups"] = s.attribute_groups;
  j["attributes_per_entity_min"] = s.attributes_per_entity_min;
  j["attributes_per_entity_max"] = s.attributes_per_entity_max;
  j["group_overlap"] = s.group_overlap;
  j["structural_noise"] = s.structural_noise;
  j["seed_fraction"] = s.seed_fraction;
  j["shared_property_fraction"] = s.shared_property_fraction;
  j["preferential_attachment"] = s.preferential_attachment;
  j["label_noise"] = s.label_noise;
  j["rng_seed"] = s.rng_seed;
  return j;
}

SynthSpec synth_from_json(const json& j, const std::string& path) {
  SynthSpec s;
  Section sec(j, path);
  sec.get("n_entities", s.n_entities);
  sec.get("n_relations", s.n_relations);
  sec.get("n_attributes", s.n_attributes);
  sec.get("triples_per_entity", s.triples_per_entity);
  sec.get("attribute_groups", s.attribute_groups);
  sec.get("attributes_per_entity_min", s.attributes_per_entity_min);
  sec.get("attributes_per_entity_max", s.attributes_per_entity_max);
  sec.get("group_overlap", s.group_overlap);
  sec.get("structural_noise", s.structural_noise);
  sec.get("seed_fraction", s.seed_fraction);
  sec.get("shared_property_fraction", s.shared_property_fraction);
  sec.get("preferential_attachment", s.preferential_attachment);
  sec.get("label_noise", s.label_noise);
  sec.get("rng_seed", s.rng_seed);
  sec.finish();
  return s;
}

json to_json(const RunConfig& c) {
  json j;
  json rules = json::array();
  for (const auto& [pattern, type] : c.range_rules) rules.push_back({{"pattern", pattern}, {"type", type}});
  j["dataset"] = {{"dir", c.dataset_dir}, {"cache", c.dataset_cache}, {"format", c.format},
                  {"range_rules", rules}};
  j["synth"] = c.synth ? synth_to_json(*c.synth) : json(nullptr);
  j["variant"] = std::string(to_string(c.variant));
  j["seed_fraction"] = c.seed_fraction;
  j["validation_fraction"] = c.validation_fraction;
  j["unify_properties"] = c.unify_properties;
  j["match_property_labels"] = c.match_property_labels;
  j["se"] = {{"dim", c.se.dim},
             {"alpha", c.se.alpha},
             {"learning_rate", c.se.learning_rate},
             {"negatives_per_positive", c.se.negatives_per_positive},
             {"batch_size", c.se.batch_size},
             {"epochs_max", c.se.epochs_max},
             {"alternate_terms", c.se.alternate_terms},
             {"constrain_relations", c.se.constrain_relations}};
  j["ae"] = {{"dim", c.ae.dim},
             {"negatives_per_pair", c.ae.negatives_per_pair},
             {"learning_rate", c.ae.learning_rate},
             {"epochs", c.ae.epochs},
             {"batch_size", c.ae.batch_size}};
  j["similarity"] = {{"tau_cross", c.similarity.tau_cross},
                     {"tau_inner", c.similarity.tau_inner},
                     {"auto_tau", c.similarity.auto_tau},
                     {"row_normalize", c.similarity.row_normalize},
                     {"block_rows", c.similarity.block_rows}};
  j["joint"] = {{"beta", c.joint.beta},
                {"delta", c.joint.delta},
                {"os_learning_rate", c.joint.os_learning_rate},
                {"early_stop_ratio", c.joint.early_stop_ratio},
                {"eval_every", c.joint.eval_every},
                {"min_epochs", c.joint.min_epochs}};
  j["eval"] = {{"ks", c.eval.ks}, {"full_pool", c.eval.full_pool},
               {"string_baseline", c.eval.string_baseline}};
  j["output_dir"] = c.output_dir;
  j["rng_seed"] = c.rng_seed;
  return j;
}

RunConfig from_json(const json& j) {
  RunConfig c;
  Section top(j, "");
  if (const json* d = top.child("dataset")) {
    Section sec(*d, "dataset");
    sec.get("dir", c.dataset_dir);
    sec.get("cache", c.dataset_cache);
    sec.get("format", c.format);
    if (const json* rules = sec.child("range_rules")) {
      if (!rules->is_array()) throw ConfigError("config: 'dataset.range_rules' must be an array");
      for (const auto& r : *rules) {
        Section rule(r, "dataset.range_rules[]");
        std::string pattern, type;
        rule.get("pattern", pattern);
        rule.get("type", type);
        rule.finish();
        c.range_rules.emplace_back(pattern, type);
      }
    }
    sec.finish();
  }
  if (const json* s = top.child("synth"); s && !s->is_null()) c.synth = synth_from_json(*s, "synth");
  std::string variant(to_string(c.variant));
  top.get("variant", variant);
  c.variant = parse_variant(variant);
  top.get("seed_fraction", c.seed_fraction);
  top.get("validation_fraction", c.validation_fraction);
  top.get("unify_properties", c.unify_properties);
  top.get("match_property_labels", c.match_property_labels);
  if (const json* s = top.child("se")) {
    Section sec(*s, "se");
    sec.get("dim", c.se.dim);
    sec.get("alpha", c.se.alpha);
    sec.get("learning_rate", c.se.learning_rate);
    sec.get("negatives_per_positive", c.se.negatives_per_positive);
    sec.get("batch_size", c.se.batch_size);
    sec.get("epochs_max", c.se.epochs_max);
    sec.get("alternate_terms", c.se.alternate_terms);
    sec.get("constrain_relations", c.se.constrain_relations);
    sec.finish();
  }
  if (const json* s = top.child("ae")) {
    Section sec(*s, "ae");
    sec.get("dim", c.ae.dim);
    sec.get("negatives_per_pair", c.ae.negatives_per_pair);
    sec.get("learning_rate", c.ae.learning_rate);
    sec.get("epochs", c.ae.epochs);
    sec.get("batch_size", c.ae.batch_size);
    sec.finish();
  }
  if (const json* s = top.child("similarity")) {
    Section sec(*s, "similarity");
    sec.get("tau_cross", c.similarity.tau_cross);
    sec.get("tau_inner", c.similarity.tau_inner);
    sec.get("auto_tau", c.similarity.auto_tau);
    sec.get("row_normalize", c.similarity.row_normalize);
    sec.get("block_rows", c.similarity.block_rows);
    sec.finish();
  }
  if (const json* s = top.child("joint")) {
    Section sec(*s, "joint");
    sec.get("beta", c.joint.beta);
    sec.get("delta", c.joint.delta);
    sec.get("os_learning_rate", c.joint.os_learning_rate);
    sec.get("early_stop_ratio", c.joint.early_stop_ratio);
    sec.get("eval_every", c.joint.eval_every);
    sec.get("min_epochs", c.joint.min_epochs);
    sec.finish();
  }
  if (const json* s = top.child("eval")) {
    Section sec(*s, "eval");
    if (const json* ks = sec.child("ks")) {
      if (!ks->is_array()) throw ConfigError("config: 'eval.ks' must be an array");
      c.eval.ks.clear();
      for (const auto& k : *ks) {
        if (!k.is_number_unsigned()) throw ConfigError("config: 'eval.ks' entries must be positive integers");
        c.eval.ks.push_back(k.get<std::size_t>());
      }
    }
    sec.get("full_pool", c.eval.full_pool);
    sec.get("string_baseline", c.eval.string_baseline);
    sec.finish();
  }
  top.get("output_dir", c.output_dir);
  top.get("rng_seed", c.rng_seed);
  top.finish();
  return c;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("config: override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json* node = &j;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("config: bad override key '" + key + "'");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError("config: override '" + key + "' descends into a non-object");
    node = &(*node)[part];
  }
  try {
    *node = json::parse(value);
  } catch (const json::parse_error&) {
    *node = value;
  }
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Full:
      return "full";
    case Variant::SeOnly:
      return "se-only";
    case Variant::SeNoNeg:
      return "se-no-neg";
  }
  return "full";
}

Variant parse_variant(std::string_view name) {
  if (name == "full") return Variant::Full;
  if (name == "se-only") return Variant::SeOnly;
  if (name == "se-no-neg") return Variant::SeNoNeg;
  throw ConfigError("config: unknown variant '" + std::string(name) +
                    "' (expected full, se-only or se-no-neg)");
}

void RunConfig::validate() const {
  const int inputs = !dataset_dir.empty() + !dataset_cache.empty() + synth.has_value();
  if (inputs > 1) throw ConfigError("config: name only one of dataset.dir, dataset.cache and synth");
  if (format != "tsv" && format != "jsonl") throw ConfigError("config: dataset.format must be tsv or jsonl");
  for (const auto& [pattern, type] : range_rules) {
    if (type.empty()) throw ConfigError("config: range rule without a type name");
    try {
      std::regex re(pattern);
    } catch (const std::regex_error& e) {
      throw ConfigError("config: bad range rule regex '" + pattern + "': " + e.what());
    }
  }
  if (synth) synth->validate();
  if (!(seed_fraction > 0.0 && seed_fraction < 1.0)) throw ConfigError("config: seed_fraction must lie in (0, 1)");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("config: validation_fraction must lie in [0, 1)");
  }
  se.validate();
  ae.validate();
  similarity.validate();
  JointConfig j = joint;
  j.se = se;
  j.validate();
  if (eval.ks.empty()) throw ConfigError("config: eval.ks must not be empty");
  for (const std::size_t k : eval.ks) {
    if (k == 0) throw ConfigError("config: eval.ks entries must be >= 1");
  }
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

RunConfig RunConfig::effective() const {
  RunConfig c = *this;
  if (c.variant != Variant::Full) c.joint.delta = 0.0;
  if (c.variant == Variant::SeNoNeg) c.se.alpha = 0.0;
  c.se.rng_seed = rng_seed;
  c.ae.rng_seed = rng_seed;
  c.joint.se = c.se;
  if (c.synth) c.synth->seed_fraction = c.seed_fraction;
  return c;
}

std::string dump_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

RunConfig parse_config(std::string_view json_text) { return from_json(parse_json(json_text)); }

RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides) {
  json j = parse_json(json_text);
  for (const auto& o : overrides) apply_override(j, o);
  return from_json(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  return synth_from_json(parse_json(json_text), "synth");
}

std::string dump_synth_spec(const SynthSpec& spec) { return synth_to_json(spec).dump(2) + "\n"; }

}  // namespace kgalign
