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

// End-to-end acceptance checks. Prints one PASS/FAIL/SKIP line per criterion
// and exits non-zero when any criterion fails. Usage: kgalign_acceptance [scratch dir]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kgalign/attribute.hpp"
#include "kgalign/digest.hpp"
#include "kgalign/error.hpp"
#include "kgalign/eval.hpp"
#include "kgalign/joint.hpp"
#include "kgalign/log.hpp"
#include "kgalign/pipeline.hpp"
#include "kgalign/similarity.hpp"
#include "kgalign/string_baseline.hpp"
#include "kgalign/structure.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace kgalign;
namespace fs = std::filesystem;

namespace {

fs::path g_scratch;

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

// Collects failure messages; the first few are kept for the report line.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++failed_;
  }
  Outcome outcome(const std::string& summary) const {
    if (failed_ == 0) return {Outcome::Pass, summary};
    std::string msg = std::to_string(failed_) + "/" + std::to_string(checks_) + " checks failed";
    for (const auto& f : failures_) msg += "; " + f;
    return {Outcome::Fail, msg};
  }
  std::size_t checks() const { return checks_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

std::string fmt(double v, int precision = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

// ---- 1. gradient correctness ----------------------------------------------

constexpr double kFdStep = 1e-5;
constexpr double kFdTolerance = 1e-4;

Outcome gradients() {
  Checker c;
  Rng rng(101);
  double worst = 0.0;
  const auto compare = [&](double analytic, const std::function<double()>& f, double& x, const std::string& what) {
    const double err = oracle::rel_error(analytic, oracle::central_difference(f, x, kFdStep));
    worst = std::max(worst, err);
    c.expect(err <= kFdTolerance, what + " rel error " + std::to_string(err));
  };

  constexpr int kInstances = 100;
  for (int trial = 0; trial < kInstances; ++trial) {
    // O_SE on a random toy space, including repeated and self-loop slots.
    const std::size_t ents = 3 + uniform_index(rng, 6), rels = 1 + uniform_index(rng, 3);
    const std::size_t dim = 2 + uniform_index(rng, 5);
    EmbeddingSpace space{gen::matrix(rng, ents, dim), gen::matrix(rng, rels, dim), Matrix()};
    std::vector<SETerm> terms;
    const std::size_t n_terms = 1 + uniform_index(rng, 6);
    for (std::size_t i = 0; i < n_terms; ++i) {
      const auto e = [&] { return static_cast<Slot>(uniform_index(rng, ents)); };
      const auto r = static_cast<Slot>(uniform_index(rng, rels));
      terms.push_back({{e(), r, e()}, {e(), r, e()}});
    }
    const double alpha = gen::uniform(rng, 0.0, 1.0);
    Matrix ge(ents, dim), gr(rels, dim);
    se_gradient(space, terms, alpha, ge, gr);
    const auto f_se = [&] { return se_objective(space, terms, alpha); };
    for (std::size_t i = 0; i < ge.data().size(); ++i) compare(ge.data()[i], f_se, space.entities.data()[i], "O_SE entity");
    for (std::size_t i = 0; i < gr.data().size(); ++i) compare(gr.data()[i], f_se, space.relations.data()[i], "O_SE relation");

    // One attribute loss term with k negatives and weight 1 or 2.
    const std::size_t ad = 2 + uniform_index(rng, 6), k = 1 + uniform_index(rng, 5);
    auto a = gen::vec(rng, ad), ctx = gen::vec(rng, ad);
    std::vector<std::vector<double>> negs;
    for (std::size_t j = 0; j < k; ++j) negs.push_back(gen::vec(rng, ad));
    const double w = trial % 2 ? 2.0 : 1.0;
    const auto neg_spans = [&] {
      std::vector<std::span<const double>> s;
      for (const auto& n : negs) s.emplace_back(n);
      return s;
    };
    const auto ga = ae_loss_gradient(a, ctx, neg_spans(), w);
    const auto f_ae = [&] { return ae_loss_term(a, ctx, neg_spans(), w); };
    for (std::size_t i = 0; i < ad; ++i) {
      compare(ga.a[i], f_ae, a[i], "AE a");
      compare(ga.c[i], f_ae, ctx[i], "AE c");
      for (std::size_t j = 0; j < k; ++j) compare(ga.negatives[j][i], f_ae, negs[j][i], "AE negative");
    }

    // O_S with random sparse similarity matrices and masks.
    const std::size_t n1 = 2 + uniform_index(rng, 6), n2 = 2 + uniform_index(rng, 6), od = 2 + uniform_index(rng, 4);
    Matrix e1 = gen::matrix(rng, n1, od), e2 = gen::matrix(rng, n2, od);
    const auto sparse = [&](std::size_t rows, std::size_t cols, double density) {
      std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> coo;
      for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j) {
          if (uniform_unit(rng) < density) coo.emplace_back(i, j, gen::uniform(rng, 0.1, 1.0));
        }
      }
      return SparseMatrix::from_coo(rows, cols, coo);
    };
    SimilarityMatrices sims;
    sims.cross = sparse(n1, n2, 0.4);
    sims.inner1 = sparse(n1, n1, 0.3);
    sims.inner2 = sparse(n2, n2, 0.3);
    for (std::size_t i = 0; i < n1; ++i) sims.mask1.push_back(uniform_index(rng, 5) != 0);
    for (std::size_t i = 0; i < n2; ++i) sims.mask2.push_back(uniform_index(rng, 5) != 0);
    const double beta = gen::uniform(rng, 0.0, 1.0);
    Matrix g1(n1, od), g2(n2, od);
    os_gradient(e1, e2, sims, beta, g1, g2);
    const auto f_os = [&] { return os_loss(e1, e2, sims, beta); };
    for (std::size_t i = 0; i < g1.data().size(); ++i) compare(g1.data()[i], f_os, e1.data()[i], "O_S E1");
    for (std::size_t i = 0; i < g2.data().size(); ++i) compare(g2.data()[i], f_os, e2.data()[i], "O_S E2");
  }
  return c.outcome(std::to_string(kInstances) + " instances per objective, " + std::to_string(c.checks()) +
                   " coordinates, max rel error " + std::to_string(worst));
}

// ---- 2. norm invariant ----------------------------------------------------

constexpr double kNormTolerance = 1e-6;

RunConfig small_synthetic(std::size_t entities, std::uint64_t seed) {
  RunConfig cfg;
  cfg.synth = SynthSpec{};
  cfg.synth->n_entities = entities;
  cfg.synth->shared_property_fraction = 0.9;
  cfg.synth->rng_seed = seed;
  cfg.se.dim = 16;
  cfg.se.learning_rate = 0.1;
  cfg.se.epochs_max = 30;
  cfg.ae.dim = 16;
  cfg.ae.epochs = 5;
  cfg.joint.eval_every = 5;
  cfg.rng_seed = seed;
  return cfg;
}

Outcome norm_invariant() {
  Checker c;
  std::size_t epochs = 0;
  double worst = 0.0;
  const auto check = [&](const Matrix& m, const std::string& what) {
    const double dev = max_norm_deviation(m);
    worst = std::max(worst, dev);
    c.expect(dev <= kNormTolerance, what + " deviates by " + std::to_string(dev));
  };
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    for (const bool relations_constrained : {true, false}) {
      RunConfig cfg = small_synthetic(seed == 1 ? 400 : 150, seed);
      cfg.se.constrain_relations = relations_constrained;
      cfg = cfg.effective();
      const auto prep = prepare_data(cfg);
      const auto& kb1 = prep.data.kb1;
      const auto& kb2 = prep.data.kb2;

      const auto pairs = build_correlation_pairs(kb1, kb2, prep.seeds.entity_pairs, prep.index);
      const auto freq = attribute_frequencies(kb1, kb2, prep.index);
      AttributeTrainer ae(pairs, freq, cfg.ae);
      check(ae.vectors(), "initial attribute vectors");
      for (std::size_t e = 0; e < cfg.ae.epochs; ++e) {
        ae.epoch();
        check(ae.vectors(), "attribute vectors");
        ++epochs;
      }

      const auto sims = build_similarities(prep, ae.vectors(), cfg);
      JointTrainer trainer(kb1, kb2, prep.index, cfg.joint, &sims, prep.validation);
      check(trainer.space().entities, "initial entities");
      trainer.run([&](const EpochRecord& r) {
        check(trainer.space().entities, "entities after epoch " + std::to_string(r.epoch));
        if (relations_constrained) check(trainer.space().relations, "relations after epoch " + std::to_string(r.epoch));
        ++epochs;
      });
    }
  }
  return c.outcome(std::to_string(epochs) + " epochs checked, max deviation " + std::to_string(worst));
}

// ---- 3. oracle equivalence ------------------------------------------------

constexpr double kOracleTolerance = 1e-10;

oracle::Dense row_normalized(oracle::Dense d) {
  for (auto& row : d) {
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (sum > 0.0) {
      for (auto& v : row) v /= sum;
    }
  }
  return d;
}

Outcome oracle_equivalence() {
  Checker c;
  Rng rng(303);
  std::size_t instances = 0;
  for (int trial = 0; trial < 200; ++trial, ++instances) {
    const std::size_t n1 = 1 + uniform_index(rng, 50), n2 = 1 + uniform_index(rng, 50);
    const std::size_t d = 2 + uniform_index(rng, 4);
    // Low dimension keeps many cosines above the thresholds.
    Matrix a1 = gen::unit_rows(rng, n1, d), a2 = gen::unit_rows(rng, n2, d);
    std::vector<char> m1(n1), m2(n2);
    for (std::size_t i = 0; i < n1; ++i) {
      m1[i] = uniform_index(rng, 6) != 0;
      if (!m1[i]) std::fill(a1.row(i).begin(), a1.row(i).end(), 0.0);
    }
    for (std::size_t i = 0; i < n2; ++i) {
      m2[i] = uniform_index(rng, 6) != 0;
      if (!m2[i]) std::fill(a2.row(i).begin(), a2.row(i).end(), 0.0);
    }
    SimilarityConfig scfg;
    scfg.tau_cross = gen::uniform(rng, 0.5, 0.95);
    scfg.tau_inner = gen::uniform(rng, 0.5, 0.95);
    scfg.row_normalize = trial % 2 == 1;
    scfg.block_rows = 1 + uniform_index(rng, 20);
    const auto sims = build_similarity_matrices(a1, a2, m1, m2, scfg);
    auto s12 = oracle::thresholded_cosine(a1, a2, scfg.tau_cross);
    auto s1 = oracle::thresholded_cosine(a1, a1, scfg.tau_inner);
    auto s2 = oracle::thresholded_cosine(a2, a2, scfg.tau_inner);
    if (scfg.row_normalize) {
      s12 = row_normalized(s12);
      s1 = row_normalized(s1);
      s2 = row_normalized(s2);
    }
    const auto same = [&](const SparseMatrix& s, const oracle::Dense& o, const char* name) {
      double diff = 0.0;
      std::size_t stored = 0;
      for (std::size_t i = 0; i < o.size(); ++i) {
        for (std::size_t j = 0; j < o[i].size(); ++j) {
          diff = std::max(diff, std::abs(s.at(i, j) - o[i][j]));
          stored += o[i][j] != 0.0;
        }
      }
      c.expect(diff <= kOracleTolerance && stored == s.nnz(), std::string(name) + " differs by " + std::to_string(diff));
    };
    same(sims.cross, s12, "S12");
    same(sims.inner1, s1, "S1");
    same(sims.inner2, s2, "S2");

    const Matrix e1 = gen::unit_rows(rng, n1, d + 1), e2 = gen::unit_rows(rng, n2, d + 1);
    const double beta = gen::uniform(rng, 0.0, 1.0);
    const double expected = oracle::os_loss(e1, e2, s12, s1, s2, m1, m2, beta);
    const double got = os_loss(e1, e2, sims, beta);
    c.expect(std::abs(got - expected) <= kOracleTolerance * std::max(1.0, expected),
             "os_loss " + std::to_string(got) + " vs " + std::to_string(expected));

    for (int t = 0; t < 5; ++t) {
      const auto h = gen::vec(rng, d), r = gen::vec(rng, d), tl = gen::vec(rng, d);
      c.expect(std::abs(score_triple(h, r, tl) - oracle::score(h, r, tl)) <= kOracleTolerance, "score_triple");
    }

    // Ranking with coarse values on half the trials so ties are common.
    const std::size_t n = std::min(n1, n2);
    Matrix r1 = gen::matrix(rng, n, d), r2 = gen::matrix(rng, n, d);
    if (trial % 2 == 0) {
      for (auto* m : {&r1, &r2}) {
        for (auto& x : m->data()) x = static_cast<double>(uniform_index(rng, 3)) / 2.0;
      }
    }
    std::vector<EntityId> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<EntityPair> pairs;
    for (EntityId i = 0; i < n; ++i) pairs.push_back({i, perm[i]});
    for (const auto dir : {Direction::KB1ToKB2, Direction::KB2ToKB1}) {
      const bool fwd = dir == Direction::KB1ToKB2;
      const auto res = rank_targets(r1, r2, pairs, dir);
      std::vector<std::uint32_t> cands;
      for (const auto& p : pairs) cands.push_back(fwd ? p.e2 : p.e1);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const EntityId s = fwd ? pairs[i].e1 : pairs[i].e2;
        const EntityId t = fwd ? pairs[i].e2 : pairs[i].e1;
        std::vector<double> scores(n);
        for (EntityId cand = 0; cand < n; ++cand) {
          scores[cand] = 0.0;
          for (std::size_t k = 0; k < d; ++k) scores[cand] += (fwd ? r1 : r2)(s, k) * (fwd ? r2 : r1)(cand, k);
        }
        c.expect(res.ranks[i] == oracle::rank_by_sort(scores, cands, t), "rank of pair " + std::to_string(i));
      }
    }
  }
  return c.outcome(std::to_string(instances) + " instances of <= 50 entities, " + std::to_string(c.checks()) +
                   " comparisons");
}

// ---- 4. synthetic recovery and ablation ordering ---------------------------

// 1000 entities, structural noise 0.05 and 30% seeds are the generator
// defaults. Most properties share labels across the KBs so seed property
// pairs can be matched, and attributes come in many small co-occurrence
// groups so attribute similarity separates entities.
RunConfig recovery_config(Variant variant, double seed_fraction, const fs::path& out) {
  RunConfig cfg;
  cfg.synth = SynthSpec{};
  cfg.synth->shared_property_fraction = 0.95;
  cfg.synth->n_attributes = 500;
  cfg.synth->attribute_groups = 50;
  cfg.synth->attributes_per_entity_min = 3;
  cfg.synth->attributes_per_entity_max = 6;
  cfg.variant = variant;
  cfg.seed_fraction = seed_fraction;
  cfg.validation_fraction = 0.0;
  cfg.se.dim = 32;
  cfg.se.learning_rate = 0.1;
  cfg.se.epochs_max = 500;
  cfg.joint.min_epochs = 500;
  cfg.joint.os_learning_rate = 0.08;
  cfg.similarity.auto_tau = true;
  cfg.similarity.row_normalize = true;
  cfg.eval.string_baseline = false;
  cfg.output_dir = out.string();
  return cfg;
}

const AlignmentResult& kb1_to_kb2(const PipelineResult& r) {
  for (const auto& [name, res] : r.metrics) {
    if (res.direction == Direction::KB1ToKB2) return res;
  }
  throw std::logic_error("no KB1 -> KB2 result");
}

std::string summary(const char* name, const AlignmentResult& r) {
  return std::string(name) + " H@1 " + fmt(r.hits_at(1)) + " Mean " + fmt(r.mean_rank, 1);
}

Outcome synthetic_recovery() {
  Checker c;
  const auto full = kb1_to_kb2(run_pipeline(recovery_config(Variant::Full, 0.3, g_scratch / "c4_full")));
  const auto se = kb1_to_kb2(run_pipeline(recovery_config(Variant::SeOnly, 0.3, g_scratch / "c4_se")));
  const auto no_neg = kb1_to_kb2(run_pipeline(recovery_config(Variant::SeNoNeg, 0.3, g_scratch / "c4_noneg")));
  c.expect(full.hits_at(1) >= 90.0, "full Hits@1 below 90");
  c.expect(full.mean_rank <= 3.0, "full Mean above 3");
  c.expect(se.hits_at(1) < full.hits_at(1), "SE-only not below full");
  c.expect(no_neg.hits_at(1) < se.hits_at(1), "SE w/o negatives not below SE");
  const std::string s = summary("full", full) + ", " + summary("SE", se) + ", " + summary("SE w/o neg", no_neg);
  auto o = c.outcome(s);
  if (o.status == Outcome::Fail) o.detail += " (" + s + ")";
  return o;
}

// ---- 5. seed-proportion monotonicity --------------------------------------

// Hits@10 is near 100 in the recovery setting, so seed fractions are compared
// with half of the properties unshared and a larger relation vocabulary.
RunConfig proportion_config(double seed_fraction, const fs::path& out) {
  auto cfg = recovery_config(Variant::Full, seed_fraction, out);
  cfg.synth->shared_property_fraction = 0.5;
  cfg.synth->n_relations = 100;
  return cfg;
}

Outcome seed_monotonicity() {
  Checker c;
  std::string s;
  double previous = -1.0;
  for (const double fraction : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto out = g_scratch / ("c5_" + std::to_string(static_cast<int>(fraction * 100)));
    const auto r = kb1_to_kb2(run_pipeline(proportion_config(fraction, out)));
    const double h10 = r.hits_at(10);
    c.expect(h10 >= previous, "Hits@10 dropped at seed fraction " + fmt(fraction, 1));
    previous = h10;
    s += (s.empty() ? "" : ", ") + fmt(fraction * 100, 0) + "%: " + fmt(h10);
  }
  auto o = c.outcome("Hits@10 " + s);
  if (o.status == Outcome::Fail) o.detail += " (" + s + ")";
  return o;
}

// ---- 6. combination dominance ---------------------------------------------

Outcome combination_dominance() {
  Checker c;
  // Embeddings get the first half right and swap neighbours in the second
  // half; translated labels do the opposite.
  constexpr std::size_t n = 40, half = n / 2;
  const auto swapped = [](std::size_t i) { return i ^ 1u; };
  Matrix e1(n, n), e2(n, n);
  LabelTable labels;
  for (std::size_t i = 0; i < n; ++i) {
    e2(i, i) = 1.0;
    e1(i, i < half ? i : swapped(i)) = 1.0;
    labels.labels2.push_back("entity " + std::string(1, static_cast<char>('a' + i % 26)) + std::to_string(i * 7919));
  }
  for (std::size_t i = 0; i < n; ++i) labels.translated1.push_back(labels.labels2[i < half ? swapped(i) : i]);
  std::vector<EntityPair> pairs;
  for (EntityId i = 0; i < n; ++i) pairs.push_back({i, i});
  const std::vector<std::size_t> ks{1, 2, 5, 10, 20, 40};
  const auto embed = rank_targets(e1, e2, pairs, Direction::KB1ToKB2, {.ks = ks});
  const auto str = string_rank(labels, pairs, Direction::KB1ToKB2, ks);
  for (std::size_t i = 0; i < n; ++i) {
    c.expect((embed.ranks[i] == 1) == (i < half), "embedding fixture rank " + std::to_string(i));
    c.expect((str.ranks[i] == 1) == (i >= half), "string fixture rank " + std::to_string(i));
  }
  const auto combined = combine_results(embed, str);
  for (std::size_t k = 0; k < ks.size(); ++k) {
    c.expect(combined.hits[k] >= std::max(embed.hits[k], str.hits[k]), "Hits@" + std::to_string(ks[k]));
  }
  c.expect(combined.hits[0] == 100.0, "combined Hits@1 is not 100");

  // The same must hold for arbitrary rank vectors.
  Rng rng(606);
  for (int trial = 0; trial < 500; ++trial) {
    AlignmentResult a, b;
    a.ks = b.ks = ks;
    const std::size_t m = 1 + uniform_index(rng, 60);
    for (std::size_t i = 0; i < m; ++i) {
      a.ranks.push_back(static_cast<std::uint32_t>(1 + uniform_index(rng, 50)));
      b.ranks.push_back(static_cast<std::uint32_t>(1 + uniform_index(rng, 50)));
    }
    summarize(a);
    summarize(b);
    const auto comb = combine_results(a, b);
    for (std::size_t k = 0; k < ks.size(); ++k) {
      c.expect(comb.hits[k] >= std::max(a.hits[k], b.hits[k]), "random Hits@" + std::to_string(ks[k]));
    }
    c.expect(comb.mean_rank <= std::min(a.mean_rank, b.mean_rank), "random Mean");
  }
  return c.outcome("embedding H@1 " + fmt(embed.hits_at(1)) + ", string H@1 " + fmt(str.hits_at(1)) +
                   ", combined H@1 " + fmt(combined.hits_at(1)) + "; 500 random rank vectors");
}

// ---- 7. determinism -------------------------------------------------------

Outcome determinism() {
  Checker c;
  RunConfig cfg = small_synthetic(500, 7);
  cfg.output_dir = (g_scratch / "c7").string();
  const std::vector<std::string> artifacts{"ae.ckpt", "model.ckpt", "epochs.csv", "metrics.csv",
                                           "ranks_embed-full_kb1_kb2.tsv", "manifest.json"};
  // Same output directory both times since the checkpoint embeds the config.
  // The worker count changes between runs and must not matter.
  std::vector<std::string> first;
  for (const char* threads : {"1", "4"}) {
    setenv("KGALIGN_THREADS", threads, 1);
    run_pipeline(cfg);
    std::vector<std::string> bytes;
    for (const auto& f : artifacts) bytes.push_back(read_file(fs::path(cfg.output_dir) / f));
    if (first.empty()) {
      first = std::move(bytes);
      continue;
    }
    for (std::size_t i = 0; i < artifacts.size(); ++i) c.expect(bytes[i] == first[i], artifacts[i] + " differs");
  }
  unsetenv("KGALIGN_THREADS");
  std::string digest;
  for (std::size_t i = 0; i < 2; ++i) digest += artifacts[i] + " " + sha1_hex(first[i]).substr(0, 12) + " ";
  return c.outcome("two runs (1 and 4 workers) bit-identical: " + digest);
}

// ---- 8. full-data track ---------------------------------------------------

Outcome full_data() {
  const char* dir = std::getenv("KGALIGN_DBP15K_DIR");
  if (!dir || !*dir) return {Outcome::Skip, "KGALIGN_DBP15K_DIR not set"};
  Checker c;
  RunConfig cfg;
  cfg.dataset_dir = dir;
  cfg.output_dir = (g_scratch / "c8").string();
  cfg.eval.string_baseline = false;
  const auto prep = prepare_data(cfg.effective());
  const auto& kb1 = prep.data.kb1;
  const auto& kb2 = prep.data.kb2;
  c.expect(kb1.num_entities() == 66469, "KB1 entities " + std::to_string(kb1.num_entities()));
  c.expect(kb2.num_entities() == 98125, "KB2 entities " + std::to_string(kb2.num_entities()));
  c.expect(kb1.rel_triples().size() == 153929, "KB1 triples " + std::to_string(kb1.rel_triples().size()));
  c.expect(kb2.rel_triples().size() == 237674, "KB2 triples " + std::to_string(kb2.rel_triples().size()));
  const auto r = kb1_to_kb2(run_pipeline(cfg));
  c.expect(std::abs(r.hits_at(10) - 74.46) <= 5.0, "Hits@10 " + fmt(r.hits_at(10)) + " outside 74.46 +- 5");
  return c.outcome("ZH->EN Hits@10 " + fmt(r.hits_at(10)));
}

}  // namespace

int main(int argc, char** argv) {
  g_scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "kgalign_acceptance";
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);
  log::set_level(log::Level::Warn);

  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"gradient correctness", gradients},
      {"norm invariant", norm_invariant},
      {"oracle equivalence", oracle_equivalence},
      {"synthetic recovery", synthetic_recovery},
      {"seed-proportion monotonicity", seed_monotonicity},
      {"combination dominance", combination_dominance},
      {"determinism", determinism},
      {"full-data track", full_data},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* status = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Skip ? "SKIP" : "FAIL";
    failed += o.status == Outcome::Fail;
    std::cout << "criterion " << i + 1 << " " << status << " " << criteria[i].first << ": " << o.detail << " ["
              << fmt(secs, 1) << "s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
