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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "kgalign/error.hpp"
#include "kgalign/structure.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace kgalign;

namespace {

UnifiedIndex index_for(const KnowledgeBase& kb1, const KnowledgeBase& kb2) {
  return merge_for_training(kb1, kb2, SeedAlignment{});
}

EmbeddingSpace random_space(Rng& rng, std::size_t ents, std::size_t rels, std::size_t dim) {
  return {gen::matrix(rng, ents, dim), gen::matrix(rng, rels, dim), Matrix()};
}

}  // namespace

TEST_CASE("triple score is the squared translation residual") {
  const std::vector<double> h{1, 0, 0}, r{0, 1, 0}, t{0, 0, 1};
  CHECK(score_triple(h, r, t) == 3.0);
  const std::vector<double> h2{0.5, 0.5}, r2{0.25, -0.5}, t2{0.75, 0.0};
  CHECK(score_triple(h2, r2, t2) == 0.0);
  CHECK_THROWS_AS(score_triple(h, r, h2), std::invalid_argument);
}

TEST_CASE("structure gradient matches central differences") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto space = random_space(rng, 6, 3, 4);
    std::vector<SETerm> terms;
    for (int i = 0; i < 5; ++i) {
      const auto e = [&] { return static_cast<Slot>(uniform_index(rng, 6)); };
      const auto r = static_cast<Slot>(uniform_index(rng, 3));
      terms.push_back({{e(), r, e()}, {e(), r, e()}});
    }
    terms.push_back({{2, 1, 2}, {2, 1, 4}});  // head == tail
    const double alpha = gen::uniform(rng, 0.0, 1.0);
    Matrix ge(6, 4), gr(3, 4);
    se_gradient(space, terms, alpha, ge, gr);
    const auto f = [&] { return se_objective(space, terms, alpha); };
    for (std::size_t i = 0; i < space.entities.data().size(); ++i) {
      CHECK(oracle::rel_error(ge.data()[i], oracle::central_difference(f, space.entities.data()[i])) < 1e-6);
    }
    for (std::size_t i = 0; i < space.relations.data().size(); ++i) {
      CHECK(oracle::rel_error(gr.data()[i], oracle::central_difference(f, space.relations.data()[i])) < 1e-6);
    }
  }
}

TEST_CASE("negatives corrupt one side, avoid known triples and never repeat") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 80);
    const auto kb = gen::kb(rng, 1, n, 3, 4 * n);
    const auto& tr = kb.rel_triples()[uniform_index(rng, kb.rel_triples().size())];
    const std::size_t k = 1 + uniform_index(rng, 5);
    std::size_t shortfall = 0;
    const auto negs = generate_negatives(tr, k, kb, rng, &shortfall);
    CHECK(negs.size() + shortfall == k);
    std::set<std::tuple<EntityId, RelationId, EntityId>> seen;
    for (const auto& c : negs) {
      CHECK_FALSE(kb.contains(c));
      CHECK(c.rel == tr.rel);
      CHECK(((c.head == tr.head) != (c.tail == tr.tail)));
      CHECK(seen.insert({c.head, c.rel, c.tail}).second);
    }
  }
}

TEST_CASE("small pools are enumerated and report a shortfall when exhausted") {
  // Two entities with both directions present: only (0,r,0) and (1,r,1) remain.
  const auto kb = KnowledgeBase::from_parts(1, {"a", "b"}, {"r"}, {}, {{0, 0, 1}, {1, 0, 0}}, {});
  Rng rng(1);
  std::size_t shortfall = 0;
  const auto negs = generate_negatives({0, 0, 1}, 5, kb, rng, &shortfall);
  CHECK(negs.size() == 2);
  CHECK(shortfall == 3);
  CHECK_THROWS_AS(generate_negatives({0, 0, 1}, 0, kb, rng), std::invalid_argument);
}

TEST_CASE("se config validation") {
  SEConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.dim = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("training keeps entity rows on the unit sphere and reduces the loss") {
  Rng rng(8);
  const auto kb1 = gen::kb(rng, 1, 40, 4, 160);
  const auto kb2 = gen::kb(rng, 2, 40, 4, 160);
  const auto index = index_for(kb1, kb2);
  SEConfig cfg;
  cfg.dim = 16;
  cfg.learning_rate = 0.1;
  cfg.batch_size = 50;
  Rng init(3);
  auto space = init_space(index, cfg.dim, init);
  StructureTrainer trainer(kb1, kb2, index, cfg);
  CHECK(trainer.num_triples() == kb1.rel_triples().size() + kb2.rel_triples().size());
  const double first = trainer.epoch(space);
  double last = first;
  for (int e = 0; e < 30; ++e) {
    last = trainer.epoch(space);
    CHECK(max_norm_deviation(space.entities) < 1e-12);
    CHECK(max_norm_deviation(space.relations) < 1e-12);
  }
  CHECK(last < first);
  CHECK(trainer.epochs_run() == 31);
}

TEST_CASE("initial vectors do not depend on the seed set") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto kb1 = gen::kb(rng, 1, 30, 5, 80);
    const auto kb2 = gen::kb(rng, 2, 30, 5, 80);
    // Random prefix lengths of one random pairing, so the seed sets nest.
    std::vector<EntityId> perm(30);
    std::iota(perm.begin(), perm.end(), EntityId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    SeedAlignment small, large;
    const std::size_t a = uniform_index(rng, 15), b = a + uniform_index(rng, 15);
    for (std::size_t i = 0; i < b; ++i) {
      const EntityPair p{static_cast<EntityId>(i), perm[i]};
      if (i < a) small.entity_pairs.push_back(p);
      large.entity_pairs.push_back(p);
    }
    small.relationship_pairs = large.relationship_pairs = {{0, 0}};
    const auto ia = merge_for_training(kb1, kb2, small);
    const auto ib = merge_for_training(kb1, kb2, large);
    Rng ra(trial), rb(trial);
    const auto sa = init_space(ia, 8, ra);
    const auto sb = init_space(ib, 8, rb);
    const auto same = [](std::span<const double> x, std::span<const double> y) {
      return std::equal(x.begin(), x.end(), y.begin(), y.end());
    };
    for (std::uint32_t i = 0; i < 30; ++i) {
      CHECK(same(sa.entities.row(ia.entities.kb1[i]), sb.entities.row(ib.entities.kb1[i])));
    }
    // A KB2 entity unmerged in both runs keeps its own vector.
    for (std::uint32_t j = 0; j < 30; ++j) {
      const bool merged = std::find(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(b), j) !=
                          perm.begin() + static_cast<std::ptrdiff_t>(b);
      if (merged) continue;
      CHECK(same(sa.entities.row(ia.entities.kb2[j]), sb.entities.row(ib.entities.kb2[j])));
    }
    for (std::uint32_t r = 1; r < 5; ++r) {
      CHECK(same(sa.relations.row(ia.relationships.kb2[r]), sb.relations.row(ib.relationships.kb2[r])));
    }
    CHECK(max_norm_deviation(sa.entities) < 1e-12);
    CHECK(max_norm_deviation(sb.relations) < 1e-12);
  }
}

TEST_CASE("entities outside every triple are never updated") {
  auto kb1 = KnowledgeBase::from_parts(1, {"a", "b", "lonely"}, {"r"}, {}, {{0, 0, 1}}, {});
  auto kb2 = KnowledgeBase::from_parts(2, {"x", "y"}, {"r"}, {}, {{0, 0, 1}}, {});
  const auto index = index_for(kb1, kb2);
  SEConfig cfg;
  cfg.dim = 8;
  Rng init(2);
  auto space = init_space(index, cfg.dim, init);
  const auto lonely = space.entities.row(index.entities.kb1[2]);
  const std::vector<double> before(lonely.begin(), lonely.end());
  StructureTrainer trainer(kb1, kb2, index, cfg);
  for (int e = 0; e < 5; ++e) trainer.epoch(space);
  const auto after = space.entities.row(index.entities.kb1[2]);
  CHECK(std::vector<double>(after.begin(), after.end()) == before);
}

TEST_CASE("alpha = 0 reduces to the positive term alone") {
  Rng rng(12);
  const auto kb1 = gen::kb(rng, 1, 30, 3, 90);
  const auto kb2 = gen::kb(rng, 2, 30, 3, 90);
  const auto index = index_for(kb1, kb2);
  SEConfig cfg;
  cfg.dim = 8;
  cfg.alpha = 0.0;
  cfg.negatives_per_positive = 2;
  cfg.batch_size = 1u << 20;  // one batch: the loss is evaluated before any update
  Rng init(4);
  auto space = init_space(index, cfg.dim, init);
  double expected = 0.0;
  for (const auto* kb : {&kb1, &kb2}) {
    const auto& slots = kb->kb_id() == 1 ? index.entities.kb1 : index.entities.kb2;
    const auto& rslots = kb->kb_id() == 1 ? index.relationships.kb1 : index.relationships.kb2;
    for (const auto& t : kb->rel_triples()) {
      expected += 2.0 * score_triple(space.entities.row(slots[t.head]), space.relations.row(rslots[t.rel]),
                                     space.entities.row(slots[t.tail]));
    }
  }
  StructureTrainer trainer(kb1, kb2, index, cfg);
  CHECK(trainer.epoch(space) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(trainer.negative_shortfall() == 0);
}

TEST_CASE("training is deterministic for a fixed seed") {
  Rng rng(21);
  const auto kb1 = gen::kb(rng, 1, 25, 3, 70);
  const auto kb2 = gen::kb(rng, 2, 25, 3, 70);
  const auto index = index_for(kb1, kb2);
  SEConfig cfg;
  cfg.dim = 8;
  cfg.batch_size = 16;
  cfg.rng_seed = 77;
  const auto run = [&](std::uint64_t seed) {
    SEConfig c = cfg;
    c.rng_seed = seed;
    Rng init(1);
    auto space = init_space(index, c.dim, init);
    StructureTrainer trainer(kb1, kb2, index, c);
    for (int e = 0; e < 4; ++e) trainer.epoch(space);
    return space;
  };
  CHECK(run(77) == run(77));
  CHECK_FALSE(run(77) == run(78));
}

TEST_CASE("a non-finite loss raises a numeric error naming the triple") {
  const auto kb1 = KnowledgeBase::from_parts(1, {"a", "b"}, {"r"}, {}, {{0, 0, 1}}, {});
  const auto kb2 = KnowledgeBase::from_parts(2, {"x", "y"}, {"r"}, {}, {{0, 0, 1}}, {});
  const auto index = index_for(kb1, kb2);
  SEConfig cfg;
  cfg.dim = 4;
  Rng init(1);
  auto space = init_space(index, cfg.dim, init);
  for (auto& x : space.entities.data()) x = std::nan("");
  StructureTrainer trainer(kb1, kb2, index, cfg);
  CHECK_THROWS_WITH_AS(trainer.epoch(space), doctest::Contains("non-finite"), NumericError);
}

TEST_CASE("two-entity corruption set is {(B,r,B), (A,r,A)}") {
  const auto kb = KnowledgeBase::from_parts(1, {"A", "B"}, {"r"}, {}, {{0, 0, 1}}, {});
  Rng rng(3);
  std::set<std::pair<EntityId, EntityId>> drawn;
  for (int i = 0; i < 50; ++i) {
    for (const auto& c : generate_negatives({0, 0, 1}, 1, kb, rng)) drawn.insert({c.head, c.tail});
  }
  CHECK(drawn == std::set<std::pair<EntityId, EntityId>>{{1, 1}, {0, 0}});
  const auto both = generate_negatives({0, 0, 1}, 2, kb, rng);
  CHECK(both.size() == 2);
}

TEST_CASE("corruptions only use entities that occur in relationship triples") {
  Rng rng(44);
  for (const std::size_t n : {10u, 200u}) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < 2 * n; ++i) names.push_back("e" + std::to_string(i));
    std::vector<RelTriple> triples;
    for (EntityId i = 0; i + 1 < n; ++i) triples.push_back({i, 0, i + 1});
    // Entities n..2n-1 have no triples.
    const auto kb = KnowledgeBase::from_parts(1, names, {"r"}, {}, triples, {});
    CHECK(structural_entities(kb).size() == n);
    for (int i = 0; i < 200; ++i) {
      for (const auto& c : generate_negatives(triples[uniform_index(rng, triples.size())], 3, kb, rng)) {
        CHECK(c.head < n);
        CHECK(c.tail < n);
      }
    }
  }
}
