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

#include <fstream>

#include "doctest.h"
#include "kgalign/error.hpp"
#include "kgalign/string_baseline.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace kgalign;

TEST_CASE("edit distance on fixed examples") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("same", "same") == 0);
  // Code points, not bytes: one substitution.
  CHECK(levenshtein("北京", "南京") == 1);
  CHECK(levenshtein("café", "cafe") == 1);
}

TEST_CASE("normalized similarity") {
  CHECK(label_similarity("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
  CHECK(label_similarity("Beijing", "Beijing") == 1.0);
  CHECK(label_similarity("", "") == 0.0);
  CHECK(label_similarity("", "x") == 0.0);
}

TEST_CASE("edit distance agrees with the full table and is a metric") {
  Rng rng(81);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = gen::word(rng, 8), b = gen::word(rng, 8), c = gen::word(rng, 8);
    const auto ua = decode_utf8(a), ub = decode_utf8(b), uc = decode_utf8(c);
    const auto ab = levenshtein(a, b);
    CHECK(ab == oracle::levenshtein(ua, ub));
    CHECK(ab == levenshtein(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(levenshtein(a, c) <= ab + levenshtein(b, c));
    const double s = label_similarity(a, b);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("utf-8 decoding") {
  CHECK(decode_utf8("a\xc3\xa9\xe4\xb8\xad\xf0\x9f\x98\x80") == U"aé中\U0001F600");
  CHECK(decode_utf8("\xff") == U"�");
  CHECK(decode_utf8("\xe4\xb8") == U"��");
}

TEST_CASE("labels derived from IRIs") {
  CHECK(label_from_iri("http://dbpedia.org/resource/New_York_City") == "New York City");
  CHECK(label_from_iri("http://zh.dbpedia.org/resource/%E5%8C%97%E4%BA%AC") == "北京");
  CHECK(label_from_iri("urn#Frag") == "Frag");
  CHECK(label_from_iri("bad%zz") == "bad%zz");
}

TEST_CASE("three-entity fixture ranks match a brute-force oracle") {
  LabelTable labels;
  labels.labels1 = {"Peking", "Shanghai", "Canton"};
  labels.labels2 = {"Beijing", "Shanghai", "Guangzhou"};
  labels.translated1 = {"Beijing", "Shanghai", "Kanton"};
  labels.translated2 = {"Peking", "Shanghai", "Guangzhou"};
  const std::vector<EntityPair> pairs{{0, 0}, {1, 1}, {2, 2}};
  const auto r = string_rank(labels, pairs, Direction::KB1ToKB2, {1, 2});
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> scores;
    for (const auto& t : labels.labels2) scores.push_back(label_similarity(labels.translated1[i], t));
    CHECK(r.ranks[i] == oracle::rank_by_sort(scores, {0, 1, 2}, static_cast<std::uint32_t>(i)));
  }
  CHECK(r.ranks[0] == 1);
  CHECK(r.ranks[1] == 1);
  const auto back = string_rank(labels, pairs, Direction::KB2ToKB1, {1});
  CHECK(back.ranks[2] >= 1);
  CHECK(back.excluded == 0);
}

TEST_CASE("missing translations still get a rank from the id tie-break") {
  LabelTable labels;
  labels.labels1 = {"a", "b", "c"};
  labels.labels2 = {"x", "y", "z"};
  labels.translated1 = {"", "", ""};
  const std::vector<EntityPair> pairs{{0, 2}, {1, 0}, {2, 1}};
  const auto r = string_rank(labels, pairs, Direction::KB1ToKB2, {1});
  CHECK(r.ranks == std::vector<std::uint32_t>{3, 1, 2});
  CHECK(r.excluded == 0);
}

TEST_CASE("combination dominates both methods when they err on disjoint entities") {
  // Embedding gets the first half right, strings the second half.
  AlignmentResult embed, str;
  embed.ks = str.ks = {1, 10, 50};
  for (int i = 0; i < 40; ++i) {
    embed.ranks.push_back(i < 20 ? 1 : 30);
    str.ranks.push_back(i < 20 ? 60 : 1);
  }
  summarize(embed);
  summarize(str);
  const auto c = combine_results(embed, str);
  CHECK(c.hits == std::vector<double>{100.0, 100.0, 100.0});
  for (std::size_t k = 0; k < 3; ++k) CHECK(c.hits[k] >= std::max(embed.hits[k], str.hits[k]));
}

TEST_CASE("label files map IRIs to entity ids") {
  KnowledgeBase kb(1);
  kb.add_rel_triple("http://a/x", "p", "http://a/y");
  const auto dir = gen::scratch("labels");
  {
    std::ofstream out(dir / "labels");
    out << "<http://a/y>\tWhy\r\nhttp://a/x\tEx\nunknown\tZ\nno-tab\n";
  }
  CHECK(load_labels(dir / "labels", kb) == std::vector<std::string>{"Ex", "Why"});
  CHECK_THROWS_AS(load_labels(dir / "missing", kb), DataError);
  const std::vector<std::pair<std::string, std::string>> pairs{{"http://a/y", "W"}};
  CHECK(labels_from_pairs(pairs, kb) == std::vector<std::string>{"", "W"});
  CHECK(labels_from_iris(kb) == std::vector<std::string>{"x", "y"});
}
