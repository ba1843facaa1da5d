// Copyright 2026 The lidkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lidkit/corpus.hpp"

#include <random>

#include <doctest.h>

#include "lidkit/util.hpp"
#include "test_helpers.hpp"

using namespace lidkit;
using lidkit::testing::TempDir;

namespace {

std::string Contains(const Error& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos ? "" : e.what();
}

}  // namespace

TEST_CASE("LoadManifest basics") {
  TempDir dir("manifest");

  SUBCASE("empty file gives an empty list") {
    AtomicWriteFile(dir.File("empty.jsonl"), "");
    CHECK(LoadManifest(dir.File("empty.jsonl")).empty());
  }

  SUBCASE("one well-formed record") {
    AtomicWriteFile(dir.File("one.jsonl"),
                    R"({"id":"u1","transcripts":{"et":"tere"},"label":"et"})"
                    "\n");
    auto data = LoadManifest(dir.File("one.jsonl"));
    REQUIRE(data.size() == 1);
    CHECK(data[0].id == "u1");
    CHECK(data[0].Transcript("et") == "tere");
    CHECK(*data[0].label == "et");
    CHECK_FALSE(data[0].group.has_value());
  }

  SUBCASE("duplicate ids are rejected, naming the id") {
    AtomicWriteFile(dir.File("dup.jsonl"),
                    "{\"id\":\"u1\",\"transcripts\":{\"a\":\"x\"}}\n"
                    "{\"id\":\"u1\",\"transcripts\":{\"a\":\"y\"}}\n");
    try {
      LoadManifest(dir.File("dup.jsonl"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(Contains(e, "u1") == "");
      CHECK(Contains(e, ":2") == "");
    }
  }

  SUBCASE("malformed records name line and field") {
    AtomicWriteFile(dir.File("bad.jsonl"),
                    "{\"id\":\"u1\"}\n{\"id\":\"u2\",\"duration_sec\":-1}\n");
    try {
      LoadManifest(dir.File("bad.jsonl"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(Contains(e, ":2") == "");
      CHECK(Contains(e, "duration_sec") == "");
    }
    AtomicWriteFile(dir.File("nojson.jsonl"), "not json\n");
    CHECK_THROWS_AS(LoadManifest(dir.File("nojson.jsonl")), Error);
    AtomicWriteFile(dir.File("noid.jsonl"), "{\"label\":\"et\"}\n");
    try {
      LoadManifest(dir.File("noid.jsonl"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(Contains(e, "'id'") == "");
    }
  }

  SUBCASE("round trip preserves every field") {
    std::vector<Utterance> data;
    Utterance a;
    a.id = "a1";
    a.transcripts = {{"en", "hello there"}, {"et", "tere \xC3\xB5htust"}};
    a.label = "et";
    a.group = "B1";
    a.duration_sec = 3.25;
    data.push_back(a);
    Utterance b;
    b.id = "b2";
    b.transcripts = {{"en", ""}};
    data.push_back(b);
    SaveManifest(data, dir.File("rt.jsonl"));
    auto loaded = LoadManifest(dir.File("rt.jsonl"));
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].transcripts == a.transcripts);
    CHECK(loaded[0].label == a.label);
    CHECK(loaded[0].group == a.group);
    CHECK(loaded[0].duration_sec == a.duration_sec);
    CHECK(loaded[1].id == "b2");
    CHECK_FALSE(loaded[1].label.has_value());
  }
}

TEST_CASE("LoadScores reindexes into the canonical label order") {
  TempDir dir("scores");
  AtomicWriteFile(dir.File("s.tsv"),
                  "#space raw\nid\ten\tet\nu1\t0.1\t0.9\n");
  LabelSet canonical(std::vector<std::string>{"et", "en"});
  ScoreTable table = LoadScores(dir.File("s.tsv"), canonical);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].values[0] == 0.9);
  CHECK(table.rows[0].values[1] == 0.1);
  CHECK(table.labels == canonical);

  SUBCASE("unknown header code is rejected") {
    LabelSet other(std::vector<std::string>{"et", "fi"});
    CHECK_THROWS_AS(LoadScores(dir.File("s.tsv"), other), Error);
  }
}

TEST_CASE("LoadScores validates values") {
  TempDir dir("scores2");

  SUBCASE("non-numeric token") {
    AtomicWriteFile(dir.File("bad.tsv"), "#space raw\nid\ten\tet\nu1\tx\t0.9\n");
    CHECK_THROWS_AS(LoadScores(dir.File("bad.tsv")), Error);
  }

  SUBCASE("non-finite value") {
    AtomicWriteFile(dir.File("inf.tsv"), "#space raw\nid\ten\tet\nu1\tinf\t0.9\n");
    CHECK_THROWS_AS(LoadScores(dir.File("inf.tsv")), Error);
  }

  SUBCASE("single-language log_posterior row of 0.0 is accepted") {
    AtomicWriteFile(dir.File("single.tsv"), "#space log_posterior\nid\ten\nu1\t0\n");
    ScoreTable t = LoadScores(dir.File("single.tsv"));
    CHECK(t.space == ScoreSpace::kLogPosterior);
    CHECK(t.rows[0].values[0] == 0.0);
  }

  SUBCASE("unnormalized log_posterior row is rejected") {
    AtomicWriteFile(dir.File("unnorm.tsv"),
                    "#space log_posterior\nid\ten\tet\nu1\t-0.1\t-0.1\n");
    CHECK_THROWS_AS(LoadScores(dir.File("unnorm.tsv")), Error);
  }
}

TEST_CASE("score and embedding files round trip bit-exactly") {
  TempDir dir("rt");
  std::mt19937_64 rng(93);
  ScoreTable table;
  table.space = ScoreSpace::kLogLikelihood;
  table.labels = LabelSet(std::vector<std::string>{"aa", "bb", "cc"});
  for (int i = 0; i < 20; ++i) {
    ScoreVector row;
    row.utterance_id = "u" + std::to_string(i);
    row.space = table.space;
    for (int j = 0; j < 3; ++j)
      row.values.push_back((testing::Uniform01(rng) - 0.5) * 1e6);
    table.rows.push_back(row);
  }
  SaveScores(table, dir.File("t.tsv"));
  ScoreTable loaded = LoadScores(dir.File("t.tsv"), table.labels);
  REQUIRE(loaded.rows.size() == table.rows.size());
  for (size_t i = 0; i < table.rows.size(); ++i)
    for (size_t j = 0; j < 3; ++j)
      CHECK(loaded.rows[i].values[j] == table.rows[i].values[j]);

  EmbeddingTable emb;
  emb.dim = 5;
  for (int i = 0; i < 10; ++i) {
    EmbeddingVector e;
    e.utterance_id = "e" + std::to_string(i);
    for (int j = 0; j < 5; ++j) e.values.push_back(testing::Gaussian(rng));
    emb.rows.push_back(e);
  }
  SaveEmbeddings(emb, dir.File("e.tsv"));
  EmbeddingTable eloaded = LoadEmbeddings(dir.File("e.tsv"));
  CHECK(eloaded.dim == 5);
  REQUIRE(eloaded.rows.size() == emb.rows.size());
  for (size_t i = 0; i < emb.rows.size(); ++i)
    CHECK(eloaded.rows[i].values == emb.rows[i].values);
}

TEST_CASE("SplitByGroup partitions exhaustively and disjointly") {
  SUBCASE("empty input") { CHECK(SplitByGroup({}).empty()); }

  SUBCASE("single group") {
    std::vector<Utterance> data(3);
    for (size_t i = 0; i < 3; ++i) {
      data[i].id = "u" + std::to_string(i);
      data[i].group = "native";
    }
    auto split = SplitByGroup(data);
    REQUIRE(split.size() == 1);
    CHECK(split.at("native").size() == 3);
  }

  SUBCASE("mixed groups plus ungrouped") {
    std::vector<Utterance> data(5);
    data[0].group = "native";
    data[1].group = "B1";
    data[2].group = "native";
    // data[3], data[4] ungrouped
    for (size_t i = 0; i < 5; ++i) data[i].id = "u" + std::to_string(i);
    auto split = SplitByGroup(data);
    REQUIRE(split.size() == 3);
    CHECK(split.at("native").size() == 2);
    CHECK(split.at("B1").size() == 1);
    CHECK(split.at(kUngrouped).size() == 2);

    size_t total = 0;
    for (const auto& [name, members] : split) total += members.size();
    CHECK(total == data.size());
  }
}
