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

#include "lidkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <doctest.h>

#include "lidkit/eval.hpp"
#include "lidkit/util.hpp"

using namespace lidkit;

namespace {

SynthCorpusConfig SmallConfig() {
  SynthCorpusConfig config;
  config.train_per_language = 20;
  config.test_per_language = 8;
  config.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("MakeSyntheticCorpus is deterministic and well-formed") {
  SynthCorpus a = MakeSyntheticCorpus(SmallConfig());
  SynthCorpus b = MakeSyntheticCorpus(SmallConfig());

  CHECK(a.labels.size() == 3);
  CHECK(a.train.size() == 60);
  CHECK(a.test.size() == 24);
  REQUIRE(a.train.size() == b.train.size());
  for (size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].id == b.train[i].id);
    CHECK(a.train[i].transcripts == b.train[i].transcripts);
  }
  for (const Utterance& utt : a.train) {
    CHECK(utt.transcripts.count("sysa") == 1);
    CHECK(utt.transcripts.count("sysb") == 1);
    CHECK(utt.label.has_value());
    CHECK(*utt.group == "native");
  }

  // Disjoint splits by construction.
  std::map<std::string, int> ids;
  for (const Utterance& utt : a.train) ++ids[utt.id];
  for (const Utterance& utt : a.test) ++ids[utt.id];
  for (const auto& [id, count] : ids) CHECK(count == 1);

  // The corpus is separable: NB on clean text is near-perfect.
  NGramProfile profile = NGramProfile::Train(a.train, "sysa");
  int correct = 0;
  for (const Utterance& utt : a.test)
    correct += profile.Classify(utt.Transcript("sysa")).code == *utt.label ? 1 : 0;
  CHECK(static_cast<double>(correct) / static_cast<double>(a.test.size()) > 0.9);
}

TEST_CASE("SimulateAcousticScores degrades with rho and stays normalized") {
  SynthCorpus corpus = MakeSyntheticCorpus(SmallConfig());
  SimulatedAcousticConfig config;
  config.seed = 3;

  auto accuracy_at = [&](double rho) {
    int correct = 0;
    for (const Utterance& utt : corpus.test) {
      ScoreVector s = SimulateAcousticScores(utt, corpus.labels, rho, config);
      CHECK(std::abs(LogSumExp(s.values)) < 1e-9);
      correct +=
          ArgmaxIndex(s) == corpus.labels.Require(*utt.label) ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(corpus.test.size());
  };

  double clean = accuracy_at(0.0);
  double noisy = accuracy_at(1.0);
  CHECK(clean > 0.85);
  CHECK(noisy < clean);

  SUBCASE("scores are reproducible") {
    ScoreVector s1 = SimulateAcousticScores(corpus.test[0], corpus.labels, 0.5, config);
    ScoreVector s2 = SimulateAcousticScores(corpus.test[0], corpus.labels, 0.5, config);
    CHECK(s1.values == s2.values);
  }

  SUBCASE("an unlabeled utterance is an error") {
    Utterance unlabeled = corpus.test[0];
    unlabeled.label.reset();
    CHECK_THROWS_AS(SimulateAcousticScores(unlabeled, corpus.labels, 0.2, config),
                    Error);
  }
}

TEST_CASE("DegradationExperiment validates its configuration") {
  SynthCorpus corpus = MakeSyntheticCorpus(SmallConfig());
  DegradationConfig config;
  config.asr_name = "sysa";
  config.seeds = {1};

  SUBCASE("fewer than 2 rho values") {
    config.rho_grid = {0.0};
    CHECK_THROWS_AS(DegradationExperiment(corpus.train, corpus.test, config), Error);
  }

  SUBCASE("unsorted grid") {
    config.rho_grid = {0.4, 0.1};
    CHECK_THROWS_AS(DegradationExperiment(corpus.train, corpus.test, config), Error);
  }

  SUBCASE("train/test overlap") {
    config.rho_grid = {0.0, 0.4};
    std::vector<Utterance> test = corpus.test;
    test.push_back(corpus.train[0]);
    CHECK_THROWS_AS(DegradationExperiment(corpus.train, test, config), Error);
  }

  SUBCASE("no seeds") {
    config.rho_grid = {0.0, 0.4};
    config.seeds.clear();
    CHECK_THROWS_AS(DegradationExperiment(corpus.train, corpus.test, config), Error);
  }
}

TEST_CASE("DegradationExperiment emits one row per cell and route") {
  SynthCorpus corpus = MakeSyntheticCorpus(SmallConfig());
  DegradationConfig config;
  config.asr_name = "sysa";
  config.rho_grid = {0.0, 0.5};
  config.seeds = {1, 2};
  auto rows = DegradationExperiment(corpus.train, corpus.test, config);
  CHECK(rows.size() == 2 * 2 * 3);

  SUBCASE("the rho = 0 cell equals clean accuracy exactly") {
    NGramProfile profile = NGramProfile::Train(corpus.train, "sysa");
    int correct = 0;
    for (const Utterance& utt : corpus.test)
      correct += profile.Classify(utt.Transcript("sysa")).code == *utt.label ? 1 : 0;
    double clean =
        static_cast<double>(correct) / static_cast<double>(corpus.test.size());
    for (const auto& row : rows)
      if (row.rho == 0.0 && row.route == "nb") CHECK(row.accuracy == clean);
  }

  SUBCASE("an all-zero grid yields constant accuracy per route and seed") {
    config.rho_grid = {0.0, 0.0, 0.0};
    auto flat = DegradationExperiment(corpus.train, corpus.test, config);
    std::map<std::pair<std::string, uint64_t>, std::vector<double>> by_route;
    for (const auto& row : flat)
      by_route[{row.route, row.seed}].push_back(row.accuracy);
    for (const auto& [key, values] : by_route) {
      REQUIRE(values.size() == 3);
      CHECK(values[0] == values[1]);
      CHECK(values[1] == values[2]);
    }
  }

  SUBCASE("CSV output has the documented shape") {
    std::string csv = DegradationCsv(rows);
    CHECK(csv.rfind("rho,seed,route,accuracy\n", 0) == 0);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == rows.size() + 1);
  }
}
