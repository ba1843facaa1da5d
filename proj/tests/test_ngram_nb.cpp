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

#include "lidkit/ngram_nb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <doctest.h>

#include "lidkit/util.hpp"
#include "nb_oracle.hpp"
#include "test_helpers.hpp"

using namespace lidkit;

namespace {

Utterance MakeUtt(const std::string& id, const std::string& text,
                  const std::string& label, const std::string& asr = "en") {
  Utterance utt;
  utt.id = id;
  utt.transcripts[asr] = text;
  utt.label = label;
  return utt;
}

std::multiset<std::string> GramSet(const std::string& text, int n = 4) {
  NGramFeatureConfig cfg;
  cfg.n = n;
  auto grams = ExtractNgrams(text, cfg);
  return {grams.begin(), grams.end()};
}

/// The two-language example corpus used throughout: A:"aa bb", B:"cc dd".
NGramProfile TwoLanguageProfile() {
  return NGramProfile::Train(
      {MakeUtt("u1", "aa bb", "A"), MakeUtt("u2", "cc dd", "B")}, "en");
}

}  // namespace

TEST_CASE("ExtractNgrams on the examples") {
  CHECK(GramSet("there") ==
        std::multiset<std::string>{" the", "ther", "here", "ere "});
  CHECK(GramSet("").empty());
  CHECK(GramSet("a a") == std::multiset<std::string>{" a ", " a "});
  // normalization: case and whitespace runs
  CHECK(GramSet(" THERE\t ") == GramSet("there"));
}

TEST_CASE("ExtractNgrams works per code point, not per byte") {
  // Two-letter word with a two-byte letter: padded length 4 in code points.
  auto grams = GramSet("\xC3\xB5h");
  REQUIRE(grams.size() == 1);
  CHECK(*grams.begin() == " \xC3\xB5h ");
}

TEST_CASE("ExtractNgrams multiset size property") {
  std::mt19937_64 rng(4);
  NGramFeatureConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    int w = 1 + static_cast<int>(rng() % 12);
    std::string word;
    for (int i = 0; i < w; ++i)
      word.push_back(static_cast<char>('a' + rng() % 26));
    auto grams = ExtractNgrams(word, cfg);
    if (w >= cfg.n - 2)
      CHECK(static_cast<int>(grams.size()) == w + 3 - cfg.n);
    else
      CHECK(grams.size() == 1);
  }
}

TEST_CASE("Train accumulates counts per language") {
  NGramProfile profile = TwoLanguageProfile();
  CHECK(profile.labels().codes() == std::vector<std::string>{"A", "B"});
  CHECK(profile.vocab() ==
        std::unordered_set<std::string>{" aa ", " bb ", " cc ", " dd "});
  CHECK(profile.count(0, " aa ") == 1);
  CHECK(profile.count(0, " cc ") == 0);
  CHECK(profile.total(0) == 2);
  CHECK(profile.total(1) == 2);
  CHECK(profile.priors() == std::vector<double>{0.5, 0.5});
  profile.CheckInvariants();
}

TEST_CASE("Train error paths") {
  CHECK_THROWS_AS(NGramProfile::Train({}, "en"), Error);

  SUBCASE("missing transcript names the utterance") {
    auto data = std::vector<Utterance>{MakeUtt("u7", "aa", "A", "other")};
    try {
      NGramProfile::Train(data, "en");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("u7") != std::string::npos);
    }
  }

  SUBCASE("unlabeled utterance is rejected") {
    Utterance utt = MakeUtt("u8", "aa", "A");
    utt.label.reset();
    CHECK_THROWS_AS(NGramProfile::Train({utt}, "en"), Error);
  }

  SUBCASE("declared language with no data is rejected") {
    LabelSet labels(std::vector<std::string>{"A", "B"});
    CHECK_THROWS_AS(
        NGramProfile::Train({MakeUtt("u1", "aa", "A")}, "en", {}, labels), Error);
  }

  SUBCASE("one language only gives prior 1.0") {
    NGramProfile profile = NGramProfile::Train({MakeUtt("u1", "aa", "A")}, "en");
    CHECK(profile.priors() == std::vector<double>{1.0});
  }
}

TEST_CASE("Score reproduces the hand-computed example") {
  NGramProfile profile = TwoLanguageProfile();
  ScoreVector s = profile.Score("aa");
  // P(" aa "|A) = (1+0.95)/(2+0.95*4), P(" aa "|B) = 0.95/(2+0.95*4); uniform
  // priors cancel, so posterior(A) = 1.95/(1.95+0.95).
  const double expected_a = 1.95 / 2.9;
  CHECK(std::exp(s.values[0]) == doctest::Approx(expected_a).epsilon(1e-12));
  CHECK(std::exp(s.values[1]) == doctest::Approx(1.0 - expected_a).epsilon(1e-12));
  CHECK(s.space == ScoreSpace::kLogPosterior);
  CHECK(profile.Classify("aa").code == "A");
}

TEST_CASE("Score of empty text returns the priors") {
  NGramProfile profile = TwoLanguageProfile();
  ScoreVector s = profile.Score("");
  CHECK(std::exp(s.values[0]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(s.values[1]) == doctest::Approx(0.5).epsilon(1e-12));
  // Tie-break: identical posteriors pick index 0.
  CHECK(profile.Classify("").index == 0);
}

TEST_CASE("Small alpha sends matching text to its own language") {
  NbTrainOptions options;
  options.alpha = 1e-6;
  NGramProfile profile = NGramProfile::Train(
      {MakeUtt("u1", "aa bb", "A"), MakeUtt("u2", "cc dd", "B")}, "en", options);
  CHECK(profile.Classify("aa bb aa").code == "A");
  CHECK(profile.Classify("dd cc").code == "B");
}

TEST_CASE("Posteriors converge to uniform as alpha grows") {
  NbTrainOptions options;
  options.alpha = 1e9;
  NGramProfile profile = NGramProfile::Train(
      {MakeUtt("u1", "aa bb", "A"), MakeUtt("u2", "cc dd", "B")}, "en", options);
  ScoreVector s = profile.Score("aa bb cc");
  CHECK(std::exp(s.values[0]) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::exp(s.values[1]) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("Score vectors normalize for arbitrary inputs") {
  NGramProfile profile = TwoLanguageProfile();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (int w = 0; w < static_cast<int>(rng() % 6); ++w) {
      if (w) text += ' ';
      for (int c = 0; c < 1 + static_cast<int>(rng() % 5); ++c)
        text.push_back(static_cast<char>('a' + rng() % 4));
    }
    ScoreVector s = profile.Score(text);
    CHECK(std::abs(LogSumExp(s.values)) < 1e-9);
  }
}

TEST_CASE("Permuting the label set permutes scores identically") {
  auto data = std::vector<Utterance>{MakeUtt("u1", "aa bb", "A"),
                                     MakeUtt("u2", "cc dd", "B"),
                                     MakeUtt("u3", "ee ff", "C")};
  LabelSet forward(std::vector<std::string>{"A", "B", "C"});
  LabelSet permuted(std::vector<std::string>{"C", "A", "B"});
  NGramProfile p1 = NGramProfile::Train(data, "en", {}, forward);
  NGramProfile p2 = NGramProfile::Train(data, "en", {}, permuted);
  for (const std::string& text : {"aa", "cc ee", "ff bb aa", ""}) {
    ScoreVector s1 = p1.Score(text);
    ScoreVector s2 = p2.Score(text);
    for (int l = 0; l < forward.size(); ++l) {
      int j = permuted.Require(forward.code(l));
      CHECK(s1.values[static_cast<size_t>(l)] ==
            doctest::Approx(s2.values[static_cast<size_t>(j)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("Implementation matches the brute-force oracle on random corpora") {
  std::mt19937_64 rng(23);
  const std::vector<std::string> languages = {"l0", "l1", "l2", "l3", "l4"};
  for (int trial = 0; trial < 10; ++trial) {
    testing::OracleCorpus oracle_corpus;
    std::vector<Utterance> data;
    int utt_count = 5 + static_cast<int>(rng() % 45);
    for (int i = 0; i < utt_count; ++i) {
      const std::string& lang = languages[i < 5 ? static_cast<size_t>(i)
                                                : static_cast<size_t>(rng() % 5)];
      std::string text;
      int words = 1 + static_cast<int>(rng() % 8);
      for (int w = 0; w < words; ++w) {
        if (w) text += ' ';
        int len = 1 + static_cast<int>(rng() % 7);
        for (int c = 0; c < len; ++c)
          text.push_back(static_cast<char>('a' + rng() % 6));
      }
      oracle_corpus.texts[lang].push_back(text);
      data.push_back(MakeUtt("u" + std::to_string(i), text, lang));
    }

    NGramProfile profile = NGramProfile::Train(data, "en");
    testing::OracleModel oracle = testing::OracleTrain(oracle_corpus, 4, 0.95);

    // Counts agree exactly.
    for (const auto& [lang, grams] : oracle.counts) {
      int index = profile.labels().Require(lang);
      int64_t total = 0;
      for (const auto& [gram, count] : grams) {
        CHECK(profile.count(index, gram) == count);
        total += count;
      }
      CHECK(profile.total(index) == total);
    }
    CHECK(profile.vocab().size() == oracle.vocab.size());

    // Log-posteriors agree within 1e-10.
    for (int probe = 0; probe < 5; ++probe) {
      std::string text;
      for (int w = 0; w < 1 + static_cast<int>(rng() % 5); ++w) {
        if (w) text += ' ';
        for (int c = 0; c < 1 + static_cast<int>(rng() % 7); ++c)
          text.push_back(static_cast<char>('a' + rng() % 7));
      }
      std::vector<double> expected = testing::OracleScore(oracle, text);
      ScoreVector got = profile.Score(text);
      REQUIRE(got.values.size() == expected.size());
      for (size_t l = 0; l < expected.size(); ++l)
        CHECK(got.values[l] == doctest::Approx(expected[l]).epsilon(1e-10));
    }
  }
}

TEST_CASE("Profile serialization round trip is exact") {
  lidkit::testing::TempDir dir("profile");
  NbTrainOptions options;
  options.alpha = 0.95;
  options.prior_mode = PriorMode::kEmpirical;
  NGramProfile profile = NGramProfile::Train(
      {MakeUtt("u1", "aa bb \xC3\xB5nn", "A"), MakeUtt("u2", "cc dd", "B"),
       MakeUtt("u3", "aa cc", "A")},
      "en", options);
  profile.Save(dir.File("p.txt"));
  NGramProfile loaded = NGramProfile::Load(dir.File("p.txt"));
  loaded.CheckInvariants();

  CHECK(loaded.alpha() == profile.alpha());
  CHECK(loaded.labels() == profile.labels());
  CHECK(loaded.priors() == profile.priors());
  CHECK(loaded.vocab() == profile.vocab());
  for (const std::string& text : {"aa", "cc dd", "\xC3\xB5nn", ""}) {
    ScoreVector a = profile.Score(text);
    ScoreVector b = loaded.Score(text);
    for (size_t l = 0; l < a.values.size(); ++l)
      CHECK(a.values[l] == doctest::Approx(b.values[l]).epsilon(1e-10));
  }

  // Saving the loaded profile reproduces the file byte for byte.
  loaded.Save(dir.File("p2.txt"));
  CHECK(ReadFileOrThrow(dir.File("p.txt")) == ReadFileOrThrow(dir.File("p2.txt")));
}
