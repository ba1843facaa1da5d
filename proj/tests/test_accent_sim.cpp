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

#include "lidkit/accent_sim.hpp"

#include <algorithm>

#include <doctest.h>

#include "lidkit/util.hpp"

using namespace lidkit;

namespace {

Utterance TextUtterance(const std::string& id, const std::string& text) {
  Utterance utt;
  utt.id = id;
  utt.transcripts["en"] = text;
  utt.label = "x";
  return utt;
}

}  // namespace

TEST_CASE("rho = 0 leaves transcripts unchanged") {
  Utterance utt = TextUtterance("u1", "tere tulemast koju");
  AccentNoiseConfig config;
  config.rho = 0.0;
  config.seed = 42;
  EditStats stats;
  Utterance out = SimulateAccent(utt, config, &stats);
  CHECK(out.Transcript("en") == utt.Transcript("en"));
  CHECK(out.id == utt.id);
  CHECK(out.label == utt.label);
  CHECK(*out.group == "rho=0.00");
  CHECK(stats.substitutions == 0);
  CHECK(stats.deletions == 0);
  CHECK(stats.insertions == 0);
}

TEST_CASE("the same seed reproduces the same corruption") {
  Utterance utt = TextUtterance("u1", "the quick brown fox jumps over the dog");
  AccentNoiseConfig config;
  config.rho = 0.7;
  config.seed = 99;
  Utterance a = SimulateAccent(utt, config);
  Utterance b = SimulateAccent(utt, config);
  CHECK(a.Transcript("en") == b.Transcript("en"));

  config.seed = 100;
  Utterance c = SimulateAccent(utt, config);
  CHECK(a.Transcript("en") != c.Transcript("en"));
}

TEST_CASE("full substitution from a foreign distribution rewrites the text") {
  // 1000-character text of 'a'; the confusion distribution spreads mass over
  // eight characters, so the chance a draw equals the original is 1/8.
  std::string text;
  for (int i = 0; i < 1000; ++i) text.push_back('a');
  Utterance utt = TextUtterance("u1", text);

  AccentNoiseConfig config;
  config.rho = 1.0;
  config.sub_rate = 1.0;
  config.del_rate = 0.0;
  config.ins_rate = 0.0;
  config.seed = 7;
  config.confusion_source.chars = {'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'};
  config.confusion_source.weights.assign(8, 1.0);

  Utterance out = SimulateAccent(utt, config);
  const std::string& corrupted = out.Transcript("en");
  REQUIRE(corrupted.size() == 1000);
  int same = 0;
  for (char c : corrupted) same += (c == 'a') ? 1 : 0;
  // Expectation 125; < 0.2 with huge margin.
  CHECK(static_cast<double>(same) / 1000.0 < 0.2);
}

TEST_CASE("whitespace is preserved and words never merge") {
  Utterance utt = TextUtterance("u1", "aaa bbb ccc ddd eee");
  AccentNoiseConfig config;
  config.rho = 1.0;
  config.sub_rate = 0.9;
  config.del_rate = 0.0;
  config.ins_rate = 0.5;
  config.seed = 3;
  Utterance out = SimulateAccent(utt, config);
  const std::string& corrupted = out.Transcript("en");
  CHECK(std::count(corrupted.begin(), corrupted.end(), ' ') == 4);
}

TEST_CASE("edits grow monotonically with rho for a fixed seed") {
  Utterance utt = TextUtterance(
      "u1", "kui pikk on see tekst siis seda rohkem muutusi siia mahub");
  AccentNoiseConfig low, high;
  low.rho = 0.2;
  high.rho = 0.8;
  low.seed = high.seed = 17;
  EditStats stats_low, stats_high;
  SimulateAccent(utt, low, &stats_low);
  SimulateAccent(utt, high, &stats_high);
  CHECK(stats_high.substitutions + stats_high.deletions >=
        stats_low.substitutions + stats_low.deletions);
  CHECK(stats_high.insertions >= stats_low.insertions);
}

TEST_CASE("UnigramDistribution counts non-space characters") {
  std::vector<Utterance> data = {TextUtterance("u1", "ab ba"),
                                 TextUtterance("u2", "bbb")};
  CharDistribution dist = UnigramDistribution(data, "en");
  REQUIRE(dist.chars.size() == 2);
  CHECK(dist.chars[0] == 'a');
  CHECK(dist.chars[1] == 'b');
  CHECK(dist.weights[0] == 2.0);
  CHECK(dist.weights[1] == 5.0);
}

TEST_CASE("rho outside [0, 1] is rejected") {
  Utterance utt = TextUtterance("u1", "abc");
  AccentNoiseConfig config;
  config.rho = 1.5;
  CHECK_THROWS_AS(SimulateAccent(utt, config), Error);
}
