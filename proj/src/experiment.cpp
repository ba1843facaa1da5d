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
#include <random>
#include <set>
#include <unordered_set>

#include "lidkit/eval.hpp"
#include "lidkit/fusion.hpp"
#include "lidkit/util.hpp"

namespace lidkit {

namespace {

double NextUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScoreVector SimulateAcousticScores(const Utterance& utt, const LabelSet& labels,
                                   double rho, const SimulatedAcousticConfig& config) {
  if (!utt.label)
    throw Error("utterance '" + utt.id + "' has no label; the simulated acoustic "
                "route needs the truth to degrade from");
  const int k = labels.size();
  const int truth = labels.Require(*utt.label);

  ScoreVector out;
  out.utterance_id = utt.id;
  out.space = ScoreSpace::kLogPosterior;
  if (k == 1) {
    out.values = {0.0};
    return out;
  }

  // Two draws per utterance, independent of rho: comparing the same draw
  // against a rho-scaled threshold makes the error set grow monotonically
  // with rho for a fixed seed.
  std::mt19937_64 rng(DeriveSeed(config.seed, "acoustic", utt.id));
  const double u_wrong = NextUniform(rng);
  const double u_choice = NextUniform(rng);

  const double error_rate = std::clamp(
      config.base_error + config.error_slope * rho, 0.0, 0.97);
  const double floor_conf = 1.0 / static_cast<double>(k) + 0.01;
  const double confidence =
      std::clamp(config.base_confidence - config.confidence_slope * rho,
                 std::min(floor_conf, 0.98), 0.999);

  int top = truth;
  if (u_wrong < error_rate) {
    int pick = std::min(static_cast<int>(u_choice * (k - 1)), k - 2);
    top = pick >= truth ? pick + 1 : pick;
  }

  const double rest = (1.0 - confidence) / static_cast<double>(k - 1);
  out.values.assign(static_cast<size_t>(k), std::log(rest));
  out.values[static_cast<size_t>(top)] = std::log(confidence);
  return out;
}

std::vector<DegradationRow> DegradationExperiment(const std::vector<Utterance>& train,
                                                  const std::vector<Utterance>& test,
                                                  const DegradationConfig& config) {
  if (config.rho_grid.size() < 2)
    throw Error("degradation experiment needs at least 2 rho values");
  if (!std::is_sorted(config.rho_grid.begin(), config.rho_grid.end()))
    throw Error("rho grid must be sorted ascending");
  if (config.seeds.empty()) throw Error("degradation experiment needs at least one seed");
  if (train.empty() || test.empty())
    throw Error("degradation experiment needs nonempty train and test sets");

  std::unordered_set<std::string> train_ids;
  for (const Utterance& utt : train) train_ids.insert(utt.id);
  for (const Utterance& utt : test)
    if (train_ids.contains(utt.id))
      throw Error("train and test sets overlap on utterance '" + utt.id + "'");

  NGramProfile profile = NGramProfile::Train(train, config.asr_name, config.nb);
  const LabelSet& labels = profile.labels();

  std::vector<int> truth_index;
  truth_index.reserve(test.size());
  for (const Utterance& utt : test) {
    if (!utt.label) throw Error("test utterance '" + utt.id + "' has no label");
    truth_index.push_back(labels.Require(*utt.label));
  }

  CharDistribution confusion = config.confusion_from_train
                                   ? UnigramDistribution(train, config.asr_name)
                                   : config.noise.confusion_source;

  std::vector<DegradationRow> rows;
  for (double rho : config.rho_grid) {
    for (uint64_t seed : config.seeds) {
      AccentNoiseConfig noise = config.noise;
      noise.rho = rho;
      noise.seed = seed;
      noise.confusion_source = confusion;

      SimulatedAcousticConfig acoustic = config.acoustic;
      acoustic.seed = seed;

      int64_t nb_correct = 0, ac_correct = 0, fused_correct = 0;
      FusionConfig uniform = FusionConfig::Uniform(2);
      for (size_t i = 0; i < test.size(); ++i) {
        Utterance corrupted = SimulateAccent(test[i], noise);
        ScoreVector nb = profile.Score(corrupted.Transcript(config.asr_name));
        nb.utterance_id = test[i].id;
        ScoreVector ac = SimulateAcousticScores(test[i], labels, rho, acoustic);
        ScoreVector fused = FuseRoutes(ac, nb, uniform);

        const int truth = truth_index[i];
        nb_correct += ArgmaxIndex(nb) == truth ? 1 : 0;
        ac_correct += ArgmaxIndex(ac) == truth ? 1 : 0;
        fused_correct += ArgmaxIndex(fused) == truth ? 1 : 0;
      }
      const double n = static_cast<double>(test.size());
      rows.push_back({rho, seed, "nb", static_cast<double>(nb_correct) / n});
      rows.push_back({rho, seed, "acoustic", static_cast<double>(ac_correct) / n});
      rows.push_back({rho, seed, "fused", static_cast<double>(fused_correct) / n});
    }
  }
  return rows;
}

std::string DegradationCsv(const std::vector<DegradationRow>& rows) {
  std::string out = "rho,seed,route,accuracy\n";
  for (const DegradationRow& row : rows) {
    out += FormatFloat(row.rho);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += row.route;
    out += ',';
    out += FormatFloat(row.accuracy);
    out += '\n';
  }
  return out;
}

void SaveDegradationCsv(const std::vector<DegradationRow>& rows,
                        const std::string& path) {
  AtomicWriteFile(path, DegradationCsv(rows));
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

struct SynthLanguage {
  const char* code;
  std::vector<const char*> syllables;
};

// Invented phonotactics; inventories overlap enough that character noise
// genuinely confuses the languages, while clean text separates cleanly.
const std::vector<SynthLanguage>& SynthLanguages() {
  static const std::vector<SynthLanguage> kLanguages = {
      {"brel",
       {"bre", "sta", "kli", "dro", "vel", "gra", "ni", "ost", "ler", "tum", "ska",
        "pren"}},
      {"taro",
       {"ta", "ro", "mi", "ka", "su", "ne", "ri", "yo", "ha", "ku", "sa", "to"}},
      {"ulvo",
       {"õl", "uu", "vä", "tõ", "le", "sö", "aa", "mü",
        "ker", "jõ", "nna", "ti"}},
  };
  return kLanguages;
}

// Fixed channel map for the second fake ASR system: a recognizer with a
// smaller symbol inventory that merges voiced/unvoiced pairs and strips
// diacritics.
uint32_t SysbChannelMap(uint32_t cp) {
  switch (cp) {
    case 0xF5: return 'o';  // o with tilde
    case 0xE4: return 'a';  // a with diaeresis
    case 0xF6: return 'o';  // o with diaeresis
    case 0xFC: return 'u';  // u with diaeresis
    case 'b': return 'p';
    case 'd': return 't';
    case 'g': return 'k';
    case 'v': return 'f';
    case 'y': return 'i';
    default: return cp;
  }
}

std::string ApplySysbChannel(const std::string& text) {
  std::vector<uint32_t> cps = DecodeUtf8(text);
  for (uint32_t& cp : cps) cp = SysbChannelMap(cp);
  return EncodeUtf8(cps);
}

Utterance MakeSynthUtterance(const SynthLanguage& lang, const std::string& id,
                             const SynthCorpusConfig& config, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int span = config.max_words - config.min_words + 1;
  const int num_words =
      config.min_words + static_cast<int>(NextUniform(rng) * span);
  std::string text;
  for (int w = 0; w < num_words; ++w) {
    if (w) text += ' ';
    const int num_syllables = 1 + static_cast<int>(NextUniform(rng) * 3.0);
    for (int s = 0; s < num_syllables; ++s)
      text += lang.syllables[static_cast<size_t>(
          NextUniform(rng) * static_cast<double>(lang.syllables.size()))];
  }
  Utterance utt;
  utt.id = id;
  utt.label = lang.code;
  utt.group = "native";
  utt.duration_sec = 0.4 * num_words;
  utt.transcripts["sysa"] = text;
  utt.transcripts["sysb"] = ApplySysbChannel(text);
  return utt;
}

}  // namespace

SynthCorpus MakeSyntheticCorpus(const SynthCorpusConfig& config) {
  const auto& languages = SynthLanguages();
  if (config.num_languages < 2 ||
      config.num_languages > static_cast<int>(languages.size()))
    throw Error("synthetic corpus supports 2.." + std::to_string(languages.size()) +
                " languages");
  if (config.train_per_language < 1 || config.test_per_language < 1)
    throw Error("synthetic corpus needs at least one utterance per split");
  if (config.min_words < 1 || config.max_words < config.min_words)
    throw Error("bad word count range for the synthetic corpus");

  SynthCorpus corpus;
  std::vector<std::string> codes;
  for (int l = 0; l < config.num_languages; ++l) {
    const SynthLanguage& lang = languages[static_cast<size_t>(l)];
    codes.push_back(lang.code);
    for (int i = 0; i < config.train_per_language; ++i) {
      std::string id = std::string(lang.code) + "-train-" + std::to_string(i);
      corpus.train.push_back(MakeSynthUtterance(
          lang, id, config, DeriveSeed(config.seed, "synth", id)));
    }
    for (int i = 0; i < config.test_per_language; ++i) {
      std::string id = std::string(lang.code) + "-test-" + std::to_string(i);
      corpus.test.push_back(MakeSynthUtterance(
          lang, id, config, DeriveSeed(config.seed, "synth", id)));
    }
  }
  std::sort(codes.begin(), codes.end());
  corpus.labels = LabelSet(std::move(codes));
  return corpus;
}

}  // namespace lidkit
