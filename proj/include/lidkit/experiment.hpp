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
//
// Desk-scale accent-degradation experiments: train the text route on clean
// data, corrupt the test transcripts at increasing strength rho, score three
// routes per cell (text NB, a simulated acoustic system, and their
// uniform-weight fusion) and tabulate accuracy per (rho, seed, route).

#ifndef LIDKIT_EXPERIMENT_HPP
#define LIDKIT_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lidkit/accent_sim.hpp"
#include "lidkit/corpus.hpp"
#include "lidkit/ngram_nb.hpp"
#include "lidkit/types.hpp"

namespace lidkit {

/// Stand-in for an acoustic-route scorer. Emits log-posteriors whose top-1
/// mass and error rate degrade linearly with rho; draws are derived from
/// (seed, utterance id) only, so two cells with equal rho agree exactly.
struct SimulatedAcousticConfig {
  double base_confidence = 0.85;  // top-1 posterior at rho = 0
  double confidence_slope = 0.35;
  double base_error = 0.05;  // P(top-1 wrong) at rho = 0
  double error_slope = 0.80;
  uint64_t seed = 0;
};

ScoreVector SimulateAcousticScores(const Utterance& utt, const LabelSet& labels,
                                   double rho, const SimulatedAcousticConfig& config);

struct DegradationConfig {
  std::vector<double> rho_grid;   // sorted ascending, >= 2 entries
  std::vector<uint64_t> seeds;    // one experiment replicate per seed
  std::string asr_name;           // transcript stream for the NB route
  NGramProfile::TrainOptions nb;  // NB training settings
  AccentNoiseConfig noise;        // rho and seed are overwritten per cell
  SimulatedAcousticConfig acoustic;  // seed is overwritten per cell
  /// When true, substitutions draw from the training corpus' global character
  /// unigram distribution instead of each utterance's own inventory.
  bool confusion_from_train = true;
};

struct DegradationRow {
  double rho = 0.0;
  uint64_t seed = 0;
  std::string route;  // "nb" | "acoustic" | "fused"
  double accuracy = 0.0;
};

/// Runs the full grid. Requires a sorted rho grid with >= 2 entries, at
/// least one seed, and disjoint train/test ids.
std::vector<DegradationRow> DegradationExperiment(const std::vector<Utterance>& train,
                                                  const std::vector<Utterance>& test,
                                                  const DegradationConfig& config);

/// CSV with header "rho,seed,route,accuracy".
std::string DegradationCsv(const std::vector<DegradationRow>& rows);
void SaveDegradationCsv(const std::vector<DegradationRow>& rows,
                        const std::string& path);

// ---------------------------------------------------------------------------
// Synthetic corpus

/// Generator settings for the bundled toy corpus: a few invented languages
/// with distinct character phonotactics, rendered by two fake ASR systems
/// ("sysa" passes text through, "sysb" merges some characters the way a
/// foreign recognizer would).
struct SynthCorpusConfig {
  int num_languages = 3;  // up to 3
  int train_per_language = 60;
  int test_per_language = 30;
  int min_words = 5;
  int max_words = 9;
  uint64_t seed = 7;
};

struct SynthCorpus {
  std::vector<Utterance> train;
  std::vector<Utterance> test;
  LabelSet labels;
};

SynthCorpus MakeSyntheticCorpus(const SynthCorpusConfig& config = {});

}  // namespace lidkit

#endif  // LIDKIT_EXPERIMENT_HPP
