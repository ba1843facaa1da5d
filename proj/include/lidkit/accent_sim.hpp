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
// Synthetic accent noise: seeded character-level substitutions, deletions
// and insertions applied to transcripts, with a strength knob rho. Stands in
// for the transcription error patterns of accented speech at desk scale.

#ifndef LIDKIT_ACCENT_SIM_HPP
#define LIDKIT_ACCENT_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lidkit/types.hpp"

namespace lidkit {

/// A categorical distribution over code points, e.g. another language's
/// character unigram distribution.
struct CharDistribution {
  std::vector<uint32_t> chars;
  std::vector<double> weights;  // nonnegative, not necessarily normalized

  bool empty() const { return chars.empty(); }
  /// Cumulative weights for sampling; built lazily by the simulator.
};

/// Character unigram distribution of the transcripts under `asr_name`,
/// whitespace excluded.
CharDistribution UnigramDistribution(const std::vector<Utterance>& data,
                                     const std::string& asr_name);

struct AccentNoiseConfig {
  /// Accent strength in [0, 1]; scales all three edit rates.
  double rho = 0.0;
  double sub_rate = 0.5;
  double del_rate = 0.15;
  double ins_rate = 0.15;
  /// Where substituted/inserted characters come from; when empty, uniform
  /// over the distinct non-space characters of the transcript itself.
  CharDistribution confusion_source;
  uint64_t seed = 0;
};

/// Group label recording the corruption stratum, e.g. "rho=0.30".
std::string RhoGroupLabel(double rho);

/// Applies seeded character edits to every transcript of the utterance.
/// Whitespace is left intact so word structure survives. The id and label
/// are preserved; the group is set to RhoGroupLabel(rho). Randomness is
/// derived from (seed, utterance id), so corpus-level application is
/// order-independent, and the per-position draws do not depend on rho: the
/// edit set grows monotonically with rho for a fixed seed.
Utterance SimulateAccent(const Utterance& utt, const AccentNoiseConfig& config);

std::vector<Utterance> SimulateAccentAll(const std::vector<Utterance>& data,
                                         const AccentNoiseConfig& config);

/// Per-utterance edit counts, for reporting.
struct EditStats {
  std::string utterance_id;
  int64_t chars = 0;
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
};

Utterance SimulateAccent(const Utterance& utt, const AccentNoiseConfig& config,
                         EditStats* stats);

}  // namespace lidkit

#endif  // LIDKIT_ACCENT_SIM_HPP
