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
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "lidkit/util.hpp"

namespace lidkit {

namespace {

bool IsSpaceCp(uint32_t cp) {
  return cp <= 0x7F && std::isspace(static_cast<int>(cp)) != 0;
}

double NextUniform(std::mt19937_64& rng) {
  // 53-bit mantissa in [0, 1); bit-stable across platforms.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class CharSampler {
 public:
  explicit CharSampler(const CharDistribution& dist) {
    if (dist.chars.size() != dist.weights.size())
      throw Error("character distribution chars/weights size mismatch");
    double total = 0.0;
    for (size_t i = 0; i < dist.chars.size(); ++i) {
      if (dist.weights[i] < 0.0)
        throw Error("character distribution weights must be nonnegative");
      if (dist.weights[i] == 0.0) continue;
      total += dist.weights[i];
      chars_.push_back(dist.chars[i]);
      cumulative_.push_back(total);
    }
    total_ = total;
  }

  /// Uniform fallback over a character set.
  explicit CharSampler(const std::set<uint32_t>& chars) {
    double total = 0.0;
    for (uint32_t cp : chars) {
      total += 1.0;
      chars_.push_back(cp);
      cumulative_.push_back(total);
    }
    total_ = total;
  }

  bool empty() const { return chars_.empty(); }

  uint32_t Sample(double u) const {
    double target = u * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    size_t idx = std::min(static_cast<size_t>(it - cumulative_.begin()),
                          chars_.size() - 1);
    return chars_[idx];
  }

 private:
  std::vector<uint32_t> chars_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace

CharDistribution UnigramDistribution(const std::vector<Utterance>& data,
                                     const std::string& asr_name) {
  std::map<uint32_t, double> counts;
  for (const Utterance& utt : data) {
    auto it = utt.transcripts.find(asr_name);
    if (it == utt.transcripts.end()) continue;
    for (uint32_t cp : DecodeUtf8(it->second))
      if (!IsSpaceCp(cp)) counts[cp] += 1.0;
  }
  CharDistribution dist;
  for (const auto& [cp, c] : counts) {
    dist.chars.push_back(cp);
    dist.weights.push_back(c);
  }
  return dist;
}

std::string RhoGroupLabel(double rho) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rho=%.2f", rho);
  return buf;
}

Utterance SimulateAccent(const Utterance& utt, const AccentNoiseConfig& config,
                         EditStats* stats) {
  if (config.rho < 0.0 || config.rho > 1.0)
    throw Error("accent strength rho must lie in [0, 1]");
  double p_sub = std::clamp(config.rho * config.sub_rate, 0.0, 1.0);
  double p_del = std::clamp(config.rho * config.del_rate, 0.0, 1.0);
  double p_ins = std::clamp(config.rho * config.ins_rate, 0.0, 1.0);
  if (p_sub + p_del > 1.0) {
    double scale = 1.0 / (p_sub + p_del);
    p_sub *= scale;
    p_del *= scale;
  }

  if (stats) *stats = EditStats{utt.id, 0, 0, 0, 0};

  Utterance out = utt;
  out.group = RhoGroupLabel(config.rho);

  std::mt19937_64 rng(DeriveSeed(config.seed, "accent", utt.id));
  for (auto& [asr_name, text] : out.transcripts) {
    std::vector<uint32_t> cps = DecodeUtf8(text);

    CharSampler sampler = [&]() {
      if (!config.confusion_source.empty()) return CharSampler(config.confusion_source);
      std::set<uint32_t> inventory;
      for (uint32_t cp : cps)
        if (!IsSpaceCp(cp)) inventory.insert(cp);
      return CharSampler(inventory);
    }();

    std::vector<uint32_t> edited;
    edited.reserve(cps.size() + cps.size() / 4);
    for (uint32_t cp : cps) {
      if (IsSpaceCp(cp)) {
        // Whitespace is immutable: edits stay word-internal and consume no
        // randomness, so streams align across configurations.
        edited.push_back(cp);
        continue;
      }
      if (stats) ++stats->chars;
      // Fixed number of draws per character, so the same seed yields nested
      // edit sets as rho grows.
      double u_edit = NextUniform(rng);
      double u_sub_char = NextUniform(rng);
      double u_ins = NextUniform(rng);
      double u_ins_char = NextUniform(rng);

      if (u_edit < p_del) {
        if (stats) ++stats->deletions;
      } else if (u_edit < p_del + p_sub && !sampler.empty()) {
        edited.push_back(sampler.Sample(u_sub_char));
        if (stats) ++stats->substitutions;
      } else {
        edited.push_back(cp);
      }
      if (u_ins < p_ins && !sampler.empty()) {
        edited.push_back(sampler.Sample(u_ins_char));
        if (stats) ++stats->insertions;
      }
    }
    text = EncodeUtf8(edited);
  }
  return out;
}

Utterance SimulateAccent(const Utterance& utt, const AccentNoiseConfig& config) {
  return SimulateAccent(utt, config, nullptr);
}

std::vector<Utterance> SimulateAccentAll(const std::vector<Utterance>& data,
                                         const AccentNoiseConfig& config) {
  std::vector<Utterance> out;
  out.reserve(data.size());
  for (const Utterance& utt : data) out.push_back(SimulateAccent(utt, config));
  return out;
}

}  // namespace lidkit
