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
// Character n-gram features over ASR transcripts and the multinomial Naive
// Bayes classifier built on them. Features are word-internal: each word is
// padded with one space on each side and n-grams never cross word boundaries.

#ifndef LIDKIT_NGRAM_NB_HPP
#define LIDKIT_NGRAM_NB_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lidkit/types.hpp"

namespace lidkit {

struct NGramFeatureConfig {
  /// n-gram order, in code points.
  int n = 4;
  /// Lowercase (ASCII + Latin-1) before extraction. Whitespace runs are
  /// always collapsed and edges stripped; CTC output keeps its punctuation.
  bool lowercase = true;
};

/// Lowercase + collapse whitespace runs + strip edges.
std::string NormalizeText(std::string_view text, const NGramFeatureConfig& config);

/// Emits all word-internal n-grams of the normalized text, with multiplicity.
/// A word whose padded form is shorter than n is emitted whole as a single
/// feature.
std::vector<std::string> ExtractNgrams(std::string_view text,
                                       const NGramFeatureConfig& config);

/// ExtractNgrams folded into a count map.
std::unordered_map<std::string, int64_t> CountNgrams(
    std::string_view text, const NGramFeatureConfig& config);

enum class PriorMode { kUniform, kEmpirical };

struct NbTrainOptions {
  NGramFeatureConfig features;
  double alpha = 0.95;
  PriorMode prior_mode = PriorMode::kUniform;
};

/// Per-language character n-gram counts plus the shared vocabulary: the
/// trained Naive Bayes model.
///
/// Scoring: per language L, the unnormalized score of a text with n-gram
/// multiplicities m(g) is
///   log prior(L) + sum_g m(g) * log((counts[L][g] + alpha) /
///                                   (totals[L] + alpha * |vocab|))
/// over the grams g that occur in the training vocabulary; unseen grams are
/// skipped so the event space stays identical across languages. The result is
/// normalized to log-posteriors.
class NGramProfile {
 public:
  using TrainOptions = NbTrainOptions;

  /// Trains on labeled utterances using transcripts under `asr_name`. When
  /// `labels` is empty it is derived from the data (codes sorted); when given,
  /// every declared language must occur in the data.
  static NGramProfile Train(const std::vector<Utterance>& data,
                            const std::string& asr_name,
                            const NbTrainOptions& options = NbTrainOptions(),
                            const LabelSet& labels = LabelSet());

  /// Log-posterior scores for a text. Empty text yields the priors.
  ScoreVector Score(std::string_view text) const;

  /// Argmax of Score; ties break to the lowest language index.
  LanguageId Classify(std::string_view text) const;

  const LabelSet& labels() const { return labels_; }
  const NGramFeatureConfig& config() const { return config_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& priors() const { return priors_; }
  const std::unordered_set<std::string>& vocab() const { return vocab_; }
  int64_t total(int language) const { return totals_[static_cast<size_t>(language)]; }
  int64_t count(int language, const std::string& gram) const;

  void Save(const std::string& path) const;
  static NGramProfile Load(const std::string& path);

  /// Checks internal consistency (totals match counts, vocabulary is the
  /// union of positive-count grams, priors normalized). Throws on violation.
  void CheckInvariants() const;

 private:
  NGramFeatureConfig config_;
  double alpha_ = 0.95;
  LabelSet labels_;
  std::vector<double> priors_;
  std::vector<std::unordered_map<std::string, int64_t>> counts_;
  std::vector<int64_t> totals_;
  std::unordered_set<std::string> vocab_;
};

}  // namespace lidkit

#endif  // LIDKIT_NGRAM_NB_HPP
