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

#ifndef LIDKIT_EVAL_HPP
#define LIDKIT_EVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lidkit/corpus.hpp"
#include "lidkit/types.hpp"

namespace lidkit {

struct EvalReport {
  LabelSet labels;
  double overall_accuracy = 0.0;
  int64_t n_total = 0;

  struct GroupStat {
    int64_t n = 0;
    double accuracy = 0.0;
  };
  std::map<std::string, GroupStat> per_group;

  /// confusion[truth][predicted]; row sums are per-label truth counts and
  /// trace / n_total is the overall accuracy.
  std::vector<std::vector<int64_t>> confusion;

  std::string ToText() const;
  std::string ToJson() const;
};

/// Exact counting of (utterance_id, predicted index) pairs against labeled
/// truth. Every prediction must name a labeled utterance; empty predictions
/// are an error.
EvalReport Evaluate(const std::vector<std::pair<std::string, int>>& predictions,
                    const std::vector<Utterance>& truth, const LabelSet& labels);

/// Argmax per row (ties to the lowest index), then Evaluate.
EvalReport EvaluateScores(const ScoreTable& scores, const std::vector<Utterance>& truth);

/// ((1 - baseline) - (1 - improved)) / (1 - baseline): the fraction of the
/// baseline's errors removed. baseline_acc must be < 1.
double RelativeErrorReduction(double baseline_acc, double improved_acc);

/// Argmax of one score row, ties to the lowest index.
int ArgmaxIndex(const ScoreVector& row);

}  // namespace lidkit

#endif  // LIDKIT_EVAL_HPP
