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
// Score fusion across systems. The default rule is linear interpolation of
// the posterior distributions (a weighted mixture in probability space); a
// log-domain variant (product of experts) is available for ablation.

#ifndef LIDKIT_FUSION_HPP
#define LIDKIT_FUSION_HPP

#include <vector>

#include "lidkit/corpus.hpp"
#include "lidkit/types.hpp"

namespace lidkit {

struct FusionConfig {
  /// One weight per input system; nonnegative, summing to 1 within 1e-12.
  std::vector<double> weights;
  /// Renormalize the output to exact log-posteriors.
  bool normalize = true;
  /// Interpolate log scores instead of probabilities.
  bool log_domain = false;

  static FusionConfig Uniform(size_t num_systems);
};

/// Weighted interpolation of log-posterior vectors for one utterance. All
/// inputs must share the utterance, the dimension and log_posterior space.
ScoreVector FuseLinear(const std::vector<ScoreVector>& inputs,
                       const FusionConfig& config);

/// Normalizes a log_likelihood (or log_posterior) vector to log-posteriors
/// under a uniform prior, by logsumexp subtraction.
ScoreVector ToLogPosterior(const ScoreVector& scores);

/// Re-types log-posteriors as a K-dimensional feature vector for the
/// LDA/PLDA backend.
EmbeddingVector LogProbFeatures(const ScoreVector& fused);

/// Late fusion of an acoustic-route and a text-route score vector. Inputs in
/// log_likelihood space are first normalized to posteriors; default weights
/// are uniform.
ScoreVector FuseRoutes(const ScoreVector& acoustic, const ScoreVector& text,
                       const FusionConfig& config = FusionConfig::Uniform(2));

/// Table-level counterpart of FuseLinear: rows matched by utterance id, all
/// tables reindexed to the first table's label order.
ScoreTable FuseTables(const std::vector<ScoreTable>& tables, const FusionConfig& config);

struct WeightSearchResult {
  double weight_first = 0.5;  // weight of the first route; second gets 1 - w
  double accuracy = 0.0;
};

/// Grid search for the route weight maximizing accuracy against `truth`.
/// Refuses to run when every utterance's group is "native" unless
/// `allow_native_tuning` is set: weights tuned on purely native data collapse
/// the fusion into the stronger single route.
WeightSearchResult OptimizeRouteWeight(const ScoreTable& first, const ScoreTable& second,
                                       const std::vector<Utterance>& truth,
                                       double grid_step = 0.05,
                                       bool allow_native_tuning = false);

}  // namespace lidkit

#endif  // LIDKIT_FUSION_HPP
