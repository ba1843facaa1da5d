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
// Two-covariance PLDA: every vector is modeled as x = mu + y + e with a
// per-class offset y ~ N(0, B) and residual e ~ N(0, W). Classification
// scores a test vector against each enrolled class with the posterior
// predictive density given that class's training samples.

#ifndef LIDKIT_PLDA_HPP
#define LIDKIT_PLDA_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lidkit/lda.hpp"
#include "lidkit/types.hpp"

namespace lidkit {

struct PldaOptions {
  int max_em_iters = 50;
  /// Stop when the relative Frobenius change of B and W drops below this.
  double param_tol = 1e-8;
  /// Ridge on W at initialization: eps * trace(W)/d * I.
  double ridge_eps = 1e-6;
};

struct PldaModel {
  Eigen::VectorXd mu;       // global mean, dim d
  Eigen::MatrixXd between;  // B, d x d, symmetric PSD
  Eigen::MatrixXd within;   // W, d x d, symmetric PD

  /// Language codes per class index; may be empty when the model was fitted
  /// from bare index-labeled vectors.
  LabelSet labels;

  struct ClassStats {
    int64_t count = 0;
    Eigen::VectorXd mean;
  };
  /// Indexed by class; enrollment is the training-set class means.
  std::vector<ClassStats> classes;

  /// Data log-likelihood at the start of each EM iteration (diagnostic;
  /// non-decreasing).
  std::vector<double> objective_trace;

  int dim() const { return static_cast<int>(mu.size()); }
  int num_classes() const { return static_cast<int>(classes.size()); }

  void Save(const std::string& path) const;
  static PldaModel Load(const std::string& path);
};

/// Fits the model on projected vectors. Requires >= 2 classes with >= 2
/// samples each. Initializes by method of moments (pooled within-class
/// covariance; class-mean covariance minus W/n correction) and refines with
/// EM.
PldaModel FitPlda(const LabeledMatrix& data, const PldaOptions& options = {});

/// Log posterior-predictive density of x under each enrolled class:
/// log N(x; mu + C_c W^{-1} n_c (m_c - mu), W + C_c) with
/// C_c = (B^{-1} + n_c W^{-1})^{-1}, computed in a form that stays finite
/// when B is singular.
ScoreVector ScorePlda(const PldaModel& model, const Eigen::VectorXd& x);
ScoreVector ScorePlda(const PldaModel& model, const EmbeddingVector& x);

/// Argmax of ScorePlda; ties break to the lowest class index.
int ClassifyPlda(const PldaModel& model, const Eigen::VectorXd& x);

}  // namespace lidkit

#endif  // LIDKIT_PLDA_HPP
