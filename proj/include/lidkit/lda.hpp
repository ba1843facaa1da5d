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
// Supervised dimensionality reduction for embedding vectors: center on the
// training data, then project onto the leading generalized eigenvectors of
// (between-class scatter, within-class scatter).

#ifndef LIDKIT_LDA_HPP
#define LIDKIT_LDA_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lidkit/types.hpp"

namespace lidkit {

/// Labeled vectors in matrix form: row i of `x` belongs to class `y[i]`,
/// with `y[i]` in [0, num_classes).
struct LabeledMatrix {
  Eigen::MatrixXd x;
  std::vector<int> y;
  int num_classes = 0;
};

/// Builds a LabeledMatrix by joining embeddings with manifest labels.
LabeledMatrix JoinEmbeddingsWithLabels(const std::vector<EmbeddingVector>& embeddings,
                                       const std::vector<Utterance>& truth,
                                       const LabelSet& labels);

struct LdaTransform {
  Eigen::VectorXd mean;        // training-data center, dim D
  Eigen::MatrixXd projection;  // d x D
  int requested_dim = 0;       // what the caller asked for
  int dim() const { return static_cast<int>(projection.rows()); }
  int input_dim() const { return static_cast<int>(projection.cols()); }

  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  EmbeddingVector Apply(const EmbeddingVector& x) const;

  void Save(const std::string& path) const;
  static LdaTransform Load(const std::string& path);
};

struct LdaOptions {
  /// Ridge on the within-class scatter: eps * trace(S_w)/D * I.
  double ridge_eps = 1e-6;
};

/// Fits the transform. The effective dimension is clamped to
/// min(target_dim, K-1, rank of the between-class scatter); the caller can
/// observe the clamp via LdaTransform::dim(). Requires >= 2 classes with
/// >= 2 samples each and a nonzero total scatter.
LdaTransform FitLda(const LabeledMatrix& data, int target_dim,
                    const LdaOptions& options = {});

/// Projects every row of a labeled matrix (helper for backend pipelines).
LabeledMatrix ApplyLdaAll(const LdaTransform& t, const LabeledMatrix& data);

}  // namespace lidkit

#endif  // LIDKIT_LDA_HPP
