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
// Character-level convolutional classifier over ASR transcripts: one
// convolutional branch per ASR system (embedding, stacked 1D convolutions
// with ReLU, masked max-pooling over time), branch outputs concatenated and
// passed through two fully connected layers. The first FC output doubles as
// an utterance embedding for the LDA/PLDA backend.
//
// Everything is CPU-side and deterministic given a seed; gradients are
// written out by hand and verified against finite differences in the tests.

#ifndef LIDKIT_CONVNET_HPP
#define LIDKIT_CONVNET_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lidkit/types.hpp"

namespace lidkit {

/// Indexed character set for one branch. Index 0 is the pad slot, index 1
/// the unknown-character slot, then the training characters in sorted order.
struct CharVocab {
  static constexpr int kPad = 0;
  static constexpr int kUnknown = 1;

  std::vector<uint32_t> chars;  // sorted; chars[i] maps to index i + 2
  std::unordered_map<uint32_t, int> index;

  int size() const { return static_cast<int>(chars.size()) + 2; }
  int IndexOf(uint32_t cp) const;
  static CharVocab FromChars(std::vector<uint32_t> sorted_chars);
};

struct ConvNetSpec {
  std::vector<std::string> branches;  // ASR system names, one branch each
  LabelSet labels;
  int embed_dim = 20;
  std::vector<int> conv_kernels = {3, 1, 3, 1};
  int channels = 64;
  /// 0 means "equal to the concatenated branch width".
  int fc1_dim = 0;
  bool lowercase = true;
  std::vector<CharVocab> vocabs;  // parallel to branches

  int num_classes() const { return labels.size(); }
  int concat_dim() const { return channels * static_cast<int>(branches.size()); }
  int fc1_width() const { return fc1_dim > 0 ? fc1_dim : concat_dim(); }
  /// Half-width of the stack's receptive field: sum of (k-1)/2.
  int receptive_radius() const;

  void Validate() const;
  std::string Serialize() const;
  static ConvNetSpec Deserialize(std::istream& in, const std::string& path);
  uint64_t Hash() const;

  /// Builds vocabularies from training transcripts, one per branch.
  static ConvNetSpec Build(const std::vector<Utterance>& data,
                           std::vector<std::string> branches, const LabelSet& labels,
                           int channels = 64, int embed_dim = 20,
                           std::vector<int> conv_kernels = {3, 1, 3, 1},
                           int fc1_dim = 0);
};

struct ConvNetParams {
  struct Branch {
    Eigen::MatrixXd embedding;  // vocab size x embed_dim
    /// conv_w[layer][tap] is C_out x C_in; taps run left to right.
    std::vector<std::vector<Eigen::MatrixXd>> conv_w;
    std::vector<Eigen::VectorXd> conv_b;
  };
  std::vector<Branch> branches;
  Eigen::MatrixXd fc1_w;
  Eigen::VectorXd fc1_b;
  Eigen::MatrixXd fc2_w;
  Eigen::VectorXd fc2_b;
};

/// Mutable view of one parameter tensor, used by the optimizer and the
/// finite-difference tests.
struct TensorRef {
  std::string name;
  double* data;
  Eigen::Index size;
};

std::vector<TensorRef> Tensors(ConvNetParams& params);

ConvNetParams InitParams(const ConvNetSpec& spec, uint64_t seed);
ConvNetParams ZeroParams(const ConvNetSpec& spec);

struct ForwardResult {
  Eigen::VectorXd logits;     // num_classes
  Eigen::VectorXd embedding;  // fc1 width
};

ForwardResult Forward(const ConvNetParams& params, const ConvNetSpec& spec,
                      const Utterance& utt);

/// Mean cross-entropy over the batch; every utterance needs a label and a
/// transcript per branch.
double BatchLoss(const ConvNetParams& params, const ConvNetSpec& spec,
                 const std::vector<Utterance>& batch);

/// Mean cross-entropy plus its gradient (same layout as the parameters).
double BatchLossAndGrad(const ConvNetParams& params, const ConvNetSpec& spec,
                        const std::vector<Utterance>& batch, ConvNetParams* grad);

struct ConvNetTrainOptions {
  double lr = 0.05;
  int epochs = 100;
  int batch_size = 8;
  uint64_t seed = 1;
};

struct ConvNetTrainResult {
  ConvNetParams params;
  std::vector<double> epoch_losses;  // mean loss per epoch, pre-update
};

/// Seeded mini-batch gradient descent on softmax cross-entropy. Identical
/// seeds give bit-identical parameter trajectories.
ConvNetTrainResult TrainConvNet(const ConvNetSpec& spec,
                                const std::vector<Utterance>& data,
                                const ConvNetTrainOptions& options);

std::vector<EmbeddingVector> ExtractEmbeddings(const ConvNetParams& params,
                                               const ConvNetSpec& spec,
                                               const std::vector<Utterance>& data);

/// Checkpoint: spec, spec hash and full-precision parameters in one file.
void SaveCheckpoint(const ConvNetSpec& spec, const ConvNetParams& params,
                    const std::string& path);
std::pair<ConvNetSpec, ConvNetParams> LoadCheckpoint(const std::string& path);

}  // namespace lidkit

#endif  // LIDKIT_CONVNET_HPP
