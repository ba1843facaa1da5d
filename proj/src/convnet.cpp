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

#include "lidkit/convnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "lidkit/ngram_nb.hpp"
#include "lidkit/util.hpp"

namespace lidkit {

namespace {

double NextUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string NormalizeForNet(const std::string& text, const ConvNetSpec& spec) {
  NGramFeatureConfig cfg;
  cfg.lowercase = spec.lowercase;
  return NormalizeText(text, cfg);
}

/// Per-branch forward state kept for the backward pass.
struct BranchCache {
  std::vector<int> indices;          // padded character indices
  std::vector<char> keep;            // pre-pool mask
  Eigen::MatrixXd embedded;          // embed_dim x T
  std::vector<Eigen::MatrixXd> pre;  // per conv layer, channels x T
  std::vector<Eigen::MatrixXd> act;  // relu(pre)
  std::vector<int> argmax;           // pooled position per channel
};

struct NetCache {
  std::vector<BranchCache> branches;
  Eigen::VectorXd concat;
  Eigen::VectorXd fc1_pre;
  Eigen::VectorXd embedding;
  Eigen::VectorXd logits;
};

std::vector<int> IndexTranscript(const std::string& text, const ConvNetSpec& spec,
                                 const CharVocab& vocab, int* num_real) {
  std::vector<int> indices;
  for (uint32_t cp : DecodeUtf8(NormalizeForNet(text, spec)))
    indices.push_back(vocab.IndexOf(cp));
  *num_real = static_cast<int>(indices.size());
  const int min_len = 2 * spec.receptive_radius() + 1;
  while (static_cast<int>(indices.size()) < min_len)
    indices.push_back(CharVocab::kPad);
  return indices;
}

void ForwardBranch(const ConvNetParams::Branch& p, const ConvNetSpec& spec,
                   const std::string& text, const CharVocab& vocab,
                   BranchCache* cache) {
  int num_real = 0;
  cache->indices = IndexTranscript(text, spec, vocab, &num_real);
  const auto t_len = static_cast<Eigen::Index>(cache->indices.size());

  // A position survives pooling iff its receptive field covers at least one
  // real (non-appended) character; with an empty transcript everything is
  // padding, so everything stays eligible.
  const int radius = spec.receptive_radius();
  cache->keep.assign(static_cast<size_t>(t_len), 0);
  bool any = false;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    bool covers_real = (t - radius) < static_cast<Eigen::Index>(num_real) &&
                       (t + radius) >= 0 && num_real > 0;
    if (covers_real) {
      cache->keep[static_cast<size_t>(t)] = 1;
      any = true;
    }
  }
  if (!any) std::fill(cache->keep.begin(), cache->keep.end(), 1);

  cache->embedded.resize(spec.embed_dim, t_len);
  for (Eigen::Index t = 0; t < t_len; ++t)
    cache->embedded.col(t) =
        p.embedding.row(cache->indices[static_cast<size_t>(t)]).transpose();

  const size_t num_layers = spec.conv_kernels.size();
  cache->pre.resize(num_layers);
  cache->act.resize(num_layers);
  const Eigen::MatrixXd* input = &cache->embedded;
  for (size_t l = 0; l < num_layers; ++l) {
    const int k = spec.conv_kernels[l];
    const int r = (k - 1) / 2;
    Eigen::MatrixXd z(spec.channels, t_len);
    z.colwise() = p.conv_b[l];
    for (int tap = 0; tap < k; ++tap) {
      const int offset = tap - r;
      for (Eigen::Index t = 0; t < t_len; ++t) {
        const Eigen::Index s = t + offset;
        if (s < 0 || s >= t_len) continue;  // zero padding at the edges
        z.col(t).noalias() += p.conv_w[l][static_cast<size_t>(tap)] * input->col(s);
      }
    }
    cache->pre[l] = z;
    cache->act[l] = z.cwiseMax(0.0);
    input = &cache->act[l];
  }

  const Eigen::MatrixXd& last = cache->act.back();
  cache->argmax.assign(static_cast<size_t>(spec.channels), 0);
  for (int c = 0; c < spec.channels; ++c) {
    double best = -std::numeric_limits<double>::infinity();
    int best_t = -1;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      if (!cache->keep[static_cast<size_t>(t)]) continue;
      if (last(c, t) > best) {
        best = last(c, t);
        best_t = static_cast<int>(t);
      }
    }
    cache->argmax[static_cast<size_t>(c)] = best_t;
  }
}

void ForwardNet(const ConvNetParams& params, const ConvNetSpec& spec,
                const Utterance& utt, NetCache* cache) {
  const auto num_branches = spec.branches.size();
  cache->branches.resize(num_branches);
  cache->concat.resize(spec.concat_dim());
  for (size_t b = 0; b < num_branches; ++b) {
    const std::string& text = utt.Transcript(spec.branches[b]);
    ForwardBranch(params.branches[b], spec, text, spec.vocabs[b],
                  &cache->branches[b]);
    const BranchCache& bc = cache->branches[b];
    for (int c = 0; c < spec.channels; ++c)
      cache->concat(static_cast<Eigen::Index>(b) * spec.channels + c) =
          bc.act.back()(c, bc.argmax[static_cast<size_t>(c)]);
  }
  cache->fc1_pre = params.fc1_w * cache->concat + params.fc1_b;
  cache->embedding = cache->fc1_pre.cwiseMax(0.0);
  cache->logits = params.fc2_w * cache->embedding + params.fc2_b;
}

/// Softmax cross-entropy; returns the loss and writes d(loss)/d(logits).
double CrossEntropy(const Eigen::VectorXd& logits, int label,
                    Eigen::VectorXd* dlogits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd shifted = (logits.array() - m).exp();
  const double z = shifted.sum();
  Eigen::VectorXd p = shifted / z;
  if (dlogits) {
    *dlogits = p;
    (*dlogits)(label) -= 1.0;
  }
  return -(logits(label) - m - std::log(z));
}

void BackwardNet(const ConvNetParams& params, const ConvNetSpec& spec,
                 const NetCache& cache, const Eigen::VectorXd& dlogits,
                 ConvNetParams* grad) {
  grad->fc2_w.noalias() += dlogits * cache.embedding.transpose();
  grad->fc2_b += dlogits;
  Eigen::VectorXd d_embedding = params.fc2_w.transpose() * dlogits;

  Eigen::VectorXd d_fc1_pre = d_embedding.cwiseProduct(
      (cache.fc1_pre.array() > 0.0).cast<double>().matrix());
  grad->fc1_w.noalias() += d_fc1_pre * cache.concat.transpose();
  grad->fc1_b += d_fc1_pre;
  Eigen::VectorXd d_concat = params.fc1_w.transpose() * d_fc1_pre;

  for (size_t b = 0; b < spec.branches.size(); ++b) {
    const BranchCache& bc = cache.branches[b];
    const auto t_len = static_cast<Eigen::Index>(bc.indices.size());
    const size_t num_layers = spec.conv_kernels.size();

    // Route pooled gradients back to the argmax positions.
    Eigen::MatrixXd d_act = Eigen::MatrixXd::Zero(spec.channels, t_len);
    for (int c = 0; c < spec.channels; ++c)
      d_act(c, bc.argmax[static_cast<size_t>(c)]) +=
          d_concat(static_cast<Eigen::Index>(b) * spec.channels + c);

    for (size_t l = num_layers; l-- > 0;) {
      Eigen::MatrixXd d_pre =
          d_act.cwiseProduct((bc.pre[l].array() > 0.0).cast<double>().matrix());
      const Eigen::MatrixXd& input = (l == 0) ? bc.embedded : bc.act[l - 1];
      const int k = spec.conv_kernels[l];
      const int r = (k - 1) / 2;
      auto& gbranch = grad->branches[b];
      gbranch.conv_b[l] += d_pre.rowwise().sum();
      Eigen::MatrixXd d_input = Eigen::MatrixXd::Zero(input.rows(), t_len);
      for (int tap = 0; tap < k; ++tap) {
        const int offset = tap - r;
        for (Eigen::Index t = 0; t < t_len; ++t) {
          const Eigen::Index s = t + offset;
          if (s < 0 || s >= t_len) continue;
          gbranch.conv_w[l][static_cast<size_t>(tap)].noalias() +=
              d_pre.col(t) * input.col(s).transpose();
          d_input.col(s).noalias() +=
              params.branches[b].conv_w[l][static_cast<size_t>(tap)].transpose() *
              d_pre.col(t);
        }
      }
      d_act = std::move(d_input);
    }

    for (Eigen::Index t = 0; t < t_len; ++t)
      grad->branches[b].embedding.row(bc.indices[static_cast<size_t>(t)]) +=
          d_act.col(t).transpose();
  }
}

}  // namespace

int CharVocab::IndexOf(uint32_t cp) const {
  auto it = index.find(cp);
  return it == index.end() ? kUnknown : it->second;
}

CharVocab CharVocab::FromChars(std::vector<uint32_t> sorted_chars) {
  CharVocab vocab;
  vocab.chars = std::move(sorted_chars);
  for (size_t i = 0; i < vocab.chars.size(); ++i)
    if (!vocab.index.emplace(vocab.chars[i], static_cast<int>(i) + 2).second)
      throw Error("duplicate character in vocabulary");
  return vocab;
}

int ConvNetSpec::receptive_radius() const {
  int r = 0;
  for (int k : conv_kernels) r += (k - 1) / 2;
  return r;
}

void ConvNetSpec::Validate() const {
  if (branches.empty()) throw Error("convnet needs at least one branch");
  if (labels.size() < 2) throw Error("convnet needs at least 2 classes");
  if (embed_dim < 1 || channels < 1 || fc1_width() < 1)
    throw Error("convnet dimensions must be >= 1");
  if (conv_kernels.empty()) throw Error("convnet needs at least one conv layer");
  for (int k : conv_kernels)
    if (k < 1 || k % 2 == 0)
      throw Error("conv kernel sizes must be odd, got " + std::to_string(k));
  if (vocabs.size() != branches.size())
    throw Error("convnet vocabularies do not match the branch list");
}

ConvNetSpec ConvNetSpec::Build(const std::vector<Utterance>& data,
                               std::vector<std::string> branches,
                               const LabelSet& labels, int channels, int embed_dim,
                               std::vector<int> conv_kernels, int fc1_dim) {
  if (data.empty()) throw Error("cannot build a convnet spec from an empty corpus");
  ConvNetSpec spec;
  spec.branches = std::move(branches);
  spec.labels = labels;
  spec.channels = channels;
  spec.embed_dim = embed_dim;
  spec.conv_kernels = std::move(conv_kernels);
  spec.fc1_dim = fc1_dim;
  for (const std::string& branch : spec.branches) {
    std::set<uint32_t> chars;
    for (const Utterance& utt : data)
      for (uint32_t cp : DecodeUtf8(NormalizeForNet(utt.Transcript(branch), spec)))
        chars.insert(cp);
    spec.vocabs.push_back(
        CharVocab::FromChars(std::vector<uint32_t>(chars.begin(), chars.end())));
  }
  spec.Validate();
  return spec;
}

std::vector<TensorRef> Tensors(ConvNetParams& params) {
  std::vector<TensorRef> out;
  for (size_t b = 0; b < params.branches.size(); ++b) {
    auto& branch = params.branches[b];
    const std::string prefix = "branch" + std::to_string(b) + ".";
    out.push_back({prefix + "embedding", branch.embedding.data(),
                   branch.embedding.size()});
    for (size_t l = 0; l < branch.conv_w.size(); ++l) {
      for (size_t tap = 0; tap < branch.conv_w[l].size(); ++tap)
        out.push_back({prefix + "conv" + std::to_string(l) + ".w" + std::to_string(tap),
                       branch.conv_w[l][tap].data(), branch.conv_w[l][tap].size()});
      out.push_back({prefix + "conv" + std::to_string(l) + ".b",
                     branch.conv_b[l].data(), branch.conv_b[l].size()});
    }
  }
  out.push_back({"fc1.w", params.fc1_w.data(), params.fc1_w.size()});
  out.push_back({"fc1.b", params.fc1_b.data(), params.fc1_b.size()});
  out.push_back({"fc2.w", params.fc2_w.data(), params.fc2_w.size()});
  out.push_back({"fc2.b", params.fc2_b.data(), params.fc2_b.size()});
  return out;
}

ConvNetParams ZeroParams(const ConvNetSpec& spec) {
  spec.Validate();
  ConvNetParams p;
  p.branches.resize(spec.branches.size());
  for (size_t b = 0; b < spec.branches.size(); ++b) {
    auto& branch = p.branches[b];
    branch.embedding =
        Eigen::MatrixXd::Zero(spec.vocabs[b].size(), spec.embed_dim);
    int in_channels = spec.embed_dim;
    for (int k : spec.conv_kernels) {
      std::vector<Eigen::MatrixXd> taps;
      for (int tap = 0; tap < k; ++tap)
        taps.push_back(Eigen::MatrixXd::Zero(spec.channels, in_channels));
      branch.conv_w.push_back(std::move(taps));
      branch.conv_b.push_back(Eigen::VectorXd::Zero(spec.channels));
      in_channels = spec.channels;
    }
  }
  p.fc1_w = Eigen::MatrixXd::Zero(spec.fc1_width(), spec.concat_dim());
  p.fc1_b = Eigen::VectorXd::Zero(spec.fc1_width());
  p.fc2_w = Eigen::MatrixXd::Zero(spec.num_classes(), spec.fc1_width());
  p.fc2_b = Eigen::VectorXd::Zero(spec.num_classes());
  return p;
}

ConvNetParams InitParams(const ConvNetSpec& spec, uint64_t seed) {
  ConvNetParams p = ZeroParams(spec);
  std::mt19937_64 rng(DeriveSeed(seed, "convnet-init", ""));
  auto fill_uniform = [&](Eigen::MatrixXd& m, double limit) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        m(r, c) = (2.0 * NextUniform(rng) - 1.0) * limit;
  };
  for (size_t b = 0; b < p.branches.size(); ++b) {
    auto& branch = p.branches[b];
    fill_uniform(branch.embedding, 0.5);
    for (size_t l = 0; l < branch.conv_w.size(); ++l) {
      const auto k = static_cast<double>(branch.conv_w[l].size());
      const double fan_in = k * static_cast<double>(branch.conv_w[l][0].cols());
      const double fan_out = k * static_cast<double>(branch.conv_w[l][0].rows());
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      for (auto& tap : branch.conv_w[l]) fill_uniform(tap, limit);
    }
  }
  auto glorot = [&](Eigen::MatrixXd& m) {
    fill_uniform(m, std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols())));
  };
  glorot(p.fc1_w);
  glorot(p.fc2_w);
  return p;
}

ForwardResult Forward(const ConvNetParams& params, const ConvNetSpec& spec,
                      const Utterance& utt) {
  NetCache cache;
  ForwardNet(params, spec, utt, &cache);
  return {cache.logits, cache.embedding};
}

double BatchLoss(const ConvNetParams& params, const ConvNetSpec& spec,
                 const std::vector<Utterance>& batch) {
  return BatchLossAndGrad(params, spec, batch, nullptr);
}

double BatchLossAndGrad(const ConvNetParams& params, const ConvNetSpec& spec,
                        const std::vector<Utterance>& batch, ConvNetParams* grad) {
  if (batch.empty()) throw Error("empty batch");
  double total = 0.0;
  for (const Utterance& utt : batch) {
    if (!utt.label)
      throw Error("utterance '" + utt.id + "' is unlabeled; training requires labels");
    const int label = spec.labels.Require(*utt.label);
    NetCache cache;
    ForwardNet(params, spec, utt, &cache);
    Eigen::VectorXd dlogits;
    total += CrossEntropy(cache.logits, label, grad ? &dlogits : nullptr);
    if (grad) {
      dlogits /= static_cast<double>(batch.size());
      BackwardNet(params, spec, cache, dlogits, grad);
    }
  }
  return total / static_cast<double>(batch.size());
}

ConvNetTrainResult TrainConvNet(const ConvNetSpec& spec,
                                const std::vector<Utterance>& data,
                                const ConvNetTrainOptions& options) {
  spec.Validate();
  if (data.empty()) throw Error("cannot train a convnet on an empty corpus");
  if (options.epochs < 0) throw Error("epoch count must be >= 0");
  if (options.batch_size < 1) throw Error("batch size must be >= 1");

  ConvNetTrainResult result;
  result.params = InitParams(spec, options.seed);

  std::mt19937_64 shuffle_rng(DeriveSeed(options.seed, "convnet-shuffle", ""));
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    int64_t seen = 0;
    const auto batch_size = static_cast<size_t>(options.batch_size);
    for (size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<Utterance> batch;
      for (size_t i = start; i < std::min(order.size(), start + batch_size); ++i)
        batch.push_back(data[order[i]]);
      ConvNetParams grad = ZeroParams(spec);
      double loss = BatchLossAndGrad(result.params, spec, batch, &grad);
      epoch_loss += loss * static_cast<double>(batch.size());
      seen += static_cast<int64_t>(batch.size());

      auto param_tensors = Tensors(result.params);
      auto grad_tensors = Tensors(grad);
      for (size_t t = 0; t < param_tensors.size(); ++t)
        for (Eigen::Index i = 0; i < param_tensors[t].size; ++i)
          param_tensors[t].data[i] -= options.lr * grad_tensors[t].data[i];
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(seen));
  }
  return result;
}

std::vector<EmbeddingVector> ExtractEmbeddings(const ConvNetParams& params,
                                               const ConvNetSpec& spec,
                                               const std::vector<Utterance>& data) {
  std::vector<EmbeddingVector> out;
  out.reserve(data.size());
  for (const Utterance& utt : data) {
    ForwardResult fwd = Forward(params, spec, utt);
    EmbeddingVector e;
    e.utterance_id = utt.id;
    e.values.assign(fwd.embedding.data(), fwd.embedding.data() + fwd.embedding.size());
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoint format

namespace {
constexpr const char* kCkptMagic = "lidkit-convnet";
constexpr int kCkptVersion = 1;
}  // namespace

std::string ConvNetSpec::Serialize() const {
  std::string out;
  out += "branches";
  for (const auto& b : branches) out += '\t' + b;
  out += '\n';
  out += "labels";
  for (const auto& c : labels.codes()) out += '\t' + c;
  out += '\n';
  out += "embed_dim\t" + std::to_string(embed_dim) + '\n';
  out += "channels\t" + std::to_string(channels) + '\n';
  out += "fc1_dim\t" + std::to_string(fc1_dim) + '\n';
  out += "lowercase\t" + std::to_string(lowercase ? 1 : 0) + '\n';
  out += "conv_kernels";
  for (int k : conv_kernels) out += '\t' + std::to_string(k);
  out += '\n';
  for (const CharVocab& vocab : vocabs) {
    out += "vocab\t" + std::to_string(vocab.chars.size());
    for (uint32_t cp : vocab.chars) out += '\t' + std::to_string(cp);
    out += '\n';
  }
  return out;
}

uint64_t ConvNetSpec::Hash() const { return Fnv1a64(Serialize()); }

ConvNetSpec ConvNetSpec::Deserialize(std::istream& in, const std::string& path) {
  ConvNetSpec spec;
  std::string line;
  auto next = [&](const char* tag) {
    if (!std::getline(in, line)) throw Error(path + ": truncated spec, expected " + tag);
    std::vector<std::string> f = SplitTabs(line);
    if (f.empty() || f[0] != tag) throw Error(path + ": expected '" + tag + "' line");
    return std::vector<std::string>(f.begin() + 1, f.end());
  };
  for (auto& b : next("branches")) spec.branches.push_back(b);
  spec.labels = LabelSet(next("labels"));
  spec.embed_dim = static_cast<int>(ParseInt(next("embed_dim").at(0), path));
  spec.channels = static_cast<int>(ParseInt(next("channels").at(0), path));
  spec.fc1_dim = static_cast<int>(ParseInt(next("fc1_dim").at(0), path));
  spec.lowercase = ParseInt(next("lowercase").at(0), path) != 0;
  spec.conv_kernels.clear();
  for (auto& k : next("conv_kernels"))
    spec.conv_kernels.push_back(static_cast<int>(ParseInt(k, path)));
  for (size_t b = 0; b < spec.branches.size(); ++b) {
    std::vector<std::string> f = next("vocab");
    if (f.empty()) throw Error(path + ": bad vocab line");
    auto count = ParseInt(f[0], path);
    if (static_cast<int64_t>(f.size()) != count + 1)
      throw Error(path + ": vocab size mismatch");
    std::vector<uint32_t> chars;
    for (int64_t i = 0; i < count; ++i)
      chars.push_back(static_cast<uint32_t>(ParseInt(f[static_cast<size_t>(i) + 1], path)));
    spec.vocabs.push_back(CharVocab::FromChars(std::move(chars)));
  }
  spec.Validate();
  return spec;
}

void SaveCheckpoint(const ConvNetSpec& spec, const ConvNetParams& params,
                    const std::string& path) {
  std::string out;
  out += kCkptMagic;
  out += ' ';
  out += std::to_string(kCkptVersion);
  out += '\n';
  out += "spec_hash\t" + std::to_string(spec.Hash()) + '\n';
  out += spec.Serialize();
  ConvNetParams& mutable_params = const_cast<ConvNetParams&>(params);
  for (const TensorRef& tensor : Tensors(mutable_params)) {
    out += "tensor\t" + tensor.name + '\t' + std::to_string(tensor.size);
    for (Eigen::Index i = 0; i < tensor.size; ++i) {
      out += '\t';
      out += FormatFloat(tensor.data[i]);
    }
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

std::pair<ConvNetSpec, ConvNetParams> LoadCheckpoint(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty checkpoint");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kCkptMagic) throw Error(path + ": not a convnet checkpoint");
    if (version != kCkptVersion) throw Error(path + ": unsupported version");
  }
  if (!std::getline(in, line)) throw Error(path + ": truncated checkpoint");
  std::vector<std::string> hash_line = SplitTabs(line);
  if (hash_line.size() != 2 || hash_line[0] != "spec_hash")
    throw Error(path + ": expected spec_hash");
  ConvNetSpec spec = ConvNetSpec::Deserialize(in, path);
  if (std::to_string(spec.Hash()) != hash_line[1])
    throw Error(path + ": spec hash mismatch; checkpoint does not match its spec");

  ConvNetParams params = ZeroParams(spec);
  auto tensors = Tensors(params);
  size_t next_tensor = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() < 3 || f[0] != "tensor") throw Error(path + ": bad tensor line");
    if (next_tensor >= tensors.size()) throw Error(path + ": too many tensors");
    TensorRef& tensor = tensors[next_tensor++];
    if (f[1] != tensor.name)
      throw Error(path + ": tensor order mismatch, expected " + tensor.name);
    auto size = ParseInt(f[2], path);
    if (size != tensor.size || static_cast<int64_t>(f.size()) != size + 3)
      throw Error(path + ": tensor size mismatch for " + tensor.name);
    for (Eigen::Index i = 0; i < tensor.size; ++i)
      tensor.data[i] = ParseDouble(f[static_cast<size_t>(i) + 3], path);
  }
  if (next_tensor != tensors.size()) throw Error(path + ": missing tensors");
  return {std::move(spec), std::move(params)};
}

}  // namespace lidkit
