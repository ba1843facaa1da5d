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

#include "lidkit/lda.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "lidkit/util.hpp"

namespace lidkit {

LabeledMatrix JoinEmbeddingsWithLabels(const std::vector<EmbeddingVector>& embeddings,
                                       const std::vector<Utterance>& truth,
                                       const LabelSet& labels) {
  std::unordered_map<std::string, const Utterance*> by_id;
  for (const Utterance& utt : truth) by_id[utt.id] = &utt;

  if (embeddings.empty()) throw Error("no embeddings to join with labels");
  const auto dim = static_cast<Eigen::Index>(embeddings.front().values.size());
  LabeledMatrix data;
  data.num_classes = labels.size();
  data.x.resize(static_cast<Eigen::Index>(embeddings.size()), dim);
  data.y.reserve(embeddings.size());
  for (size_t i = 0; i < embeddings.size(); ++i) {
    const EmbeddingVector& e = embeddings[i];
    if (static_cast<Eigen::Index>(e.values.size()) != dim)
      throw Error("embedding for '" + e.utterance_id + "' has inconsistent dimension");
    auto it = by_id.find(e.utterance_id);
    if (it == by_id.end())
      throw Error("embedding utterance '" + e.utterance_id + "' is not in the manifest");
    if (!it->second->label)
      throw Error("utterance '" + e.utterance_id + "' has no label");
    data.y.push_back(labels.Require(*it->second->label));
    for (Eigen::Index j = 0; j < dim; ++j)
      data.x(static_cast<Eigen::Index>(i), j) = e.values[static_cast<size_t>(j)];
  }
  return data;
}

Eigen::VectorXd LdaTransform::Apply(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size())
    throw Error("dimension mismatch: vector has " + std::to_string(x.size()) +
                " dims, transform expects " + std::to_string(mean.size()));
  return projection * (x - mean);
}

EmbeddingVector LdaTransform::Apply(const EmbeddingVector& x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.values.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = x.values[static_cast<size_t>(i)];
  Eigen::VectorXd p = Apply(v);
  EmbeddingVector out;
  out.utterance_id = x.utterance_id;
  out.values.assign(p.data(), p.data() + p.size());
  return out;
}

LdaTransform FitLda(const LabeledMatrix& data, int target_dim,
                    const LdaOptions& options) {
  if (target_dim < 1) throw Error("LDA target dimension must be >= 1");
  const Eigen::Index n = data.x.rows();
  const Eigen::Index dim = data.x.cols();
  const int k = data.num_classes;
  if (k < 2) throw Error("LDA requires at least 2 classes");
  if (static_cast<Eigen::Index>(data.y.size()) != n)
    throw Error("label vector does not match the data matrix");

  std::vector<Eigen::Index> class_count(static_cast<size_t>(k), 0);
  for (int label : data.y) {
    if (label < 0 || label >= k) throw Error("class label out of range");
    ++class_count[static_cast<size_t>(label)];
  }
  for (int c = 0; c < k; ++c)
    if (class_count[static_cast<size_t>(c)] < 2)
      throw Error("class " + std::to_string(c) +
                  " has fewer than 2 samples; cannot estimate scatter");

  Eigen::VectorXd mean = data.x.colwise().mean();
  Eigen::MatrixXd class_mean = Eigen::MatrixXd::Zero(k, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    class_mean.row(data.y[static_cast<size_t>(i)]) += data.x.row(i);
  for (int c = 0; c < k; ++c)
    class_mean.row(c) /= static_cast<double>(class_count[static_cast<size_t>(c)]);

  Eigen::MatrixXd s_within = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd d = data.x.row(i).transpose() -
                        class_mean.row(data.y[static_cast<size_t>(i)]).transpose();
    s_within.noalias() += d * d.transpose();
  }
  Eigen::MatrixXd s_between = Eigen::MatrixXd::Zero(dim, dim);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd d = class_mean.row(c).transpose() - mean;
    s_between.noalias() +=
        static_cast<double>(class_count[static_cast<size_t>(c)]) * d * d.transpose();
  }

  const double within_trace = s_within.trace();
  const double between_trace = s_between.trace();
  if (within_trace <= 0.0 && between_trace <= 0.0)
    throw Error("all samples are identical; scatter matrices are zero");
  // Zero within-class scatter with separated classes: fall back to a scale
  // taken from the between-class trace so the solver stays definite.
  const double ridge_scale = within_trace > 0.0 ? within_trace : between_trace;
  s_within += options.ridge_eps * (ridge_scale / static_cast<double>(dim)) *
              Eigen::MatrixXd::Identity(dim, dim);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(s_between, s_within);
  if (solver.info() != Eigen::Success)
    throw Error("generalized eigensolver failed on the scatter matrices");
  // Eigenvalues ascend; large ones carry the discriminative directions.
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();
  const double lambda_max = eigenvalues(dim - 1);
  if (!(lambda_max > 0.0))
    throw Error("between-class scatter is zero; classes are indistinguishable");
  const double rank_tol = 1e-10 * std::max(lambda_max, 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (eigenvalues(i) > rank_tol) ++rank;

  int effective = std::min({target_dim, k - 1, rank, static_cast<int>(dim)});

  LdaTransform t;
  t.mean = mean;
  t.requested_dim = target_dim;
  t.projection.resize(effective, dim);
  for (int r = 0; r < effective; ++r)
    t.projection.row(r) = solver.eigenvectors().col(dim - 1 - r).transpose();
  return t;
}

LabeledMatrix ApplyLdaAll(const LdaTransform& t, const LabeledMatrix& data) {
  LabeledMatrix out;
  out.num_classes = data.num_classes;
  out.y = data.y;
  out.x.resize(data.x.rows(), t.dim());
  for (Eigen::Index i = 0; i < data.x.rows(); ++i)
    out.x.row(i) = t.Apply(Eigen::VectorXd(data.x.row(i).transpose())).transpose();
  return out;
}

namespace {
constexpr const char* kLdaMagic = "lidkit-lda";
constexpr int kLdaVersion = 1;

void WriteMatrix(std::string* out, const char* tag, const Eigen::MatrixXd& m) {
  *out += tag;
  *out += '\t' + std::to_string(m.rows()) + '\t' + std::to_string(m.cols()) + '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) *out += '\t';
      *out += FormatFloat(m(r, c));
    }
    *out += '\n';
  }
}

Eigen::MatrixXd ReadMatrix(std::istream& in, const std::string& tag,
                           const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": truncated, expected " + tag);
  std::vector<std::string> head = SplitTabs(line);
  if (head.size() != 3 || head[0] != tag)
    throw Error(path + ": expected '" + tag + "<TAB>rows<TAB>cols'");
  auto rows = ParseInt(head[1], path);
  auto cols = ParseInt(head[2], path);
  Eigen::MatrixXd m(rows, cols);
  for (int64_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw Error(path + ": truncated matrix " + tag);
    std::vector<std::string> f = SplitTabs(line);
    if (static_cast<int64_t>(f.size()) != cols)
      throw Error(path + ": bad row width in matrix " + tag);
    for (int64_t c = 0; c < cols; ++c) m(r, c) = ParseDouble(f[static_cast<size_t>(c)], path);
  }
  return m;
}
}  // namespace

void LdaTransform::Save(const std::string& path) const {
  std::string out;
  out += kLdaMagic;
  out += ' ';
  out += std::to_string(kLdaVersion);
  out += '\n';
  out += "requested_dim\t" + std::to_string(requested_dim) + '\n';
  WriteMatrix(&out, "mean", mean.transpose());
  WriteMatrix(&out, "projection", projection);
  AtomicWriteFile(path, out);
}

LdaTransform LdaTransform::Load(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kLdaMagic) throw Error(path + ": not an LDA transform file");
    if (version != kLdaVersion) throw Error(path + ": unsupported version");
  }
  LdaTransform t;
  if (!std::getline(in, line)) throw Error(path + ": truncated");
  std::vector<std::string> f = SplitTabs(line);
  if (f.size() != 2 || f[0] != "requested_dim")
    throw Error(path + ": expected requested_dim");
  t.requested_dim = static_cast<int>(ParseInt(f[1], path));
  Eigen::MatrixXd mean_row = ReadMatrix(in, "mean", path);
  if (mean_row.rows() != 1) throw Error(path + ": mean must be a single row");
  t.mean = mean_row.row(0).transpose();
  t.projection = ReadMatrix(in, "projection", path);
  if (t.projection.cols() != t.mean.size())
    throw Error(path + ": projection width does not match the mean dimension");
  return t;
}

}  // namespace lidkit
