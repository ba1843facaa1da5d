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

#include "lidkit/plda.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lidkit/util.hpp"

namespace lidkit {

namespace {

void Symmetrize(Eigen::MatrixXd* m) { *m = 0.5 * (*m + m->transpose()); }

/// Floors negative eigenvalues to zero, keeping the matrix symmetric PSD.
Eigen::MatrixXd FloorToPsd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

/// log det via LLT; throws if the matrix is not positive definite.
double LogDetLlt(const Eigen::LLT<Eigen::MatrixXd>& llt, const char* what) {
  if (llt.info() != Eigen::Success)
    throw Error(std::string(what) + " is not positive definite");
  double logdet = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += std::log(l(i, i));
  return 2.0 * logdet;
}

struct ClassPosterior {
  Eigen::MatrixXd phi;  // posterior covariance of the class offset y
  Eigen::VectorXd w;    // posterior mean of y
};

/// Posterior of the class offset given n observations with centered mean
/// m_tilde. Uses phi = B - B (B + W/n)^{-1} B and w = B (B + W/n)^{-1} m~,
/// which avoid inverting B and so remain valid when B is singular.
ClassPosterior PosteriorOfClassOffset(const Eigen::MatrixXd& between,
                                      const Eigen::MatrixXd& within, int64_t n,
                                      const Eigen::VectorXd& m_tilde) {
  Eigen::MatrixXd marginal = between + within / static_cast<double>(n);
  Eigen::LLT<Eigen::MatrixXd> llt(marginal);
  if (llt.info() != Eigen::Success)
    throw Error("class marginal covariance is not positive definite");
  Eigen::MatrixXd gain = llt.solve(between).transpose();  // B M^{-1}, B symmetric
  ClassPosterior post;
  post.phi = between - gain * between;
  Symmetrize(&post.phi);
  post.w = gain * m_tilde;
  return post;
}

/// Marginal log-likelihood of the data under (mu, B, W), split as in the EM
/// derivation: within-class offsets are N(0, W), class means are
/// N(mu, B + W/n_c).
double DataLogLikelihood(const Eigen::MatrixXd& between, const Eigen::MatrixXd& within,
                         const Eigen::MatrixXd& offset_scatter, int64_t n_total,
                         const std::vector<PldaModel::ClassStats>& classes,
                         const Eigen::VectorXd& mu) {
  const double d = static_cast<double>(mu.size());
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const auto k = static_cast<int64_t>(classes.size());

  Eigen::LLT<Eigen::MatrixXd> within_llt(within);
  double within_logdet = LogDetLlt(within_llt, "within-class covariance");
  double objective =
      -0.5 * (static_cast<double>(n_total - k) * (within_logdet + d * log2pi) +
              within_llt.solve(offset_scatter).trace());
  for (const auto& cls : classes) {
    Eigen::MatrixXd marginal = between + within / static_cast<double>(cls.count);
    Eigen::LLT<Eigen::MatrixXd> llt(marginal);
    double logdet = LogDetLlt(llt, "class marginal covariance");
    Eigen::VectorXd m_tilde = cls.mean - mu;
    objective -= 0.5 * (logdet + d * log2pi + m_tilde.dot(llt.solve(m_tilde)));
  }
  return objective;
}

}  // namespace

PldaModel FitPlda(const LabeledMatrix& data, const PldaOptions& options) {
  const Eigen::Index n = data.x.rows();
  const Eigen::Index dim = data.x.cols();
  const int k = data.num_classes;
  if (k < 2) throw Error("PLDA requires at least 2 classes");
  if (static_cast<Eigen::Index>(data.y.size()) != n)
    throw Error("label vector does not match the data matrix");

  std::vector<int64_t> class_count(static_cast<size_t>(k), 0);
  for (int label : data.y) {
    if (label < 0 || label >= k) throw Error("class label out of range");
    ++class_count[static_cast<size_t>(label)];
  }
  for (int c = 0; c < k; ++c)
    if (class_count[static_cast<size_t>(c)] < 2)
      throw Error("class " + std::to_string(c) +
                  " has fewer than 2 samples; cannot fit PLDA");

  PldaModel model;
  model.mu = data.x.colwise().mean();

  Eigen::MatrixXd class_mean = Eigen::MatrixXd::Zero(k, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    class_mean.row(data.y[static_cast<size_t>(i)]) += data.x.row(i);
  model.classes.resize(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) {
    class_mean.row(c) /= static_cast<double>(class_count[static_cast<size_t>(c)]);
    model.classes[static_cast<size_t>(c)].count = class_count[static_cast<size_t>(c)];
    model.classes[static_cast<size_t>(c)].mean = class_mean.row(c).transpose();
  }

  // Scatter of samples about their class means, accumulated once.
  Eigen::MatrixXd offset_scatter = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd d = data.x.row(i).transpose() -
                        class_mean.row(data.y[static_cast<size_t>(i)]).transpose();
    offset_scatter.noalias() += d * d.transpose();
  }
  Symmetrize(&offset_scatter);

  // Method-of-moments start: pooled within-class covariance, and class-mean
  // covariance corrected by the expected W/n share, floored to PSD.
  Eigen::MatrixXd within = offset_scatter / static_cast<double>(n - k);
  double within_trace = within.trace();
  if (within_trace > 0.0) {
    within += options.ridge_eps * (within_trace / static_cast<double>(dim)) *
              Eigen::MatrixXd::Identity(dim, dim);
  } else {
    within = options.ridge_eps * Eigen::MatrixXd::Identity(dim, dim);
  }

  Eigen::MatrixXd mean_scatter = Eigen::MatrixXd::Zero(dim, dim);
  double harmonic = 0.0;
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd d = class_mean.row(c).transpose() - model.mu;
    mean_scatter.noalias() += d * d.transpose();
    harmonic += 1.0 / static_cast<double>(class_count[static_cast<size_t>(c)]);
  }
  mean_scatter /= static_cast<double>(k);
  Eigen::MatrixXd between =
      FloorToPsd(mean_scatter - (harmonic / static_cast<double>(k)) * within);

  const auto n_total = static_cast<int64_t>(n);
  for (int iter = 0; iter < options.max_em_iters; ++iter) {
    model.objective_trace.push_back(DataLogLikelihood(
        between, within, offset_scatter, n_total, model.classes, model.mu));

    Eigen::MatrixXd between_stats = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd within_stats = offset_scatter;
    for (int c = 0; c < k; ++c) {
      const auto& cls = model.classes[static_cast<size_t>(c)];
      Eigen::VectorXd m_tilde = cls.mean - model.mu;
      ClassPosterior post = PosteriorOfClassOffset(between, within, cls.count, m_tilde);
      between_stats.noalias() += post.phi + post.w * post.w.transpose();
      Eigen::VectorXd residual = m_tilde - post.w;
      within_stats.noalias() += static_cast<double>(cls.count) *
                                (post.phi + residual * residual.transpose());
    }

    Eigen::MatrixXd new_between = between_stats / static_cast<double>(k);
    Eigen::MatrixXd new_within = within_stats / static_cast<double>(n_total);
    Symmetrize(&new_between);
    Symmetrize(&new_within);

    // Degenerate data (zero residual scatter) collapses W; keep the last
    // valid parameters instead of iterating into a singular model.
    if (!(new_within.trace() > 0.0) ||
        Eigen::LLT<Eigen::MatrixXd>(new_within).info() != Eigen::Success)
      break;

    double change = 0.0;
    change = std::max(change, (new_between - between).norm() / (between.norm() + 1e-300));
    change = std::max(change, (new_within - within).norm() / (within.norm() + 1e-300));
    between = new_between;
    within = new_within;
    if (change < options.param_tol) break;
  }

  model.between = between;
  model.within = within;
  return model;
}

ScoreVector ScorePlda(const PldaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.mu.size())
    throw Error("dimension mismatch: vector has " + std::to_string(x.size()) +
                " dims, PLDA model expects " + std::to_string(model.mu.size()));
  const double d = static_cast<double>(model.dim());
  const double log2pi = std::log(2.0 * std::numbers::pi);

  ScoreVector result;
  result.space = ScoreSpace::kLogLikelihood;
  result.values.reserve(model.classes.size());
  for (const auto& cls : model.classes) {
    Eigen::VectorXd m_tilde = cls.mean - model.mu;
    ClassPosterior post =
        PosteriorOfClassOffset(model.between, model.within, cls.count, m_tilde);
    Eigen::MatrixXd predictive_cov = model.within + post.phi;
    Eigen::LLT<Eigen::MatrixXd> llt(predictive_cov);
    double logdet = LogDetLlt(llt, "predictive covariance");
    Eigen::VectorXd centered = x - (model.mu + post.w);
    result.values.push_back(
        -0.5 * (logdet + d * log2pi + centered.dot(llt.solve(centered))));
  }
  return result;
}

ScoreVector ScorePlda(const PldaModel& model, const EmbeddingVector& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.values.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = x.values[static_cast<size_t>(i)];
  ScoreVector s = ScorePlda(model, v);
  s.utterance_id = x.utterance_id;
  return s;
}

int ClassifyPlda(const PldaModel& model, const Eigen::VectorXd& x) {
  ScoreVector s = ScorePlda(model, x);
  int best = 0;
  for (size_t c = 1; c < s.values.size(); ++c)
    if (s.values[c] > s.values[static_cast<size_t>(best)]) best = static_cast<int>(c);
  return best;
}

namespace {
constexpr const char* kPldaMagic = "lidkit-plda";
constexpr int kPldaVersion = 1;

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
    for (int64_t c = 0; c < cols; ++c)
      m(r, c) = ParseDouble(f[static_cast<size_t>(c)], path);
  }
  return m;
}
}  // namespace

void PldaModel::Save(const std::string& path) const {
  std::string out;
  out += kPldaMagic;
  out += ' ';
  out += std::to_string(kPldaVersion);
  out += '\n';
  WriteMatrix(&out, "mu", mu.transpose());
  WriteMatrix(&out, "between", between);
  WriteMatrix(&out, "within", within);
  out += "classes\t" + std::to_string(classes.size()) + '\n';
  for (const auto& cls : classes) {
    out += "class\t" + std::to_string(cls.count);
    for (Eigen::Index i = 0; i < cls.mean.size(); ++i) {
      out += '\t';
      out += FormatFloat(cls.mean(i));
    }
    out += '\n';
  }
  AtomicWriteFile(path, out);
}

PldaModel PldaModel::Load(const std::string& path) {
  std::istringstream in(ReadFileOrThrow(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kPldaMagic) throw Error(path + ": not a PLDA model file");
    if (version != kPldaVersion) throw Error(path + ": unsupported version");
  }
  PldaModel model;
  Eigen::MatrixXd mu_row = ReadMatrix(in, "mu", path);
  if (mu_row.rows() != 1) throw Error(path + ": mu must be a single row");
  model.mu = mu_row.row(0).transpose();
  model.between = ReadMatrix(in, "between", path);
  model.within = ReadMatrix(in, "within", path);
  if (!std::getline(in, line)) throw Error(path + ": truncated");
  std::vector<std::string> f = SplitTabs(line);
  if (f.size() != 2 || f[0] != "classes") throw Error(path + ": expected classes count");
  auto k = ParseInt(f[1], path);
  const auto dim = model.mu.size();
  for (int64_t c = 0; c < k; ++c) {
    if (!std::getline(in, line)) throw Error(path + ": truncated class stats");
    std::vector<std::string> g = SplitTabs(line);
    if (g.size() != static_cast<size_t>(dim) + 2 || g[0] != "class")
      throw Error(path + ": expected 'class<TAB>count<TAB>mean...'");
    ClassStats cls;
    cls.count = ParseInt(g[1], path);
    if (cls.count < 1) throw Error(path + ": class count must be >= 1");
    cls.mean.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      cls.mean(i) = ParseDouble(g[static_cast<size_t>(i) + 2], path);
    model.classes.push_back(std::move(cls));
  }
  return model;
}

}  // namespace lidkit
