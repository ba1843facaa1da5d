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
// Brute-force 3x3 Gaussian classifier used to cross-check PLDA scoring.
// Hand-written determinant/adjugate linear algebra on plain arrays, sharing
// no code with the library implementation.

#ifndef LIDKIT_TESTS_GAUSSIAN_ORACLE_HPP
#define LIDKIT_TESTS_GAUSSIAN_ORACLE_HPP

#include <array>
#include <cmath>
#include <vector>

namespace lidkit::testing {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

inline Mat3 Mul3(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      out[i][j] = s;
    }
  return out;
}

inline Vec3 MulVec3(const Mat3& a, const Vec3& v) {
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) out[i] += a[i][k] * v[k];
  return out;
}

inline Mat3 Add3(const Mat3& a, const Mat3& b, double bscale = 1.0) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a[i][j] + bscale * b[i][j];
  return out;
}

inline double Det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline Mat3 Inv3(const Mat3& m) {
  double det = Det3(m);
  Mat3 out{};
  out[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  out[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  out[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  out[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  out[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  out[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  out[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  out[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  out[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return out;
}

struct OracleGaussianClass {
  long long count = 0;
  Vec3 mean{};
};

/// Log posterior-predictive density per class, evaluated from scratch:
/// for class c, y | data ~ N(w_c, phi_c) with
///   phi_c = B - B (B + W/n)^{-1} B,  w_c = B (B + W/n)^{-1} (m_c - mu),
/// and x | class c ~ N(mu + w_c, W + phi_c).
inline std::vector<double> OraclePldaScores(const Mat3& between, const Mat3& within,
                                            const Vec3& mu,
                                            const std::vector<OracleGaussianClass>& classes,
                                            const Vec3& x) {
  std::vector<double> scores;
  for (const auto& cls : classes) {
    Mat3 marginal = Add3(between, within, 1.0 / static_cast<double>(cls.count));
    Mat3 gain = Mul3(between, Inv3(marginal));
    Mat3 phi = Add3(between, Mul3(gain, between), -1.0);
    Vec3 m_tilde{};
    for (int i = 0; i < 3; ++i) m_tilde[i] = cls.mean[i] - mu[i];
    Vec3 w = MulVec3(gain, m_tilde);

    Mat3 predictive = Add3(within, phi);
    Mat3 inv_predictive = Inv3(predictive);
    Vec3 centered{};
    for (int i = 0; i < 3; ++i) centered[i] = x[i] - (mu[i] + w[i]);
    Vec3 solved = MulVec3(inv_predictive, centered);
    double quad = 0.0;
    for (int i = 0; i < 3; ++i) quad += centered[i] * solved[i];
    scores.push_back(-0.5 * (std::log(Det3(predictive)) +
                             3.0 * std::log(2.0 * M_PI) + quad));
  }
  return scores;
}

inline int OracleArgmax(const std::vector<double>& scores) {
  int best = 0;
  for (size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[static_cast<size_t>(best)]) best = static_cast<int>(i);
  return best;
}

}  // namespace lidkit::testing

#endif  // LIDKIT_TESTS_GAUSSIAN_ORACLE_HPP
