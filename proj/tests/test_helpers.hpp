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

#ifndef LIDKIT_TESTS_TEST_HELPERS_HPP
#define LIDKIT_TESTS_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace lidkit::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      std::filesystem::path candidate =
          base / ("lidkit-" + tag + "-" + std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create a temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string File(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double Gaussian(std::mt19937_64& rng) {
  // Box-Muller; independent of library distributions so sequences are stable.
  double u1 = Uniform01(rng);
  double u2 = Uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Eigen::VectorXd GaussianVector(std::mt19937_64& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Gaussian(rng);
  return v;
}

/// Sample from N(mean, cov) via the Cholesky factor.
inline Eigen::VectorXd GaussianSample(std::mt19937_64& rng, const Eigen::VectorXd& mean,
                                      const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  return mean + llt.matrixL() * GaussianVector(rng, static_cast<int>(mean.size()));
}

}  // namespace lidkit::testing

#endif  // LIDKIT_TESTS_TEST_HELPERS_HPP
