// Copyright 2026 The Fairleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRLEAK_MATRIX_HPP
#define FAIRLEAK_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <vector>

namespace fairleak {

// Dense row-major matrix of doubles. Deliberately minimal; all the models
// in this project are small enough that a flat vector wins over a linear
// algebra dependency.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  static Matrix from_column(const std::vector<double>& col) {
    Matrix m(col.size(), 1);
    for (std::size_t i = 0; i < col.size(); ++i) m(i, 0) = col[i];
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Seeded RNG with explicit variate generation, so that identical seeds give
// identical streams regardless of standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // splitmix64 warm-up avoids correlated low-entropy seeds.
    next_raw();
    next_raw();
  }

  std::uint64_t next_raw() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes two uniforms per pair, caches the second.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Exponential(1) variate.
  double exponential() {
    double u = 0.0;
    do {
      u = uniform();
    } while (u <= 0.0);
    return -std::log(u);
  }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Fisher-Yates shuffle, deterministic given the stream position.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Single --seed fan-out: every consumer derives its stream from the user
// seed plus a fixed role offset, so one flag reproduces a whole pipeline.
namespace seed_role {
inline constexpr std::uint64_t kSplit = 0x01;
inline constexpr std::uint64_t kSynth = 0x02;
inline constexpr std::uint64_t kTargetTrain = 0x03;
inline constexpr std::uint64_t kAttackTrain = 0x04;
inline constexpr std::uint64_t kEgd = 0x05;
inline constexpr std::uint64_t kAdvDebias = 0x06;
inline constexpr std::uint64_t kSample = 0x07;
inline constexpr std::uint64_t kOracle = 0x08;
}  // namespace seed_role

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t role) {
  return base * 0x100000001b3ULL + role;
}

}  // namespace fairleak

#endif  // FAIRLEAK_MATRIX_HPP
