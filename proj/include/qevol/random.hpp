// Copyright 2026 The qevol Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/QR>

#include "qevol/types.hpp"

namespace qevol {

using Seed = std::uint64_t;

// Independent random streams keyed by (seed, index). Shot i of an experiment
// always draws from stream_engine(seed, i), so aggregate counts do not depend
// on the order in which shots are evaluated.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// SplitMix64 sequence. One stream is opened per shot, so seeding has to be
// cheap; mt19937_64 spends most of a shot initializing its state.
class StreamEngine {
 public:
  using result_type = std::uint64_t;
  explicit StreamEngine(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() {
    const std::uint64_t out = splitmix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

 private:
  std::uint64_t state_;
};

inline StreamEngine stream_engine(Seed seed, std::uint64_t index,
                                  std::uint64_t lane = 0) {
  return StreamEngine(
      splitmix64(splitmix64(splitmix64(seed) ^ index) ^ (lane + 1)));
}

template <typename Engine>
double uniform01(Engine& engine) {
  // 53 random bits, [0, 1)
  return double(engine() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw from a (possibly slightly unnormalized) distribution.
template <typename Real, typename Engine>
std::size_t sample_index(std::span<const Real> probabilities, Engine& engine) {
  Real total = 0;
  for (const Real p : probabilities) total += p;
  const Real target = Real(uniform01(engine)) * total;
  Real acc = 0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= Real(0)) continue;
    acc += probabilities[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

template <typename Real>
std::vector<std::uint64_t> sample_counts(std::span<const Real> probabilities,
                                         std::uint64_t shots, Seed seed) {
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    auto engine = stream_engine(seed, s);
    ++counts[sample_index(probabilities, engine)];
  }
  return counts;
}

template <typename Real, typename Engine>
MatrixX<Real> ginibre(Eigen::Index rows, Eigen::Index cols, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixX<Real> g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Real re = Real(normal(engine));
      const Real im = Real(normal(engine));
      g(i, j) = Complex<Real>(re, im);
    }
  }
  return g;
}

// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
// diagonal divided out.
template <typename Real = double>
MatrixX<Real> random_unitary(Eigen::Index d, Seed seed) {
  auto engine = stream_engine(seed, 0, 0x51a7);
  const MatrixX<Real> g = ginibre<Real>(d, d, engine);
  Eigen::HouseholderQR<MatrixX<Real>> qr(g);
  MatrixX<Real> q = qr.householderQ();
  const MatrixX<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex<Real> diag = r(j, j);
    const Real mag = std::abs(diag);
    if (mag > Real(0)) q.col(j) *= diag / mag;
  }
  return q;
}

// Uniformly random unit vector.
template <typename Real = double>
VectorX<Real> random_state(Eigen::Index d, Seed seed) {
  auto engine = stream_engine(seed, 0, 0x57a7e);
  VectorX<Real> v = ginibre<Real>(d, 1, engine).col(0);
  v.normalize();
  return v;
}

// Random probability vector with strictly positive entries.
template <typename Real = double>
std::vector<Real> random_probabilities(std::size_t n, Seed seed) {
  auto engine = stream_engine(seed, 0, 0x9b0b);
  std::exponential_distribution<double> expo(1.0);
  std::vector<Real> p(n);
  Real total = 0;
  for (auto& x : p) {
    x = Real(expo(engine)) + Real(1e-3);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace qevol
