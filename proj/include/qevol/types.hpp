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

#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qevol {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using MatrixX = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using VectorX = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matrixd = MatrixX<double>;
using Vectord = VectorX<double>;
using Complexd = Complex<double>;

// Structural tolerances shared by all modules. Values are fixed for double
// precision and dimensions up to ~64.
template <typename Real>
struct Tolerance {
  // Orthogonality, unitarity, round-trips.
  static constexpr Real structural = Real(1e-10);
  // Trace preservation, positivity of Choi states, fidelities.
  static constexpr Real channel = Real(1e-9);
  // Normalization of pure states.
  static constexpr Real state = Real(1e-12);
  // Eigenvalues below this are outside the support.
  static constexpr Real support = Real(1e-12);
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class NotAnEigenoperator : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A computation would exceed the exact-enumeration caps.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

}  // namespace detail

}  // namespace qevol
