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

#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qevol/linalg.hpp"
#include "qevol/types.hpp"

namespace qevol {

/// A d x d matrix checked to satisfy U^dagger U = I.
template <typename Real>
class UnitaryOperator {
 public:
  explicit UnitaryOperator(MatrixX<Real> m,
                           Real tol = Tolerance<Real>::structural)
      : matrix_(std::move(m)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
      throw DimensionMismatch("UnitaryOperator: matrix must be square");
    }
    if (!is_unitary<Real>(matrix_, tol)) {
      throw NotUnitary("UnitaryOperator: U^dagger U deviates from identity");
    }
  }

  static UnitaryOperator identity(Eigen::Index d) {
    return UnitaryOperator(MatrixX<Real>::Identity(d, d));
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const MatrixX<Real>& matrix() const { return matrix_; }
  UnitaryOperator adjoint() const { return UnitaryOperator(matrix_.adjoint()); }

 private:
  MatrixX<Real> matrix_;
};

using UnitaryOperatord = UnitaryOperator<double>;

enum class BasisKind {
  pauli,    // u0 * (tensor products of I, X, Y, Z)
  weyl,     // u0 * Z^mu X^nu
  rotated,  // sum_nu K(mu, nu) B_nu of another basis
  custom,
};

/// The d x d single-qubit Pauli matrix with index 0..3 = I, X, Y, Z.
template <typename Real = double>
MatrixX<Real> pauli(int index) {
  using C = Complex<Real>;
  MatrixX<Real> m(2, 2);
  switch (index) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default: throw InvalidArgument("pauli: index must be in 0..3");
  }
  return m;
}

/// Ordered set of d^2 operators with tr(B_a^dagger B_b) = d delta_ab.
///
/// Element order is part of the contract: the identity-like element is always
/// index 0. Pauli bases on n qubits use index sum_k p_k 4^(n-1-k) with
/// p_k in {I, X, Y, Z} for qubit k (qubit 0 most significant). Weyl bases use
/// index mu * d + nu for u0 Z^mu X^nu.
template <typename Real>
class OperatorBasis {
 public:
  OperatorBasis(std::vector<MatrixX<Real>> elements,
                std::optional<UnitaryOperator<Real>> u0, BasisKind kind,
                std::vector<std::string> labels,
                std::vector<Eigen::Index> site_dims = {})
      : elements_(std::move(elements)),
        u0_(std::move(u0)),
        kind_(kind),
        labels_(std::move(labels)),
        site_dims_(std::move(site_dims)) {
    if (elements_.empty()) throw InvalidArgument("OperatorBasis: empty");
    dim_ = elements_.front().rows();
    const auto count = static_cast<std::size_t>(dim_ * dim_);
    if (elements_.size() != count) {
      throw DimensionMismatch("OperatorBasis: need d^2 elements");
    }
    for (const auto& e : elements_) {
      if (e.rows() != dim_ || e.cols() != dim_) {
        throw DimensionMismatch("OperatorBasis: element shape mismatch");
      }
    }
    if (labels_.empty()) {
      for (std::size_t i = 0; i < count; ++i) {
        labels_.push_back("B" + std::to_string(i));
      }
    }
    if (labels_.size() != count) {
      throw InvalidArgument("OperatorBasis: label count mismatch");
    }
    const Real defect = (gram_matrix() - MatrixX<Real>::Identity(
                                             Eigen::Index(count),
                                             Eigen::Index(count)))
                            .cwiseAbs()
                            .maxCoeff();
    if (defect > Tolerance<Real>::structural) {
      throw InvalidArgument("OperatorBasis: elements are not trace-orthogonal");
    }
    is_unitary_ = true;
    for (const auto& e : elements_) {
      is_unitary_ = is_unitary_ && qevol::is_unitary<Real>(e);
    }
    if (u0_) {
      if (u0_->dim() != dim_) {
        throw DimensionMismatch("OperatorBasis: u0 dimension mismatch");
      }
      if ((elements_.front() - u0_->matrix()).cwiseAbs().maxCoeff() >
          Tolerance<Real>::structural) {
        throw InvalidArgument("OperatorBasis: element 0 must equal u0");
      }
    }
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const MatrixX<Real>& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<MatrixX<Real>>& elements() const { return elements_; }
  bool is_unitary() const { return is_unitary_; }
  const std::optional<UnitaryOperator<Real>>& u0() const { return u0_; }
  BasisKind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Local dimensions of the product structure (pauli: n twos, weyl: {d}).
  const std::vector<Eigen::Index>& site_dims() const { return site_dims_; }

  // G(a, b) = (1/d) tr(B_a^dagger B_b)
  MatrixX<Real> gram_matrix() const {
    const auto n = Eigen::Index(elements_.size());
    MatrixX<Real> g(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        g(a, b) = trace_inner(elements_[a], elements_[b]) / Real(dim_);
      }
    }
    return g;
  }

 private:
  std::vector<MatrixX<Real>> elements_;
  std::optional<UnitaryOperator<Real>> u0_;
  BasisKind kind_;
  std::vector<std::string> labels_;
  std::vector<Eigen::Index> site_dims_;
  Eigen::Index dim_ = 0;
  bool is_unitary_ = false;
};

using OperatorBasisd = OperatorBasis<double>;

/// Clock and shift operators: Z = sum_j zeta^j |j><j|,
/// X = sum_j |j+1 mod d><j|, zeta = exp(2 pi i / d).
template <typename Real = double>
std::pair<UnitaryOperator<Real>, UnitaryOperator<Real>> clock_shift(
    Eigen::Index d) {
  if (d < 2) throw InvalidArgument("clock_shift: d must be >= 2");
  MatrixX<Real> z = MatrixX<Real>::Zero(d, d);
  MatrixX<Real> x = MatrixX<Real>::Zero(d, d);
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  for (Eigen::Index j = 0; j < d; ++j) {
    z(j, j) = std::polar(Real(1), two_pi * Real(j) / Real(d));
    x((j + 1) % d, j) = Real(1);
  }
  // Exact values at the quarter turns keep d = 2 identical to sigma_z.
  for (Eigen::Index j = 0; j < d; ++j) {
    if ((4 * j) % d == 0) {
      const auto quarter = (4 * j) / d;
      const Complex<Real> exact[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      z(j, j) = exact[quarter % 4];
    }
  }
  return {UnitaryOperator<Real>(z), UnitaryOperator<Real>(x)};
}

namespace detail {

inline std::string pauli_label(std::size_t index, int qubits) {
  static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
  std::string s(static_cast<std::size_t>(qubits), 'I');
  for (int k = qubits - 1; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] = names[index % 4];
    index /= 4;
  }
  return s;
}

template <typename Real>
MatrixX<Real> pauli_string(std::size_t index, int qubits) {
  MatrixX<Real> m = MatrixX<Real>::Identity(1, 1);
  std::vector<int> digits(static_cast<std::size_t>(qubits));
  for (int k = qubits - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = int(index % 4);
    index /= 4;
  }
  for (int digit : digits) m = kron<Real>(m, pauli<Real>(digit));
  return m;
}

inline int qubit_count(Eigen::Index d) {
  int n = 0;
  Eigen::Index v = 1;
  while (v < d) {
    v *= 2;
    ++n;
  }
  if (v != d || d < 2) {
    throw InvalidArgument("pauli_basis: dimension must be a power of 2");
  }
  return n;
}

}  // namespace detail

/// {u0 sigma_a} with sigma_a running over n-qubit Pauli strings, I first.
template <typename Real>
OperatorBasis<Real> pauli_basis(const UnitaryOperator<Real>& u0) {
  const int n = detail::qubit_count(u0.dim());
  std::vector<MatrixX<Real>> elements;
  std::vector<std::string> labels;
  const std::size_t count = std::size_t(1) << (2 * n);
  for (std::size_t a = 0; a < count; ++a) {
    elements.push_back(u0.matrix() * detail::pauli_string<Real>(a, n));
    labels.push_back(detail::pauli_label(a, n));
  }
  return OperatorBasis<Real>(std::move(elements), u0, BasisKind::pauli,
                             std::move(labels),
                             std::vector<Eigen::Index>(std::size_t(n), 2));
}

template <typename Real = double>
OperatorBasis<Real> pauli_basis(int qubits = 1) {
  if (qubits < 1) throw InvalidArgument("pauli_basis: need at least 1 qubit");
  return pauli_basis(
      UnitaryOperator<Real>::identity(Eigen::Index(1) << qubits));
}

/// {u0 Z^mu X^nu}, index mu * d + nu. No phase correction is applied, so for
/// d = 2 the (1,1) element is Z X = i sigma_y.
template <typename Real = double>
OperatorBasis<Real> weyl_basis(
    Eigen::Index d, std::optional<UnitaryOperator<Real>> u0 = std::nullopt) {
  if (d < 2) throw InvalidArgument("weyl_basis: d must be >= 2");
  if (!u0) u0 = UnitaryOperator<Real>::identity(d);
  if (u0->dim() != d) throw DimensionMismatch("weyl_basis: u0 dimension");
  const auto [z, x] = clock_shift<Real>(d);
  std::vector<MatrixX<Real>> elements;
  std::vector<std::string> labels;
  MatrixX<Real> z_pow = MatrixX<Real>::Identity(d, d);
  for (Eigen::Index mu = 0; mu < d; ++mu) {
    MatrixX<Real> x_pow = MatrixX<Real>::Identity(d, d);
    for (Eigen::Index nu = 0; nu < d; ++nu) {
      elements.push_back(u0->matrix() * z_pow * x_pow);
      labels.push_back("(" + std::to_string(mu) + "," + std::to_string(nu) +
                       ")");
      x_pow = x_pow * x.matrix();
    }
    z_pow = z_pow * z.matrix();
  }
  return OperatorBasis<Real>(std::move(elements), u0, BasisKind::weyl,
                             std::move(labels), {d});
}

/// Coefficients C_a = (1/d) tr(B_a^dagger op), indexed like the basis.
template <typename Real>
struct ExpansionCoefficients {
  Eigen::Index dim = 0;
  VectorX<Real> coeffs;

  std::vector<Real> probabilities() const {
    std::vector<Real> p(static_cast<std::size_t>(coeffs.size()));
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
      p[std::size_t(i)] = std::norm(coeffs(i));
    }
    return p;
  }
  Real squared_norm() const { return coeffs.squaredNorm(); }
};

template <typename Real>
ExpansionCoefficients<Real> expand(const MatrixX<Real>& op,
                                   const OperatorBasis<Real>& basis) {
  detail::require_dims(op.rows() == basis.dim() && op.cols() == basis.dim(),
                       "expand: operator and basis dimensions differ");
  ExpansionCoefficients<Real> out{basis.dim(),
                                  VectorX<Real>(Eigen::Index(basis.size()))};
  for (std::size_t a = 0; a < basis.size(); ++a) {
    out.coeffs(Eigen::Index(a)) = trace_inner(basis[a], op) / Real(basis.dim());
  }
  return out;
}

template <typename Real>
ExpansionCoefficients<Real> expand(const UnitaryOperator<Real>& op,
                                   const OperatorBasis<Real>& basis) {
  return expand(op.matrix(), basis);
}

/// sum_a C_a B_a
template <typename Real>
MatrixX<Real> reconstruct(const ExpansionCoefficients<Real>& c,
                          const OperatorBasis<Real>& basis) {
  detail::require_dims(
      c.dim == basis.dim() && std::size_t(c.coeffs.size()) == basis.size(),
      "reconstruct: coefficients and basis index spaces differ");
  MatrixX<Real> out = MatrixX<Real>::Zero(basis.dim(), basis.dim());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    out += c.coeffs(Eigen::Index(a)) * basis[a];
  }
  return out;
}

/// A unitary K of order d^2 mixing basis elements: A_mu = sum_nu K(mu,nu) B_nu.
template <typename Real>
class BasisRotation {
 public:
  explicit BasisRotation(MatrixX<Real> k) : matrix_(std::move(k)) {
    if (!is_unitary<Real>(matrix_)) {
      throw NotUnitary("BasisRotation: K must be unitary");
    }
  }
  Eigen::Index order() const { return matrix_.rows(); }
  const MatrixX<Real>& matrix() const { return matrix_; }

 private:
  MatrixX<Real> matrix_;
};

/// Rotating by k1 and then by k2 equals rotating once by k2 * k1.
template <typename Real>
OperatorBasis<Real> rotate_basis(const OperatorBasis<Real>& basis,
                                 const BasisRotation<Real>& k) {
  detail::require_dims(k.order() == Eigen::Index(basis.size()),
                       "rotate_basis: K order must equal d^2");
  std::vector<MatrixX<Real>> elements;
  std::vector<std::string> labels;
  for (Eigen::Index mu = 0; mu < k.order(); ++mu) {
    MatrixX<Real> a = MatrixX<Real>::Zero(basis.dim(), basis.dim());
    for (Eigen::Index nu = 0; nu < k.order(); ++nu) {
      a += k.matrix()(mu, nu) * basis[std::size_t(nu)];
    }
    elements.push_back(std::move(a));
    labels.push_back("A" + std::to_string(mu));
  }
  return OperatorBasis<Real>(std::move(elements), std::nullopt,
                             BasisKind::rotated, std::move(labels));
}

}  // namespace qevol
