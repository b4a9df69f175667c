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

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qevol/types.hpp"

namespace qevol {

template <typename DerivedA, typename DerivedB>
auto trace_inner(const Eigen::MatrixBase<DerivedA>& a,
                 const Eigen::MatrixBase<DerivedB>& b) {
  // tr(a^dagger b)
  return (a.conjugate().cwiseProduct(b)).sum();
}

template <typename Real>
MatrixX<Real> kron(const MatrixX<Real>& a, const MatrixX<Real>& b) {
  MatrixX<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
VectorX<Real> kron(const VectorX<Real>& a, const VectorX<Real>& b) {
  VectorX<Real> out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

template <typename Real>
MatrixX<Real> identity(Eigen::Index d) {
  return MatrixX<Real>::Identity(d, d);
}

template <typename Real>
Real unitarity_defect(const MatrixX<Real>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<Real>::infinity();
  return (m.adjoint() * m - MatrixX<Real>::Identity(m.rows(), m.cols()))
      .cwiseAbs()
      .maxCoeff();
}

template <typename Real>
bool is_unitary(const MatrixX<Real>& m,
                Real tol = Tolerance<Real>::structural) {
  return m.rows() > 0 && unitarity_defect(m) <= tol;
}

template <typename Real>
Real frobenius_distance(const MatrixX<Real>& a, const MatrixX<Real>& b) {
  return (a - b).norm();
}

// Row-major flattening: vec(M)[a * d + b] = M(a, b). With this convention
// (M (x) I)|psi+> = vec(M) / sqrt(d) for psi+ = sum_j |jj> / sqrt(d).
template <typename Real>
VectorX<Real> vec_rows(const MatrixX<Real>& m) {
  VectorX<Real> v(m.size());
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) v(a * m.cols() + b) = m(a, b);
  }
  return v;
}

template <typename Real>
MatrixX<Real> unvec_rows(const VectorX<Real>& v, Eigen::Index rows,
                         Eigen::Index cols) {
  detail::require_dims(v.size() == rows * cols, "unvec_rows: size mismatch");
  MatrixX<Real> m(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = v(a * cols + b);
  }
  return m;
}

// (1/sqrt(d)) sum_j |j>|j>
template <typename Real>
VectorX<Real> max_entangled(Eigen::Index d) {
  VectorX<Real> v = VectorX<Real>::Zero(d * d);
  const Real amp = Real(1) / std::sqrt(Real(d));
  for (Eigen::Index j = 0; j < d; ++j) v(j * d + j) = amp;
  return v;
}

// Columns are the Fourier vectors f_k(j) = omega^{jk} / sqrt(n).
template <typename Real>
MatrixX<Real> fourier_matrix(Eigen::Index n) {
  MatrixX<Real> f(n, n);
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Real angle = two_pi * Real((j * k) % n) / Real(n);
      f(j, k) = std::polar(Real(1) / std::sqrt(Real(n)), angle);
    }
  }
  return f;
}

// Partial traces of an operator on C^{dA} (x) C^{dB}.
template <typename Real>
MatrixX<Real> trace_out_second(const MatrixX<Real>& rho, Eigen::Index d_a,
                               Eigen::Index d_b) {
  detail::require_dims(rho.rows() == d_a * d_b && rho.cols() == d_a * d_b,
                       "trace_out_second: operator does not match dims");
  MatrixX<Real> out = MatrixX<Real>::Zero(d_a, d_a);
  for (Eigen::Index i = 0; i < d_a; ++i) {
    for (Eigen::Index j = 0; j < d_a; ++j) {
      Complex<Real> s = 0;
      for (Eigen::Index b = 0; b < d_b; ++b) s += rho(i * d_b + b, j * d_b + b);
      out(i, j) = s;
    }
  }
  return out;
}

template <typename Real>
MatrixX<Real> trace_out_first(const MatrixX<Real>& rho, Eigen::Index d_a,
                              Eigen::Index d_b) {
  detail::require_dims(rho.rows() == d_a * d_b && rho.cols() == d_a * d_b,
                       "trace_out_first: operator does not match dims");
  MatrixX<Real> out = MatrixX<Real>::Zero(d_b, d_b);
  for (Eigen::Index i = 0; i < d_b; ++i) {
    for (Eigen::Index j = 0; j < d_b; ++j) {
      Complex<Real> s = 0;
      for (Eigen::Index a = 0; a < d_a; ++a) s += rho(a * d_b + i, a * d_b + j);
      out(i, j) = s;
    }
  }
  return out;
}

// Shannon entropy in bits; zero entries contribute nothing.
template <typename Range>
auto shannon_entropy_bits(const Range& probabilities) {
  using Real = std::remove_cvref_t<decltype(*std::begin(probabilities))>;
  Real h = 0;
  for (const Real p : probabilities) {
    if (p > Real(0)) h -= p * std::log2(p);
  }
  return h;
}

template <typename Real>
Real von_neumann_entropy_bits(const MatrixX<Real>& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(rho, Eigen::EigenvaluesOnly);
  std::vector<Real> p;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Real v = es.eigenvalues()(i);
    if (v > Tolerance<Real>::support) p.push_back(v);
  }
  return shannon_entropy_bits(p);
}

// Entanglement entropy (bits) of a pure state on C^{dA} (x) C^{dB}.
template <typename Real>
Real entanglement_entropy_bits(const VectorX<Real>& psi, Eigen::Index d_a,
                               Eigen::Index d_b) {
  detail::require_dims(psi.size() == d_a * d_b,
                       "entanglement_entropy_bits: state does not match dims");
  const MatrixX<Real> m = unvec_rows<Real>(psi, d_a, d_b);
  Eigen::JacobiSVD<MatrixX<Real>> svd(m);
  std::vector<Real> p;
  const Real norm2 = psi.squaredNorm();
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const Real s = svd.singularValues()(i);
    if (s * s / norm2 > Tolerance<Real>::support) p.push_back(s * s / norm2);
  }
  return shannon_entropy_bits(p);
}

// Rotates the phase of v so that its first entry of significant magnitude is
// real and positive.
template <typename Real>
void fix_phase(VectorX<Real>& v) {
  const Real scale = v.cwiseAbs().maxCoeff();
  if (scale == Real(0)) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > Real(1e-3) * scale) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

// Given orthonormal columns spanning a subspace, returns a basis of the same
// subspace that depends only on the subspace: the projections of e_0, e_1, ...
// are orthonormalized in order and each vector is phase-fixed.
template <typename Real>
MatrixX<Real> canonical_subspace_basis(const MatrixX<Real>& span) {
  const Eigen::Index n = span.rows();
  const Eigen::Index k = span.cols();
  MatrixX<Real> out(n, k);
  Eigen::Index found = 0;
  // Some residual always exceeds this until the basis is complete.
  const Real keep = Real(0.5) / std::sqrt(Real(n));
  for (Eigen::Index j = 0; j < n && found < k; ++j) {
    // P e_j = span * span^dagger e_j
    VectorX<Real> v = span * span.row(j).adjoint();
    for (Eigen::Index c = 0; c < found; ++c) {
      v -= out.col(c) * out.col(c).dot(v);
    }
    const Real norm = v.norm();
    if (norm > keep) {
      v /= norm;
      fix_phase(v);
      out.col(found++) = v;
    }
  }
  detail::require_dims(found == k, "canonical_subspace_basis: rank deficit");
  return out;
}

// Hermitian eigendecomposition with eigenvalues sorted descending and a
// deterministic eigenbasis inside every degenerate cluster.
template <typename Real>
struct SortedEigen {
  RealVectorX<Real> values;
  MatrixX<Real> vectors;
};

template <typename Real>
SortedEigen<Real> sorted_hermitian_eigen(const MatrixX<Real>& h,
                                         Real cluster_tol = Real(1e-9)) {
  const MatrixX<Real> sym = (h + h.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(sym);
  const Eigen::Index n = sym.rows();
  SortedEigen<Real> out{RealVectorX<Real>(n), MatrixX<Real>(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n &&
           std::abs(out.values(stop) - out.values(start)) <= cluster_tol) {
      ++stop;
    }
    const Eigen::Index width = stop - start;
    out.vectors.middleCols(start, width) = canonical_subspace_basis<Real>(
        out.vectors.middleCols(start, width));
    start = stop;
  }
  return out;
}

template <typename Real>
MatrixX<Real> matrix_power(const MatrixX<Real>& m, int exponent) {
  MatrixX<Real> out = MatrixX<Real>::Identity(m.rows(), m.cols());
  for (int i = 0; i < exponent; ++i) out = out * m;
  return out;
}

// exp(-i * theta * h) for Hermitian h.
template <typename Real>
MatrixX<Real> exp_i_hermitian(const MatrixX<Real>& h, Real theta) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(h);
  VectorX<Real> phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::polar(Real(1), -theta * es.eigenvalues()(i));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qevol
