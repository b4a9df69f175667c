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

#include <vector>

#include "qevol/linalg.hpp"
#include "qevol/operator_basis.hpp"
#include "qevol/types.hpp"

namespace qevol {

/// Trace-preserving completely positive map rho -> sum_i M_i rho M_i^dagger.
template <typename Real>
class KrausMap {
 public:
  explicit KrausMap(std::vector<MatrixX<Real>> operators,
                    Real tol = Tolerance<Real>::channel)
      : operators_(std::move(operators)) {
    if (operators_.empty()) throw InvalidArgument("KrausMap: no operators");
    dim_ = operators_.front().rows();
    for (const auto& m : operators_) {
      if (m.rows() != dim_ || m.cols() != dim_) {
        throw DimensionMismatch("KrausMap: operators must all be d x d");
      }
    }
    const Real defect =
        (completeness() - MatrixX<Real>::Identity(dim_, dim_))
            .cwiseAbs()
            .maxCoeff();
    if (defect > tol) {
      throw InvalidArgument("KrausMap: sum M^dagger M != I (not trace preserving)");
    }
  }

  static KrausMap unitary(const UnitaryOperator<Real>& u) {
    return KrausMap({u.matrix()});
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return operators_.size(); }
  const std::vector<MatrixX<Real>>& operators() const { return operators_; }
  const MatrixX<Real>& operator[](std::size_t i) const { return operators_[i]; }

  MatrixX<Real> completeness() const {
    MatrixX<Real> s = MatrixX<Real>::Zero(dim_, dim_);
    for (const auto& m : operators_) s += m.adjoint() * m;
    return s;
  }

 private:
  std::vector<MatrixX<Real>> operators_;
  Eigen::Index dim_ = 0;
};

using KrausMapd = KrausMap<double>;

/// (E (x) id)(|psi+><psi+|) with psi+ = sum_j |jj> / sqrt(d); the map acts on
/// the first factor.
template <typename Real>
struct ChoiState {
  Eigen::Index dim = 0;
  MatrixX<Real> matrix;

  // Checks Hermiticity, positivity, unit trace and tr_1 = I/d.
  bool is_valid() const {
    const Eigen::Index n = dim * dim;
    if (matrix.rows() != n || matrix.cols() != n) return false;
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() >
        Tolerance<Real>::structural) {
      return false;
    }
    if (std::abs(matrix.trace() - Complex<Real>(1)) > Tolerance<Real>::channel) {
      return false;
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(matrix,
                                                    Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -Tolerance<Real>::channel) return false;
    const MatrixX<Real> marginal = trace_out_first<Real>(matrix, dim, dim);
    return (marginal - MatrixX<Real>::Identity(dim, dim) / Real(dim))
               .cwiseAbs()
               .maxCoeff() <= Tolerance<Real>::channel;
  }
};

/// Diagonal Kraus representation: tr(M_mu^dagger M_nu) = d p_mu delta_mu_nu,
/// p descending and restricted to the Choi support.
template <typename Real>
struct CanonicalKraus {
  Eigen::Index dim = 0;
  std::vector<Real> probabilities;
  std::vector<MatrixX<Real>> operators;

  std::size_t support_size() const { return probabilities.size(); }
  KrausMap<Real> to_map() const { return KrausMap<Real>(operators); }
};

/// Stinespring dilation on system (x) ancilla (index s * a + c). The ancilla
/// starts in |0_C> = |ancilla_initial>.
template <typename Real>
struct StinespringDilation {
  Eigen::Index system_dim = 0;
  Eigen::Index ancilla_dim = 0;
  MatrixX<Real> global;
  Eigen::Index ancilla_initial = 0;

  // The isometry |psi> -> U |psi>|0_C>, as a (d a) x d matrix.
  MatrixX<Real> isometry() const {
    MatrixX<Real> w(system_dim * ancilla_dim, system_dim);
    for (Eigen::Index s = 0; s < system_dim; ++s) {
      w.col(s) = global.col(s * ancilla_dim + ancilla_initial);
    }
    return w;
  }

  // tr_C U (rho (x) |0_C><0_C|) U^dagger
  MatrixX<Real> apply(const MatrixX<Real>& rho) const {
    detail::require_dims(rho.rows() == system_dim && rho.cols() == system_dim,
                         "StinespringDilation::apply: dimension mismatch");
    const MatrixX<Real> w = isometry();
    return trace_out_second<Real>(w * rho * w.adjoint(), system_dim,
                                  ancilla_dim);
  }
};

template <typename Real>
MatrixX<Real> apply(const KrausMap<Real>& map, const MatrixX<Real>& rho) {
  detail::require_dims(rho.rows() == map.dim() && rho.cols() == map.dim(),
                       "apply: density matrix and map dimensions differ");
  if (std::abs(rho.trace() - Complex<Real>(1)) > Tolerance<Real>::channel ||
      (rho - rho.adjoint()).cwiseAbs().maxCoeff() > Tolerance<Real>::channel) {
    throw InvalidArgument("apply: rho must be Hermitian with unit trace");
  }
  MatrixX<Real> out = MatrixX<Real>::Zero(map.dim(), map.dim());
  for (const auto& m : map.operators()) out += m * rho * m.adjoint();
  return out;
}

template <typename Real>
ChoiState<Real> choi(const KrausMap<Real>& map) {
  const Eigen::Index d = map.dim();
  ChoiState<Real> out{d, MatrixX<Real>::Zero(d * d, d * d)};
  const Real scale = Real(1) / std::sqrt(Real(d));
  for (const auto& m : map.operators()) {
    const VectorX<Real> v = vec_rows<Real>(m) * scale;
    out.matrix += v * v.adjoint();
  }
  return out;
}

/// Eigendecomposes the Choi state. Eigenvalues at or below 1e-12 are dropped;
/// inside a degenerate eigenspace the operators come from the deterministic
/// basis of canonical_subspace_basis.
template <typename Real>
CanonicalKraus<Real> canonical_kraus(const KrausMap<Real>& map) {
  const Eigen::Index d = map.dim();
  const auto eig = sorted_hermitian_eigen<Real>(choi(map).matrix);
  CanonicalKraus<Real> out;
  out.dim = d;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const Real p = eig.values(i);
    if (p <= Tolerance<Real>::support) break;
    out.probabilities.push_back(p);
    out.operators.push_back(std::sqrt(Real(d) * p) *
                            unvec_rows<Real>(eig.vectors.col(i), d, d));
  }
  return out;
}

/// Shannon entropy (bits) of the canonical probabilities.
template <typename Real>
Real entropy(const KrausMap<Real>& map) {
  return shannon_entropy_bits(canonical_kraus(map).probabilities);
}

/// N_j = sum_i M_i u(i, j). The map is padded with zero operators up to
/// u.rows(); u must have orthonormal rows (u u^dagger = I).
template <typename Real>
KrausMap<Real> kraus_rotation(const KrausMap<Real>& map,
                              const MatrixX<Real>& u) {
  if (u.rows() < Eigen::Index(map.size()) || u.cols() < u.rows()) {
    throw DimensionMismatch(
        "kraus_rotation: u must be k' x k'' with k <= k' <= k''");
  }
  const MatrixX<Real> gram = u * u.adjoint();
  if ((gram - MatrixX<Real>::Identity(u.rows(), u.rows()))
          .cwiseAbs()
          .maxCoeff() > Tolerance<Real>::structural) {
    throw NotUnitary("kraus_rotation: u is not an isometry (u u^dagger != I)");
  }
  const Eigen::Index d = map.dim();
  std::vector<MatrixX<Real>> rotated;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    MatrixX<Real> n = MatrixX<Real>::Zero(d, d);
    for (std::size_t i = 0; i < map.size(); ++i) {
      n += map[i] * u(Eigen::Index(i), j);
    }
    rotated.push_back(std::move(n));
  }
  return KrausMap<Real>(std::move(rotated));
}

template <typename Real>
Real choi_distance(const KrausMap<Real>& a, const KrausMap<Real>& b) {
  detail::require_dims(a.dim() == b.dim(), "choi_distance: dimension mismatch");
  return (choi(a).matrix - choi(b).matrix).norm();
}

/// True iff the Choi states agree within tol (Frobenius norm).
template <typename Real>
bool equivalent(const KrausMap<Real>& a, const KrausMap<Real>& b,
                Real tol = Tolerance<Real>::channel) {
  return choi_distance(a, b) <= tol;
}

/// Ancilla dimension equals the number of Kraus operators. Columns (s, 0) of
/// the global unitary hold sum_i M_i|s>|i>; the remaining columns complete it
/// by orthonormalizing e_0, e_1, ... in order.
template <typename Real>
StinespringDilation<Real> stinespring(const KrausMap<Real>& map) {
  const Eigen::Index d = map.dim();
  const auto a = Eigen::Index(map.size());
  const Eigen::Index n = d * a;
  MatrixX<Real> w = MatrixX<Real>::Zero(n, d);
  for (Eigen::Index i = 0; i < a; ++i) {
    for (Eigen::Index sp = 0; sp < d; ++sp) {
      for (Eigen::Index s = 0; s < d; ++s) {
        w(sp * a + i, s) = map[std::size_t(i)](sp, s);
      }
    }
  }
  std::vector<VectorX<Real>> completion;
  MatrixX<Real> found = w;
  for (Eigen::Index j = 0; j < n && Eigen::Index(completion.size()) < n - d;
       ++j) {
    VectorX<Real> v = VectorX<Real>::Unit(n, j);
    // Two passes of Gram-Schmidt for stability.
    for (int pass = 0; pass < 2; ++pass) {
      v -= found * (found.adjoint() * v);
    }
    const Real norm = v.norm();
    if (norm > Real(1e-6)) {
      v /= norm;
      completion.push_back(v);
      found.conservativeResize(Eigen::NoChange, found.cols() + 1);
      found.col(found.cols() - 1) = v;
    }
  }
  StinespringDilation<Real> out{d, a, MatrixX<Real>(n, n), 0};
  std::size_t next = 0;
  for (Eigen::Index s = 0; s < d; ++s) {
    for (Eigen::Index c = 0; c < a; ++c) {
      out.global.col(s * a + c) = c == 0 ? VectorX<Real>(w.col(s))
                                         : completion[next++];
    }
  }
  if (!is_unitary<Real>(out.global)) {
    throw NotUnitary("stinespring: completion failed to produce a unitary");
  }
  return out;
}

/// M_i = (I (x) <b_i|) U (I (x) |0_C>) for the orthonormal ancilla basis whose
/// vectors are the columns of `ancilla_basis`.
template <typename Real>
KrausMap<Real> kraus_from_ancilla_basis(const StinespringDilation<Real>& dil,
                                        const MatrixX<Real>& ancilla_basis) {
  const Eigen::Index a = dil.ancilla_dim;
  detail::require_dims(ancilla_basis.rows() == a && ancilla_basis.cols() == a,
                       "kraus_from_ancilla_basis: basis must be a x a");
  if (!is_unitary<Real>(ancilla_basis)) {
    throw InvalidArgument("kraus_from_ancilla_basis: basis is not orthonormal");
  }
  const Eigen::Index d = dil.system_dim;
  const MatrixX<Real> w = dil.isometry();
  std::vector<MatrixX<Real>> ops;
  for (Eigen::Index i = 0; i < a; ++i) {
    MatrixX<Real> m = MatrixX<Real>::Zero(d, d);
    for (Eigen::Index sp = 0; sp < d; ++sp) {
      for (Eigen::Index s = 0; s < d; ++s) {
        Complex<Real> acc = 0;
        for (Eigen::Index c = 0; c < a; ++c) {
          acc += std::conj(ancilla_basis(c, i)) * w(sp * a + c, s);
        }
        m(sp, s) = acc;
      }
    }
    ops.push_back(std::move(m));
  }
  return KrausMap<Real>(std::move(ops));
}

}  // namespace qevol
