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

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "qevol/cp_map.hpp"
#include "qevol/linalg.hpp"
#include "qevol/operator_basis.hpp"
#include "qevol/random.hpp"

namespace qevol {

/// Unitary on C^{dA} (x) C^{dB}, A the leading factor.
template <typename Real>
class BipartiteUnitary {
 public:
  BipartiteUnitary(UnitaryOperator<Real> u, Eigen::Index d_a, Eigen::Index d_b)
      : u_(std::move(u)), d_a_(d_a), d_b_(d_b) {
    detail::require_dims(d_a > 0 && d_b > 0 && u_.dim() == d_a * d_b,
                         "BipartiteUnitary: matrix size is not dA * dB");
  }

  static BipartiteUnitary product(const UnitaryOperator<Real>& a,
                                  const UnitaryOperator<Real>& b) {
    return BipartiteUnitary(
        UnitaryOperator<Real>(kron<Real>(a.matrix(), b.matrix())), a.dim(),
        b.dim());
  }

  const UnitaryOperator<Real>& unitary() const { return u_; }
  const MatrixX<Real>& matrix() const { return u_.matrix(); }
  Eigen::Index dim_a() const { return d_a_; }
  Eigen::Index dim_b() const { return d_b_; }

 private:
  UnitaryOperator<Real> u_;
  Eigen::Index d_a_;
  Eigen::Index d_b_;
};

using BipartiteUnitaryd = BipartiteUnitary<double>;

/// Pauli basis when d is a power of two, Weyl basis otherwise.
template <typename Real = double>
OperatorBasis<Real> default_local_basis(Eigen::Index d) {
  if (d >= 2 && std::has_single_bit(std::uint64_t(d))) {
    return pauli_basis(UnitaryOperator<Real>::identity(d));
  }
  return weyl_basis<Real>(d);
}

/// C(mu, nu) = tr((A_mu (x) B_nu)^dagger u) / (dA dB).
template <typename Real>
MatrixX<Real> bipartite_expand(const BipartiteUnitary<Real>& u,
                               const OperatorBasis<Real>& basis_a,
                               const OperatorBasis<Real>& basis_b) {
  detail::require_dims(
      basis_a.dim() == u.dim_a() && basis_b.dim() == u.dim_b(),
      "bipartite_expand: local bases do not match the factor dimensions");
  const Eigen::Index da = u.dim_a();
  const Eigen::Index db = u.dim_b();
  const auto na = Eigen::Index(basis_a.size());
  const auto nb = Eigen::Index(basis_b.size());
  MatrixX<Real> c(na, nb);
  const MatrixX<Real>& m = u.matrix();
  // tr((A (x) B)^dagger m) = sum_{i,j} conj(A(i,j)) tr(B^dagger m_{ij})
  for (Eigen::Index mu = 0; mu < na; ++mu) {
    const MatrixX<Real>& a = basis_a[std::size_t(mu)];
    for (Eigen::Index nu = 0; nu < nb; ++nu) {
      const MatrixX<Real>& b = basis_b[std::size_t(nu)];
      Complex<Real> acc = 0;
      for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
          if (a(i, j) == Complex<Real>(0)) continue;
          acc += std::conj(a(i, j)) *
                 trace_inner(b, m.block(i * db, j * db, db, db));
        }
      }
      c(mu, nu) = acc / Real(da * db);
    }
  }
  return c;
}

/// u = sum_k values(k) A_k (x) B_k with (1/d) tr(A_j^dagger A_k) = delta_jk
/// and likewise for B.
template <typename Real>
struct OperatorSchmidt {
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  RealVectorX<Real> values;
  std::vector<MatrixX<Real>> a_ops;
  std::vector<MatrixX<Real>> b_ops;

  std::size_t rank() const { return a_ops.size(); }

  MatrixX<Real> reconstruct() const {
    MatrixX<Real> out = MatrixX<Real>::Zero(dim_a * dim_b, dim_a * dim_b);
    for (std::size_t k = 0; k < rank(); ++k) {
      out += values(Eigen::Index(k)) * kron<Real>(a_ops[k], b_ops[k]);
    }
    return out;
  }

  // Shannon entropy (bits) of the squared values.
  Real entropy() const {
    std::vector<Real> p;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      p.push_back(values(k) * values(k));
    }
    return shannon_entropy_bits(p);
  }
};

/// SVD of the coefficient matrix. Values at or below 1e-12 are dropped. For
/// repeated values the left singular subspace is replaced by its
/// canonical_subspace_basis and the right vectors follow as C^dagger u / s.
template <typename Real>
OperatorSchmidt<Real> operator_schmidt(const BipartiteUnitary<Real>& u,
                                       const OperatorBasis<Real>& basis_a,
                                       const OperatorBasis<Real>& basis_b) {
  const MatrixX<Real> c = bipartite_expand(u, basis_a, basis_b);
  Eigen::JacobiSVD<MatrixX<Real>> svd(c, Eigen::ComputeFullU);
  const RealVectorX<Real> s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > Tolerance<Real>::support) ++rank;

  MatrixX<Real> left = svd.matrixU().leftCols(rank);
  Eigen::Index start = 0;
  while (start < rank) {
    Eigen::Index stop = start + 1;
    while (stop < rank && std::abs(s(stop) - s(start)) <= Real(1e-9)) ++stop;
    left.middleCols(start, stop - start) =
        canonical_subspace_basis<Real>(left.middleCols(start, stop - start));
    start = stop;
  }

  OperatorSchmidt<Real> out;
  out.dim_a = u.dim_a();
  out.dim_b = u.dim_b();
  out.values = s.head(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const VectorX<Real> right = c.adjoint() * left.col(k) / s(k);
    MatrixX<Real> a = MatrixX<Real>::Zero(u.dim_a(), u.dim_a());
    MatrixX<Real> b = MatrixX<Real>::Zero(u.dim_b(), u.dim_b());
    for (Eigen::Index mu = 0; mu < left.rows(); ++mu) {
      a += left(mu, k) * basis_a[std::size_t(mu)];
    }
    for (Eigen::Index nu = 0; nu < right.size(); ++nu) {
      b += std::conj(right(nu)) * basis_b[std::size_t(nu)];
    }
    out.a_ops.push_back(std::move(a));
    out.b_ops.push_back(std::move(b));
  }
  return out;
}

template <typename Real>
OperatorSchmidt<Real> operator_schmidt(const BipartiteUnitary<Real>& u) {
  return operator_schmidt(u, default_local_basis<Real>(u.dim_a()),
                          default_local_basis<Real>(u.dim_b()));
}

/// S_U in bits.
template <typename Real>
Real interaction_entanglement(const BipartiteUnitary<Real>& u) {
  return operator_schmidt(u).entropy();
}

enum class Side { first, second };

struct MaximallyMixed {};

/// Input on the traced side: a pure state (default |0>) or the maximally
/// mixed state realized as half of psi+ with a reference.
template <typename Real>
using TracedInput = std::variant<std::monostate, VectorX<Real>, MaximallyMixed>;

/// Kraus operators of the map that u induces on `kept` when the other side
/// starts in `input` and is discarded. Pure input phi gives
/// M_j = <j|u|phi>; the maximally mixed input gives
/// M_{j,r} = <j|u|r> / sqrt(d_other).
template <typename Real>
KrausMap<Real> induced_local_map(const BipartiteUnitary<Real>& u, Side kept,
                                 const std::type_identity_t<TracedInput<Real>>& input = {}) {
  const Eigen::Index da = u.dim_a();
  const Eigen::Index db = u.dim_b();
  const Eigen::Index dk = kept == Side::first ? da : db;
  const Eigen::Index dt = kept == Side::first ? db : da;
  const MatrixX<Real>& m = u.matrix();

  // <j|_t u |x>_t as a dk x dk operator on the kept factor.
  auto block = [&](Eigen::Index j, const VectorX<Real>& x) {
    MatrixX<Real> out = MatrixX<Real>::Zero(dk, dk);
    for (Eigen::Index p = 0; p < dk; ++p) {
      for (Eigen::Index q = 0; q < dk; ++q) {
        Complex<Real> acc = 0;
        for (Eigen::Index r = 0; r < dt; ++r) {
          if (x(r) == Complex<Real>(0)) continue;
          const Eigen::Index row = kept == Side::first ? p * db + j : j * db + p;
          const Eigen::Index col = kept == Side::first ? q * db + r : r * db + q;
          acc += m(row, col) * x(r);
        }
        out(p, q) = acc;
      }
    }
    return out;
  };

  std::vector<MatrixX<Real>> ops;
  if (std::holds_alternative<MaximallyMixed>(input)) {
    const Real scale = Real(1) / std::sqrt(Real(dt));
    for (Eigen::Index j = 0; j < dt; ++j) {
      for (Eigen::Index r = 0; r < dt; ++r) {
        ops.push_back(block(j, VectorX<Real>::Unit(dt, r)) * scale);
      }
    }
  } else {
    VectorX<Real> phi = VectorX<Real>::Unit(dt, 0);
    if (const auto* v = std::get_if<VectorX<Real>>(&input)) {
      detail::require_dims(v->size() == dt,
                           "induced_local_map: traced-side state dimension");
      if (std::abs(v->norm() - Real(1)) > Tolerance<Real>::state) {
        throw InvalidArgument("induced_local_map: traced-side state not normalized");
      }
      phi = *v;
    }
    for (Eigen::Index j = 0; j < dt; ++j) ops.push_back(block(j, phi));
  }
  return KrausMap<Real>(std::move(ops));
}

// ---------------------------------------------------------------------------
// Concentration of n copies of alpha I (x) I + beta X (x) X

enum class ConcentrationMode { exact_matrix, combinatorial };

template <typename Real>
struct ConcentrationRecord {
  int n = 0;
  // Number of identity factors.
  int k = 0;
  // C(n, k) equally weighted X_S (x) X_S terms, |S| = n - k.
  std::uint64_t term_count = 0;
  Real probability = 0;
  // Eigenvalue 2k - n of the collective correlation observable.
  int eigenvalue = 0;
};

template <typename Real>
struct ConcentrationResult {
  int n = 0;
  Complex<Real> alpha;
  Complex<Real> beta;
  ConcentrationMode mode = ConcentrationMode::combinatorial;
  // Ordered k = n, n-1, ..., 0.
  std::vector<ConcentrationRecord<Real>> distribution;
  ConcentrationRecord<Real> sample;
  // Exact mode: simulated sector probabilities, max |simulated - formula|,
  // whether every sector holds C(n,k) equal-magnitude terms, and the
  // entanglement (bits) the sector operator creates from |0...0>.
  std::vector<Real> simulated;
  Real max_deviation = 0;
  bool equal_weights = true;
  std::vector<Real> sector_entanglement;
};

namespace detail {

inline constexpr int max_exact_concentration_n = 4;
inline constexpr int max_combinatorial_n = 64;

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n || n > max_combinatorial_n) {
    throw InvalidArgument("binomial: argument out of range");
  }
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 65>, 65> t{};
    for (int i = 0; i <= 64; ++i) {
      t[std::size_t(i)][0] = 1;
      for (int j = 1; j <= i; ++j) {
        t[std::size_t(i)][std::size_t(j)] =
            t[std::size_t(i - 1)][std::size_t(j - 1)] +
            (j < i ? t[std::size_t(i - 1)][std::size_t(j)] : 0);
      }
    }
    return t;
  }();
  return table[std::size_t(n)][std::size_t(k)];
}

// P(k) = C(n,k) a2^k (1 - a2)^(n-k) for k = n .. 0, with a2 = |alpha|^2.
template <typename Real>
std::vector<long double> sector_probabilities(int n, long double a2) {
  std::vector<long double> p;
  for (int k = n; k >= 0; --k) {
    p.push_back((long double)binomial(n, k) * std::pow(a2, (long double)k) *
                std::pow(1.0L - a2, (long double)(n - k)));
  }
  return p;
}

template <typename Real>
void check_concentration_args(int n, Real a2) {
  if (n < 1) throw InvalidArgument("concentrate: n must be positive");
  if (n > max_combinatorial_n) {
    throw CapacityExceeded("concentrate: combinatorial mode needs n <= 64");
  }
  if (!(a2 >= Real(0) && a2 <= Real(1) + Real(1e-10))) {
    throw InvalidArgument("concentrate: |alpha|^2 must lie in [0, 1]");
  }
}

}  // namespace detail

/// sum_k P(k) log2 C(n, k)
template <typename Real>
Real concentration_yield(int n, Real alpha) {
  const Real a2 = alpha * alpha;
  detail::check_concentration_args(n, a2);
  const auto p = detail::sector_probabilities<Real>(n, std::min(a2, Real(1)));
  long double y = 0;
  for (int idx = 0; idx <= n; ++idx) {
    const int k = n - idx;
    y += p[std::size_t(idx)] * std::log2((long double)detail::binomial(n, k));
  }
  return Real(y);
}

/// log2 of the expected term count, log2 sum_k P(k) C(n, k).
template <typename Real>
Real log2_expected_term_count(int n, Real alpha) {
  const Real a2 = alpha * alpha;
  detail::check_concentration_args(n, a2);
  const auto p = detail::sector_probabilities<Real>(n, std::min(a2, Real(1)));
  long double e = 0;
  for (int idx = 0; idx <= n; ++idx) {
    e += p[std::size_t(idx)] * (long double)detail::binomial(n, n - idx);
  }
  return Real(std::log2(e));
}

/// The operator prod_i (alpha I + beta X_{I_i} X_{II_i}) on 2n qubits ordered
/// I_1 .. I_n, II_1 .. II_n (first qubit most significant).
template <typename Real>
MatrixX<Real> concentration_operator(int n, Complex<Real> alpha,
                                     Complex<Real> beta) {
  if (n < 1 || n > detail::max_exact_concentration_n) {
    throw CapacityExceeded("concentrate: exact-matrix mode needs n <= 4");
  }
  const Eigen::Index dim = Eigen::Index(1) << (2 * n);
  MatrixX<Real> o = MatrixX<Real>::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s) {
      // bit i of s flips qubits I_i and II_i
      std::uint64_t mask = 0;
      for (int i = 0; i < n; ++i) {
        if ((s >> i) & 1U) {
          mask |= std::uint64_t(1) << (2 * n - 1 - i);
          mask |= std::uint64_t(1) << (n - 1 - i);
        }
      }
      const int flips = std::popcount(s);
      o(Eigen::Index(std::uint64_t(x) ^ mask), x) +=
          std::pow(alpha, n - flips) * std::pow(beta, flips);
    }
  }
  return o;
}

/// Collective two-time measurement on n copies. Sector k has probability
/// C(n,k) |alpha|^(2k) |beta|^(2(n-k)); one sector is sampled from stream
/// (seed, 0). The exact-matrix mode additionally projects the 4^n-dimensional
/// operator onto eigenspaces of O -> sum_i Z_{I_i} O Z_{I_i}.
template <typename Real>
ConcentrationResult<Real> concentrate(int n, Complex<Real> alpha,
                                      Complex<Real> beta,
                                      ConcentrationMode mode, Seed seed) {
  const Real a2 = std::norm(alpha);
  const Real b2 = std::norm(beta);
  if (std::abs(a2 + b2 - Real(1)) > Real(1e-10)) {
    throw InvalidArgument("concentrate: |alpha|^2 + |beta|^2 must equal 1");
  }
  detail::check_concentration_args(n, a2);
  if (mode == ConcentrationMode::exact_matrix &&
      n > detail::max_exact_concentration_n) {
    throw CapacityExceeded("concentrate: exact-matrix mode needs n <= 4");
  }

  ConcentrationResult<Real> out;
  out.n = n;
  out.alpha = alpha;
  out.beta = beta;
  out.mode = mode;
  std::vector<long double> p;
  for (int k = n; k >= 0; --k) {
    p.push_back((long double)detail::binomial(n, k) *
                std::pow((long double)a2, (long double)k) *
                std::pow((long double)b2, (long double)(n - k)));
  }
  std::vector<Real> probs;
  for (int idx = 0; idx <= n; ++idx) {
    const int k = n - idx;
    out.distribution.push_back({n, k, detail::binomial(n, k),
                                Real(p[std::size_t(idx)]), 2 * k - n});
    probs.push_back(Real(p[std::size_t(idx)]));
  }
  auto engine = stream_engine(seed, 0);
  out.sample = out.distribution[sample_index(std::span<const Real>(probs), engine)];

  if (mode == ConcentrationMode::exact_matrix) {
    const MatrixX<Real> o = concentration_operator<Real>(n, alpha, beta);
    const Eigen::Index dim = o.rows();
    const std::uint64_t i_mask = ((std::uint64_t(1) << n) - 1) << n;
    out.simulated.assign(std::size_t(n) + 1, Real(0));
    std::vector<MatrixX<Real>> sectors(std::size_t(n) + 1,
                                       MatrixX<Real>::Zero(dim, dim));
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        if (o(r, c) == Complex<Real>(0)) continue;
        const int hamming = std::popcount((std::uint64_t(r) ^ std::uint64_t(c)) & i_mask);
        // eigenvalue n - 2 hamming = 2k - n, so k = n - hamming
        sectors[std::size_t(hamming)](r, c) = o(r, c);
      }
    }
    for (int idx = 0; idx <= n; ++idx) {
      const int k = n - idx;
      const MatrixX<Real>& sector = sectors[std::size_t(idx)];
      const Real prob = sector.squaredNorm() / Real(dim);
      out.simulated[std::size_t(idx)] = prob;
      out.max_deviation =
          std::max(out.max_deviation,
                   std::abs(prob - out.distribution[std::size_t(idx)].probability));

      // The sector operator acting on |0...0> puts weight on |x_S>|x_S>.
      const VectorX<Real> col = sector.col(0);
      std::uint64_t terms = 0;
      Real first = -1;
      for (Eigen::Index r = 0; r < dim; ++r) {
        const Real mag = std::abs(col(r));
        if (mag <= Real(1e-14)) continue;
        ++terms;
        if (first < 0) first = mag;
        if (std::abs(mag - first) > Real(1e-12)) out.equal_weights = false;
      }
      if (terms > 0 && terms != detail::binomial(n, k)) out.equal_weights = false;
      const Eigen::Index half = Eigen::Index(1) << n;
      out.sector_entanglement.push_back(
          col.norm() > Real(0)
              ? entanglement_entropy_bits<Real>(col / col.norm(), half, half)
              : Real(0));
    }
  }
  return out;
}

}  // namespace qevol
