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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qevol/linalg.hpp"
#include "qevol/operator_basis.hpp"
#include "qevol/random.hpp"
#include "qevol/types.hpp"

namespace qevol {

/// Unit vector. The amplitudes may live on system (x) reference; operations
/// that act on a d-dimensional system act on the leading factor.
template <typename Real>
class PureState {
 public:
  explicit PureState(VectorX<Real> amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw InvalidArgument("PureState: empty");
    if (std::abs(amplitudes_.norm() - Real(1)) > Tolerance<Real>::state) {
      throw InvalidArgument("PureState: amplitudes are not normalized");
    }
  }

  static PureState normalized(VectorX<Real> v) {
    const Real n = v.norm();
    if (!(n > Real(0))) throw InvalidArgument("PureState: zero vector");
    v /= n;
    return PureState(std::move(v));
  }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const VectorX<Real>& amplitudes() const { return amplitudes_; }

  // |<this|other>|
  Real overlap(const PureState& other) const {
    return std::abs(amplitudes_.dot(other.amplitudes_));
  }

 private:
  VectorX<Real> amplitudes_;
};

using PureStated = PureState<double>;

template <typename Real>
struct OutcomeDistribution {
  std::vector<std::string> labels;
  std::vector<Real> probabilities;
  // Present when the distribution was sampled.
  std::optional<std::vector<std::uint64_t>> counts;
  std::uint64_t shots = 0;
  std::optional<Seed> seed;

  std::vector<Real> frequencies() const {
    std::vector<Real> f(probabilities.size(), Real(0));
    if (!counts || shots == 0) return f;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = Real((*counts)[i]) / Real(shots);
    }
    return f;
  }
};

template <typename Real>
struct WhichUnitaryResult {
  std::size_t outcome = 0;
  PureState<Real> collapsed;
  Real exact_prob = 0;
};

template <typename Real>
struct MeasurementRun {
  OutcomeDistribution<Real> distribution;
  // One entry per outcome with nonzero probability.
  std::vector<WhichUnitaryResult<Real>> branches;
  // Outcome index of every shot, in shot order.
  std::vector<std::size_t> shot_outcomes;

  const WhichUnitaryResult<Real>& branch_for(std::size_t outcome) const {
    for (const auto& b : branches) {
      if (b.outcome == outcome) return b;
    }
    throw InvalidArgument("MeasurementRun: outcome has zero probability");
  }
};

enum class ObservableFamily { z_type, x_type };

/// A(t2, t1) = [u0 g u0^dagger]_{t2} [g^dagger]_{t1} with g the clock (Z-type)
/// or shift (X-type) operator of dimension d. For qubits g^dagger = g.
template <typename Real>
struct TwoTimeObservable {
  ObservableFamily family;
  UnitaryOperator<Real> u0;

  Eigen::Index dim() const { return u0.dim(); }

  MatrixX<Real> generator() const {
    const auto [z, x] = clock_shift<Real>(dim());
    return family == ObservableFamily::z_type ? z.matrix() : x.matrix();
  }

  // The time-ordered action U -> (u0 g u0^dagger) U g^dagger.
  MatrixX<Real> apply(const MatrixX<Real>& u) const {
    const MatrixX<Real> g = generator();
    return u0.matrix() * g * u0.matrix().adjoint() * u * g.adjoint();
  }

  // Matrix of apply() on row-major vec(U): vec(A U B) = (A (x) B^T) vec(U).
  MatrixX<Real> superoperator() const {
    const MatrixX<Real> g = generator();
    const MatrixX<Real> left = u0.matrix() * g * u0.matrix().adjoint();
    return kron<Real>(left, g.adjoint().transpose());
  }
};

/// lambda with T:A U = lambda U. Throws NotAnEigenoperator otherwise.
template <typename Real>
Complex<Real> temporal_eigenvalue(const TwoTimeObservable<Real>& obs,
                                  const MatrixX<Real>& u) {
  detail::require_dims(u.rows() == obs.dim() && u.cols() == obs.dim(),
                       "temporal_eigenvalue: dimension mismatch");
  const Real norm2 = u.squaredNorm();
  if (!(norm2 > Real(0))) throw InvalidArgument("temporal_eigenvalue: zero op");
  const MatrixX<Real> m = obs.apply(u);
  const Complex<Real> lambda = trace_inner(u, m) / norm2;
  if ((m - lambda * u).norm() > Real(1e-9) * std::sqrt(norm2)) {
    throw NotAnEigenoperator(
        "temporal_eigenvalue: operator is not an eigenoperator of A(t2,t1)");
  }
  return lambda;
}

/// Frobenius norm of [L1, L2] for the superoperators of two observables.
template <typename Real>
Real observable_commutator_norm(const TwoTimeObservable<Real>& a,
                                const TwoTimeObservable<Real>& b) {
  detail::require_dims(a.dim() == b.dim(),
                       "observable_commutator_norm: dimension mismatch");
  const MatrixX<Real> la = a.superoperator();
  const MatrixX<Real> lb = b.superoperator();
  return (la * lb - lb * la).norm();
}

/// Exact which-unitary probabilities |C_a|^2.
template <typename Real>
OutcomeDistribution<Real> which_unitary_distribution(
    const UnitaryOperator<Real>& u, const OperatorBasis<Real>& basis) {
  detail::require_dims(u.dim() == basis.dim(),
                       "which_unitary_distribution: dimension mismatch");
  OutcomeDistribution<Real> out;
  out.labels = basis.labels();
  out.probabilities = expand(u, basis).probabilities();
  return out;
}

/// Joint state of the ancilla registers and the system after the two-time
/// coupling sequence, before the ancillas are read out.
///
/// Registers come in pairs per site k: a_k drives Z_k^{a}, b_k drives X_k^{b}.
/// Row c of `branches` holds the (system (x) reference) vector, reshaped to
/// d x r, attached to ancilla configuration c (mixed radix, first register
/// most significant).
template <typename Real>
struct TwoTimeCircuit {
  std::vector<Eigen::Index> register_dims;
  std::vector<MatrixX<Real>> branches;
  Eigen::Index system_dim = 0;
  Eigen::Index reference_dim = 1;

  // Joint amplitude vector, ancilla index major.
  VectorX<Real> state_vector() const {
    const Eigen::Index block = system_dim * reference_dim;
    VectorX<Real> v(Eigen::Index(branches.size()) * block);
    for (std::size_t c = 0; c < branches.size(); ++c) {
      v.segment(Eigen::Index(c) * block, block) = vec_rows<Real>(branches[c]);
    }
    return v;
  }
};

namespace detail {

inline std::vector<Eigen::Index> mixed_radix_digits(
    std::size_t index, const std::vector<Eigen::Index>& radices) {
  std::vector<Eigen::Index> digits(radices.size());
  for (std::size_t j = radices.size(); j-- > 0;) {
    digits[j] = Eigen::Index(index % std::size_t(radices[j]));
    index /= std::size_t(radices[j]);
  }
  return digits;
}

template <typename Real>
MatrixX<Real> embed_site(const MatrixX<Real>& local,
                         const std::vector<Eigen::Index>& sites,
                         std::size_t k) {
  MatrixX<Real> m = MatrixX<Real>::Identity(1, 1);
  for (std::size_t j = 0; j < sites.size(); ++j) {
    m = kron<Real>(m, j == k ? local
                             : MatrixX<Real>::Identity(sites[j], sites[j]));
  }
  return m;
}

// Verifies that the basis is u0 * (product of local Weyl / Pauli operators).
template <typename Real>
void require_product_form(const OperatorBasis<Real>& basis) {
  std::optional<OperatorBasis<Real>> expected;
  if (basis.u0() && basis.kind() == BasisKind::pauli) {
    expected.emplace(pauli_basis(*basis.u0()));
  } else if (basis.u0() && basis.kind() == BasisKind::weyl) {
    expected.emplace(weyl_basis<Real>(basis.dim(), *basis.u0()));
  } else {
    throw InvalidArgument(
        "which-unitary circuit: basis is not of product form {u0 sigma_a}");
  }
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if ((basis[a] - (*expected)[a]).cwiseAbs().maxCoeff() >
        Tolerance<Real>::structural) {
      throw InvalidArgument(
          "which-unitary circuit: basis is not of product form {u0 sigma_a}");
    }
  }
}

// Basis index selected by the per-site Fourier outcomes (o_a, o_b):
// the site operator is Z^mu X^nu with mu = o_b and nu = -o_a mod q.
template <typename Real>
std::size_t outcome_to_basis_index(const OperatorBasis<Real>& basis,
                                   const std::vector<Eigen::Index>& outcome) {
  const auto& sites = basis.site_dims();
  std::size_t index = 0;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const Eigen::Index q = sites[k];
    const Eigen::Index mu = outcome[2 * k + 1];
    const Eigen::Index nu = (q - outcome[2 * k]) % q;
    if (basis.kind() == BasisKind::pauli) {
      // (mu, nu): (0,0) I, (0,1) X, (1,1) Y, (1,0) Z
      static constexpr std::size_t to_pauli[2][2] = {{0, 1}, {3, 2}};
      index = index * 4 + to_pauli[mu][nu];
    } else {
      index = index * std::size_t(q * q) + std::size_t(mu * q + nu);
    }
  }
  return index;
}

}  // namespace detail

/// Runs the coupling sequence (u0 W^dagger u0^dagger) u W on
/// ancillas (x) psi, where W = prod_k X_k^{b_k} Z_k^{a_k} is controlled by the
/// ancilla registers, prepared in uniform superposition.
template <typename Real>
TwoTimeCircuit<Real> simulate_two_time_circuit(
    const UnitaryOperator<Real>& u, const OperatorBasis<Real>& basis,
    const PureState<Real>& psi) {
  detail::require_product_form(basis);
  const Eigen::Index d = basis.dim();
  detail::require_dims(u.dim() == d,
                       "which-unitary circuit: unitary and basis differ");
  detail::require_dims(psi.dim() % d == 0,
                       "which-unitary circuit: state does not contain system");
  const auto& sites = basis.site_dims();

  TwoTimeCircuit<Real> circuit;
  circuit.system_dim = d;
  circuit.reference_dim = psi.dim() / d;
  for (const auto q : sites) {
    circuit.register_dims.push_back(q);  // a_k
    circuit.register_dims.push_back(q);  // b_k
  }
  std::size_t configs = 1;
  for (const auto q : circuit.register_dims) configs *= std::size_t(q);

  std::vector<MatrixX<Real>> z_site, x_site;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const auto [z, x] = clock_shift<Real>(sites[k]);
    z_site.push_back(detail::embed_site<Real>(z.matrix(), sites, k));
    x_site.push_back(detail::embed_site<Real>(x.matrix(), sites, k));
  }

  const MatrixX<Real> psi_block =
      unvec_rows<Real>(psi.amplitudes(), d, circuit.reference_dim);
  const MatrixX<Real>& u0 = basis.u0()->matrix();
  const Real amp = Real(1) / std::sqrt(Real(configs));

  circuit.branches.reserve(configs);
  for (std::size_t c = 0; c < configs; ++c) {
    const auto digits = detail::mixed_radix_digits(c, circuit.register_dims);
    MatrixX<Real> phi = amp * psi_block;
    // t1: V_Z then V_X on every site
    for (std::size_t k = 0; k < sites.size(); ++k) {
      phi = matrix_power<Real>(z_site[k], int(digits[2 * k])) * phi;
      phi = matrix_power<Real>(x_site[k], int(digits[2 * k + 1])) * phi;
    }
    phi = u.matrix() * phi;
    // t2: the inverse couplings in reverse order, conjugated by u0
    phi = u0.adjoint() * phi;
    for (std::size_t k = sites.size(); k-- > 0;) {
      phi = matrix_power<Real>(x_site[k].adjoint(), int(digits[2 * k + 1])) *
            phi;
      phi = matrix_power<Real>(z_site[k].adjoint(), int(digits[2 * k])) * phi;
    }
    phi = u0 * phi;
    circuit.branches.push_back(std::move(phi));
  }
  return circuit;
}

namespace detail {

// Reads every ancilla register in its Fourier basis. Returns, per outcome
// configuration, the unnormalized post-measurement system block.
template <typename Real>
std::vector<MatrixX<Real>> fourier_readout(const TwoTimeCircuit<Real>& circuit) {
  MatrixX<Real> f = MatrixX<Real>::Identity(1, 1);
  for (const auto q : circuit.register_dims) {
    f = kron<Real>(f, fourier_matrix<Real>(q));
  }
  const auto configs = circuit.branches.size();
  std::vector<MatrixX<Real>> out(configs);
  for (std::size_t o = 0; o < configs; ++o) {
    MatrixX<Real> chi = MatrixX<Real>::Zero(circuit.system_dim,
                                            circuit.reference_dim);
    for (std::size_t c = 0; c < configs; ++c) {
      chi += std::conj(f(Eigen::Index(c), Eigen::Index(o))) *
             circuit.branches[c];
    }
    out[o] = std::move(chi);
  }
  return out;
}

template <typename Real>
MeasurementRun<Real> measure_product_form(const UnitaryOperator<Real>& u,
                                          const OperatorBasis<Real>& basis,
                                          const PureState<Real>& psi,
                                          std::uint64_t shots, Seed seed) {
  const auto circuit = simulate_two_time_circuit(u, basis, psi);
  const auto readout = fourier_readout(circuit);

  MeasurementRun<Real> run;
  run.distribution.labels = basis.labels();
  run.distribution.probabilities.assign(basis.size(), Real(0));
  std::vector<std::optional<MatrixX<Real>>> collapsed(basis.size());
  for (std::size_t o = 0; o < readout.size(); ++o) {
    const Real p = readout[o].squaredNorm();
    const auto digits = mixed_radix_digits(o, circuit.register_dims);
    const std::size_t alpha = outcome_to_basis_index(basis, digits);
    run.distribution.probabilities[alpha] += p;
    if (p > Tolerance<Real>::support) collapsed[alpha] = readout[o];
  }
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (!collapsed[a]) continue;
    run.branches.push_back(
        {a, PureState<Real>::normalized(vec_rows<Real>(*collapsed[a])),
         run.distribution.probabilities[a]});
  }

  if (shots > 0) {
    run.distribution.counts.emplace(basis.size(), 0);
    run.distribution.shots = shots;
    run.distribution.seed = seed;
    run.shot_outcomes.reserve(shots);
    const std::span<const Real> probs(run.distribution.probabilities);
    for (std::uint64_t s = 0; s < shots; ++s) {
      auto engine = stream_engine(seed, s);
      const std::size_t a = sample_index(probs, engine);
      ++(*run.distribution.counts)[a];
      run.shot_outcomes.push_back(a);
    }
  }
  return run;
}

}  // namespace detail

/// Which-unitary measurement for qubit registers (d = 2^n) in a Pauli-form
/// basis {u0 sigma_a}. Each qubit uses two ancilla qubits read out in the
/// (|0> +- |1>)/sqrt(2) basis.
template <typename Real>
MeasurementRun<Real> measure_which_unitary(const UnitaryOperator<Real>& u,
                                           const OperatorBasis<Real>& basis,
                                           const PureState<Real>& psi,
                                           std::uint64_t shots, Seed seed) {
  if (basis.kind() != BasisKind::pauli) {
    throw InvalidArgument(
        "measure_which_unitary: qubit path needs a Pauli-form basis");
  }
  return detail::measure_product_form(u, basis, psi, shots, seed);
}

/// Which-unitary measurement for a qudit in a Weyl-form basis {u0 Z^mu X^nu},
/// using two d-level ancillas read out in the Fourier basis.
template <typename Real>
MeasurementRun<Real> measure_which_unitary_qudit(
    const UnitaryOperator<Real>& u, const OperatorBasis<Real>& basis,
    const PureState<Real>& psi, std::uint64_t shots, Seed seed) {
  if (basis.kind() != BasisKind::weyl) {
    throw InvalidArgument(
        "measure_which_unitary_qudit: needs a Weyl-form basis");
  }
  return detail::measure_product_form(u, basis, psi, shots, seed);
}

/// Alternate backend for any trace-orthogonal basis, including rotated
/// non-unitary ones: u acts on half of psi+ and the pair is measured in the
/// orthonormal basis (B_a (x) I)|psi+>. Collapsed states are those Bell-type
/// vectors; an unknown system state is not preserved by this backend.
template <typename Real>
MeasurementRun<Real> measure_which_operator_choi(
    const UnitaryOperator<Real>& u, const OperatorBasis<Real>& basis,
    std::uint64_t shots, Seed seed) {
  const Eigen::Index d = basis.dim();
  detail::require_dims(u.dim() == d, "measure_which_operator_choi: dims");
  const Real scale = Real(1) / std::sqrt(Real(d));
  const VectorX<Real> state = vec_rows<Real>(u.matrix()) * scale;

  MeasurementRun<Real> run;
  run.distribution.labels = basis.labels();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const VectorX<Real> bell = vec_rows<Real>(basis[a]) * scale;
    const Complex<Real> amp = bell.dot(state);
    const Real p = std::norm(amp);
    run.distribution.probabilities.push_back(p);
    if (p > Tolerance<Real>::support) {
      run.branches.push_back({a, PureState<Real>::normalized(bell), p});
    }
  }
  if (shots > 0) {
    run.distribution.counts = sample_counts<Real>(
        std::span<const Real>(run.distribution.probabilities), shots, seed);
    run.distribution.shots = shots;
    run.distribution.seed = seed;
  }
  return run;
}

}  // namespace qevol
