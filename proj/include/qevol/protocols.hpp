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

#include "qevol/evolution_measurement.hpp"
#include "qevol/linalg.hpp"
#include "qevol/operator_basis.hpp"
#include "qevol/random.hpp"

namespace qevol {

/// Columns are (B_a (x) I)|psi+>, a = 0 .. d^2 - 1.
template <typename Real>
struct BellBasis {
  Eigen::Index dim = 0;
  MatrixX<Real> vectors;
  std::vector<std::string> labels;
};

template <typename Real>
BellBasis<Real> bell_basis(const OperatorBasis<Real>& basis) {
  if (!basis.is_unitary()) {
    throw InvalidArgument(
        "bell_basis: basis elements are not unitary, so the vectors are not "
        "maximally entangled");
  }
  const Eigen::Index d = basis.dim();
  BellBasis<Real> out{d, MatrixX<Real>(d * d, d * d), basis.labels()};
  const Real scale = Real(1) / std::sqrt(Real(d));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    out.vectors.col(Eigen::Index(a)) = vec_rows<Real>(basis[a]) * scale;
  }
  return out;
}

/// Density matrix of Alice's transmitted qudit: tr_Bob of (u (x) I)|psi+>.
template <typename Real>
MatrixX<Real> eavesdropper_marginal(const UnitaryOperator<Real>& u) {
  const Eigen::Index d = u.dim();
  const VectorX<Real> state = vec_rows<Real>(u.matrix()) / std::sqrt(Real(d));
  return trace_out_second<Real>(state * state.adjoint(), d, d);
}

template <typename Real>
MatrixX<Real> eavesdropper_marginal(const UnitaryOperator<Real>& u,
                                    const OperatorBasis<Real>& basis) {
  detail::require_dims(u.dim() == basis.dim(),
                       "eavesdropper_marginal: dimension mismatch");
  return eavesdropper_marginal(u);
}

/// Density matrix of the half that stays with Bob until delivery.
template <typename Real>
MatrixX<Real> receiver_marginal(const UnitaryOperator<Real>& u) {
  const Eigen::Index d = u.dim();
  const VectorX<Real> state = vec_rows<Real>(u.matrix()) / std::sqrt(Real(d));
  return trace_out_first<Real>(state * state.adjoint(), d, d);
}

template <typename Real>
Real distance_to_maximally_mixed(const MatrixX<Real>& rho) {
  const Eigen::Index d = rho.rows();
  return (rho - MatrixX<Real>::Identity(d, d) / Real(d)).norm();
}

struct AccessStage {
  std::string stage;
  std::string alice;
  std::string channel;
  std::string bob;
};

template <typename Real>
struct ChannelTranscript {
  ExpansionCoefficients<Real> coefficients;
  OutcomeDistribution<Real> bob;
  MatrixX<Real> eavesdropper;
  Real eavesdropper_distance = 0;
  std::vector<std::size_t> shot_outcomes;
  std::vector<AccessStage> access;
  // Set when a single Bell outcome carries all the weight.
  std::optional<std::size_t> decoded_symbol;
  // log2(d^2) classical bits per transmitted qudit in the deterministic case.
  Real classical_bits = 0;
};

namespace detail {

inline std::vector<AccessStage> superdense_access_log() {
  return {
      {"share", "qudit A of psi+", "-", "qudit B of psi+"},
      {"encode", "qudit A, acted on by the source unitary (identity unknown)",
       "-", "qudit B"},
      {"transmit", "nothing", "qudit A (marginal I/d)", "qudit B"},
      {"decode", "nothing", "-", "qudits A and B, Bell measurement"},
  };
}

}  // namespace detail

/// u acts on Alice's half of psi+; Alice sends her qudit; Bob measures both
/// in bell_basis(basis). Exact probabilities are |C_a|^2; shot s draws from
/// stream (seed, s).
template <typename Real>
ChannelTranscript<Real> superdense_send(const UnitaryOperator<Real>& u,
                                        const OperatorBasis<Real>& basis,
                                        std::uint64_t shots, Seed seed) {
  detail::require_dims(u.dim() == basis.dim(),
                       "superdense_send: unitary and basis dimensions differ");
  const auto bell = bell_basis(basis);
  const Eigen::Index d = basis.dim();
  const VectorX<Real> state = vec_rows<Real>(u.matrix()) / std::sqrt(Real(d));

  ChannelTranscript<Real> t;
  t.coefficients = expand(u, basis);
  t.bob.labels = basis.labels();
  for (Eigen::Index a = 0; a < bell.vectors.cols(); ++a) {
    t.bob.probabilities.push_back(std::norm(bell.vectors.col(a).dot(state)));
  }
  if (shots > 0) {
    t.bob.counts.emplace(basis.size(), 0);
    t.bob.shots = shots;
    t.bob.seed = seed;
    const std::span<const Real> probs(t.bob.probabilities);
    for (std::uint64_t s = 0; s < shots; ++s) {
      auto engine = stream_engine(seed, s);
      const std::size_t a = sample_index(probs, engine);
      ++(*t.bob.counts)[a];
      t.shot_outcomes.push_back(a);
    }
  }
  t.eavesdropper = eavesdropper_marginal(u);
  t.eavesdropper_distance = distance_to_maximally_mixed(t.eavesdropper);
  t.access = detail::superdense_access_log();
  for (std::size_t a = 0; a < t.bob.probabilities.size(); ++a) {
    if (t.bob.probabilities[a] > Real(1) - Real(1e-12)) {
      t.decoded_symbol = a;
      t.classical_bits = std::log2(Real(d * d));
    }
  }
  return t;
}

template <typename Real>
struct BlindDraw {
  // Which ensemble member the source applied; Alice never sees it.
  std::size_t secret = 0;
  std::vector<Real> exact;
  std::size_t outcome = 0;
};

/// The source draws u_j with probability weights[j] (lane 2 of stream
/// (seed, t)); Bob's outcome uses lane 3 of the same stream.
template <typename Real>
std::vector<BlindDraw<Real>> superdense_send_blind(
    const std::vector<UnitaryOperator<Real>>& ensemble,
    const std::vector<Real>& weights, const OperatorBasis<Real>& basis,
    std::uint64_t draws, Seed seed) {
  if (ensemble.empty() || ensemble.size() != weights.size()) {
    throw InvalidArgument("superdense_send_blind: ensemble/weights mismatch");
  }
  std::vector<std::vector<Real>> exact;
  for (const auto& u : ensemble) {
    exact.push_back(superdense_send(u, basis, 0, seed).bob.probabilities);
  }
  std::vector<BlindDraw<Real>> out;
  out.reserve(draws);
  for (std::uint64_t t = 0; t < draws; ++t) {
    auto source = stream_engine(seed, t, 2);
    const std::size_t j = sample_index(std::span<const Real>(weights), source);
    auto bob = stream_engine(seed, t, 3);
    const std::size_t a = sample_index(std::span<const Real>(exact[j]), bob);
    out.push_back({j, exact[j], a});
  }
  return out;
}

}  // namespace qevol
