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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qevol/cp_map.hpp"
#include "qevol/evolution_measurement.hpp"
#include "qevol/linalg.hpp"
#include "qevol/random.hpp"
#include "qevol/types.hpp"

namespace qevol {

/// Which Kraus operator of `map` acted at each of n steps.
template <typename Real>
struct EvolutionSequence {
  KrausMap<Real> map;
  std::vector<std::size_t> indices;

  EvolutionSequence(KrausMap<Real> m, std::vector<std::size_t> idx)
      : map(std::move(m)), indices(std::move(idx)) {
    for (const auto i : indices) {
      if (i >= map.size()) {
        throw InvalidArgument("EvolutionSequence: index out of range");
      }
    }
  }
};

/// One unit vector (M_i (x) I)|psi+> / norm per step, in C^{d^2}.
template <typename Real>
struct StoredEvolution {
  Eigen::Index dim = 0;
  std::vector<VectorX<Real>> states;
};

/// Normalized (op (x) I)|psi+>. Throws if op annihilates psi+.
template <typename Real>
VectorX<Real> storage_state(const MatrixX<Real>& op) {
  VectorX<Real> v = vec_rows<Real>(op) / std::sqrt(Real(op.rows()));
  const Real n = v.norm();
  if (!(n > Tolerance<Real>::support)) {
    throw InvalidArgument("store: operator has zero norm on psi+");
  }
  return v / n;
}

template <typename Real>
StoredEvolution<Real> store(const EvolutionSequence<Real>& sequence) {
  StoredEvolution<Real> out;
  out.dim = sequence.map.dim();
  for (const auto i : sequence.indices) {
    out.states.push_back(storage_state<Real>(sequence.map[i]));
  }
  return out;
}

/// Asymptotic storage cost in bits per step: the map entropy.
template <typename Real>
Real compression_rate(const KrausMap<Real>& map) {
  return entropy(map);
}

template <typename Real>
struct CompressionResult {
  int n = 0;
  std::uint64_t kept_dim = 0;
  // Probability mass of the discarded strings; bounds the infidelity.
  Real infidelity_bound = 0;
  // log2(kept_dim) / n
  Real rate = 0;
  Real entropy = 0;
  // |rate - entropy|
  Real delta_prime = 0;
};

namespace detail {

inline constexpr int max_compress_n = 20;

// One composition (N_0, ..., N_{D-1}) of n: number of strings and the
// probability of each of them.
template <typename Real>
struct TypeClass {
  std::vector<int> counts;
  long double size = 0;
  long double string_probability = 0;
};

template <typename Real>
std::vector<TypeClass<Real>> type_classes(const std::vector<Real>& p, int n) {
  const std::size_t k = p.size();
  if (n < 1) throw InvalidArgument("compress: n must be positive");
  if (n > max_compress_n) {
    throw CapacityExceeded("compress: n exceeds the exact enumeration cap of 20");
  }
  if (double(n) * std::log2(double(k)) > 62.0) {
    throw CapacityExceeded("compress: support^n exceeds 2^62 strings");
  }
  std::vector<long double> log_fact(std::size_t(n) + 1, 0.0L);
  for (int i = 1; i <= n; ++i) {
    log_fact[std::size_t(i)] = log_fact[std::size_t(i) - 1] + std::log((long double)i);
  }
  std::vector<TypeClass<Real>> out;
  std::vector<int> counts(k, 0);
  // Depth-first walk over compositions.
  auto walk = [&](auto&& self, std::size_t slot, int left) -> void {
    if (slot + 1 == k) {
      counts[slot] = left;
      long double log_size = log_fact[std::size_t(n)];
      long double log_prob = 0;
      for (std::size_t a = 0; a < k; ++a) {
        log_size -= log_fact[std::size_t(counts[a])];
        if (counts[a] > 0) log_prob += counts[a] * std::log((long double)p[a]);
      }
      out.push_back({counts, std::round(std::exp(log_size)),
                     std::exp(log_prob)});
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[slot] = c;
      self(self, slot + 1, left - c);
    }
  };
  walk(walk, 0, n);
  return out;
}

template <typename Real>
CompressionResult<Real> finish_compression(int n, long double kept,
                                           long double mass, Real s) {
  CompressionResult<Real> r;
  r.n = n;
  r.kept_dim = std::uint64_t(kept);
  r.infidelity_bound = Real(std::max(0.0L, 1.0L - mass));
  r.rate = kept >= 1 ? Real(std::log2(kept) / n) : Real(0);
  r.entropy = s;
  r.delta_prime = std::abs(r.rate - s);
  return r;
}

}  // namespace detail

/// Keeps the strongly delta-typical strings of p^n, where p are the canonical
/// probabilities: |N_a / n - p_a| <= delta for every letter a.
template <typename Real>
CompressionResult<Real> typical_compress(const KrausMap<Real>& map, int n,
                                         Real delta) {
  if (!(delta >= Real(0))) throw InvalidArgument("typical_compress: delta < 0");
  const auto p = canonical_kraus(map).probabilities;
  long double kept = 0;
  long double mass = 0;
  for (const auto& t : detail::type_classes(p, n)) {
    bool typical = true;
    for (std::size_t a = 0; a < p.size() && typical; ++a) {
      typical = std::abs(Real(t.counts[a]) / Real(n) - p[a]) <= delta + Real(1e-12);
    }
    if (!typical) continue;
    kept += t.size;
    mass += t.size * t.string_probability;
  }
  return detail::finish_compression(n, kept, mass, shannon_entropy_bits(p));
}

/// Smallest set of strings whose total probability is at least 1 - epsilon.
template <typename Real>
CompressionResult<Real> compress_at_tail_mass(const KrausMap<Real>& map, int n,
                                              Real epsilon) {
  if (!(epsilon >= Real(0) && epsilon < Real(1))) {
    throw InvalidArgument("compress_at_tail_mass: epsilon must be in [0, 1)");
  }
  const auto p = canonical_kraus(map).probabilities;
  auto classes = detail::type_classes(p, n);
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    return a.string_probability > b.string_probability;
  });
  const long double target = 1.0L - (long double)epsilon;
  long double kept = 0;
  long double mass = 0;
  for (const auto& t : classes) {
    if (mass >= target - 1e-15L) break;
    const long double need =
        std::ceil((target - mass) / t.string_probability - 1e-9L);
    const long double take = std::min(t.size, std::max(1.0L, need));
    kept += take;
    mass += take * t.string_probability;
  }
  return detail::finish_compression(n, kept, mass, shannon_entropy_bits(p));
}

// ---------------------------------------------------------------------------
// Verification against a dilation source

template <typename Real>
struct VerificationStep {
  std::size_t claimed = 0;
  std::size_t observed = 0;
  // |<psi_claimed|psi_observed>|^2
  Real acceptance_probability = 0;
  bool accepted = false;
};

template <typename Real>
struct VerificationReport {
  bool verified = true;
  std::vector<VerificationStep<Real>> steps;
  std::vector<std::uint64_t> outcome_counts;
  // Born weights of the ancilla outcomes on psi+.
  std::vector<Real> outcome_probabilities;
  std::size_t rejected_steps = 0;
};

namespace detail {

// Branches <b_i|_C U (|psi+> (x) |0_C>) on system (x) reference, as d x d
// blocks (unnormalized).
template <typename Real>
std::vector<MatrixX<Real>> ancilla_branches(const StinespringDilation<Real>& dil,
                                            const MatrixX<Real>& basis) {
  const Eigen::Index d = dil.system_dim;
  const Eigen::Index a = dil.ancilla_dim;
  detail::require_dims(basis.rows() == a && basis.cols() == a,
                       "verify: ancilla basis must be a x a");
  if (!is_unitary<Real>(basis)) {
    throw InvalidArgument("verify: ancilla basis is not orthonormal");
  }
  // Joint state on system (x) ancilla (x) reference.
  const MatrixX<Real> w = dil.isometry();
  const Real amp = Real(1) / std::sqrt(Real(d));
  std::vector<MatrixX<Real>> out(std::size_t(a), MatrixX<Real>::Zero(d, d));
  for (Eigen::Index i = 0; i < a; ++i) {
    for (Eigen::Index sp = 0; sp < d; ++sp) {
      for (Eigen::Index r = 0; r < d; ++r) {
        // psi+ has amplitude amp on |r>|r>; the system part r is mapped by w.
        Complex<Real> acc = 0;
        for (Eigen::Index c = 0; c < a; ++c) {
          acc += std::conj(basis(c, i)) * w(sp * a + c, r);
        }
        out[std::size_t(i)](sp, r) = amp * acc;
      }
    }
  }
  return out;
}

template <typename Real>
void require_operator_match(const StinespringDilation<Real>& dil,
                            const MatrixX<Real>& basis,
                            const KrausMap<Real>& claimed) {
  const auto induced = kraus_from_ancilla_basis(dil, basis);
  bool match = induced.size() == claimed.size() &&
               induced.dim() == claimed.dim();
  for (std::size_t i = 0; match && i < induced.size(); ++i) {
    match = (induced[i] - claimed[i]).cwiseAbs().maxCoeff() <=
            Tolerance<Real>::channel;
  }
  if (!match) {
    throw InvalidArgument(
        "verify: ancilla basis does not induce the claimed Kraus representation");
  }
}

}  // namespace detail

/// Honest record of which operator acted: step t reads the ancilla outcome
/// drawn from lane 0 of stream (seed, t).
template <typename Real>
EvolutionSequence<Real> source_record(const StinespringDilation<Real>& dil,
                                      const MatrixX<Real>& ancilla_basis,
                                      std::size_t steps, Seed seed) {
  const auto branches = detail::ancilla_branches(dil, ancilla_basis);
  std::vector<Real> probs;
  for (const auto& b : branches) probs.push_back(b.squaredNorm());
  std::vector<std::size_t> idx;
  idx.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    auto engine = stream_engine(seed, t, 0);
    idx.push_back(sample_index(std::span<const Real>(probs), engine));
  }
  return EvolutionSequence<Real>(kraus_from_ancilla_basis(dil, ancilla_basis),
                                 std::move(idx));
}

/// Per step, runs the dilation on psi+, measures the ancilla in the given
/// basis (lane 0 of stream (seed, t)) and tests the stored state of the
/// claimed operator against the branch that occurred (lane 1). The claim is
/// verified when every step passes.
template <typename Real>
VerificationReport<Real> verify_sequence(const StinespringDilation<Real>& dil,
                                         const MatrixX<Real>& ancilla_basis,
                                         const EvolutionSequence<Real>& claimed,
                                         Seed seed) {
  detail::require_operator_match(dil, ancilla_basis, claimed.map);
  const auto branches = detail::ancilla_branches(dil, ancilla_basis);
  VerificationReport<Real> report;
  std::vector<std::optional<VectorX<Real>>> unit(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Real p = branches[i].squaredNorm();
    report.outcome_probabilities.push_back(p);
    if (p > Tolerance<Real>::support) {
      unit[i] = vec_rows<Real>(branches[i]) / std::sqrt(p);
    }
  }
  report.outcome_counts.assign(branches.size(), 0);
  const std::span<const Real> probs(report.outcome_probabilities);
  for (std::size_t t = 0; t < claimed.indices.size(); ++t) {
    auto engine = stream_engine(seed, t, 0);
    VerificationStep<Real> step;
    step.claimed = claimed.indices[t];
    step.observed = sample_index(probs, engine);
    ++report.outcome_counts[step.observed];
    const auto& seen = *unit[step.observed];
    if (unit[step.claimed]) {
      step.acceptance_probability = std::norm(unit[step.claimed]->dot(seen));
    }
    auto verifier = stream_engine(seed, t, 1);
    step.accepted = Real(uniform01(verifier)) < step.acceptance_probability;
    if (!step.accepted) {
      report.verified = false;
      ++report.rejected_steps;
    }
    report.steps.push_back(step);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Probabilistic retrieval

template <typename Real>
struct RetrievalOutcome {
  bool heralded_success = false;
  // Normalized M_i|psi> (up to phase) when heralded.
  std::optional<PureState<Real>> output;
  std::size_t storage_outcome = 0;
  // Set when the contraction flag of a non-unitary dilation fired.
  bool flag_raised = false;
  // System state after the measurement, for inspection on failure.
  PureState<Real> post_state;
  Real success_probability = 0;
};

/// The exact retrieval experiment for one (operator, map, state) triple.
/// The storage register holds sum_mu a_mu |mu> over the D-dimensional
/// canonical support; V = sum_mu |mu><mu| (x) Mhat_mu / s, with a one-qubit
/// flag dilation when some Mhat_mu is not unitary (s = max operator norm).
template <typename Real>
class RetrievalExperiment {
 public:
  RetrievalExperiment(const MatrixX<Real>& stored_op, const KrausMap<Real>& map,
                      const PureState<Real>& psi) {
    const Eigen::Index d = map.dim();
    detail::require_dims(stored_op.rows() == d && stored_op.cols() == d,
                         "retrieve: operator and map dimensions differ");
    detail::require_dims(psi.dim() == d,
                         "retrieve: state and map dimensions differ");
    const auto canon = canonical_kraus(map);
    const auto big_d = Eigen::Index(canon.support_size());
    support_dim_ = big_d;

    const Real n_i = std::sqrt(stored_op.squaredNorm() / Real(d));
    if (!(n_i > Tolerance<Real>::support)) {
      throw InvalidArgument("retrieve: stored operator is zero");
    }
    std::vector<MatrixX<Real>> unit_ops;
    VectorX<Real> a(big_d);
    Real scale = 0;
    for (Eigen::Index mu = 0; mu < big_d; ++mu) {
      const MatrixX<Real> hat =
          canon.operators[std::size_t(mu)] /
          std::sqrt(canon.probabilities[std::size_t(mu)]);
      a(mu) = trace_inner(hat, stored_op) / (Real(d) * n_i);
      scale = std::max(scale, Eigen::JacobiSVD<MatrixX<Real>>(hat)
                                  .singularValues()(0));
      unit_ops.push_back(hat);
    }
    if (std::abs(a.squaredNorm() - Real(1)) > Tolerance<Real>::channel) {
      throw InvalidArgument(
          "retrieve: stored operator lies outside the map's canonical support");
    }
    bool unitary_ops = true;
    for (const auto& m : unit_ops) unitary_ops = unitary_ops && is_unitary<Real>(m);
    dilated_ = !unitary_ops;
    if (!dilated_) scale = 1;
    scale_ = scale;

    // V on storage (x) system, block diagonal.
    const Eigen::Index n = big_d * d;
    MatrixX<Real> v = MatrixX<Real>::Zero(n, n);
    for (Eigen::Index mu = 0; mu < big_d; ++mu) {
      v.block(mu * d, mu * d, d, d) = unit_ops[std::size_t(mu)] / scale;
    }
    MatrixX<Real> gate = v;
    if (dilated_) gate = halmos_dilation(v);
    if (!is_unitary<Real>(gate, Real(1e-9))) {
      throw NotUnitary("retrieve: retrieval gate is not unitary");
    }

    VectorX<Real> input = VectorX<Real>::Zero(gate.rows());
    input.head(n) = kron<Real>(a, psi.amplitudes());
    const VectorX<Real> after = gate * input;

    // Outcome (flag, o): flag-major, storage read out in its Fourier basis.
    const MatrixX<Real> f = fourier_matrix<Real>(big_d);
    const Eigen::Index flags = dilated_ ? 2 : 1;
    for (Eigen::Index flag = 0; flag < flags; ++flag) {
      for (Eigen::Index o = 0; o < big_d; ++o) {
        VectorX<Real> sys = VectorX<Real>::Zero(d);
        for (Eigen::Index mu = 0; mu < big_d; ++mu) {
          sys += std::conj(f(mu, o)) * after.segment(flag * n + mu * d, d);
        }
        probabilities_.push_back(sys.squaredNorm());
        blocks_.push_back(std::move(sys));
      }
    }
    success_probability_ = probabilities_[0];
    target_ = PureState<Real>::normalized(stored_op * psi.amplitudes());
  }

  Eigen::Index support_dim() const { return support_dim_; }
  bool dilated() const { return dilated_; }
  Real contraction_scale() const { return scale_; }
  Real success_probability() const { return success_probability_; }
  const PureState<Real>& target() const { return target_; }
  const std::vector<Real>& outcome_probabilities() const {
    return probabilities_;
  }

  RetrievalOutcome<Real> sample(Seed seed, std::uint64_t trial = 0) const {
    auto engine = stream_engine(seed, trial);
    const std::size_t k =
        sample_index(std::span<const Real>(probabilities_), engine);
    return outcome(k);
  }

  RetrievalOutcome<Real> outcome(std::size_t k) const {
    const auto big_d = std::size_t(support_dim_);
    RetrievalOutcome<Real> out{
        k == 0, std::nullopt, k % big_d, k >= big_d,
        PureState<Real>::normalized(blocks_[k]), success_probability_};
    if (out.heralded_success) out.output = out.post_state;
    return out;
  }

 private:
  // [[K, sqrt(I - K K^dagger)], [sqrt(I - K^dagger K), -K^dagger]], with
  // both roots taken from one SVD K = U S V^dagger. Eigen-solving I - K K^dagger
  // directly loses half the digits when |K| = 1.
  static MatrixX<Real> halmos_dilation(const MatrixX<Real>& k) {
    const Eigen::Index n = k.rows();
    Eigen::JacobiSVD<MatrixX<Real>> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVectorX<Real> s = svd.singularValues().cwiseMin(Real(1));
    const RealVectorX<Real> c = (RealVectorX<Real>::Ones(n) - s.cwiseProduct(s))
                                    .cwiseMax(Real(0))
                                    .cwiseSqrt();
    const MatrixX<Real>& uu = svd.matrixU();
    const MatrixX<Real>& vv = svd.matrixV();
    const auto sd = s.template cast<Complex<Real>>().asDiagonal();
    const auto cd = c.template cast<Complex<Real>>().asDiagonal();
    MatrixX<Real> u(2 * n, 2 * n);
    u.topLeftCorner(n, n) = uu * sd * vv.adjoint();
    u.topRightCorner(n, n) = uu * cd * uu.adjoint();
    u.bottomLeftCorner(n, n) = vv * cd * vv.adjoint();
    u.bottomRightCorner(n, n) = -(vv * sd * uu.adjoint());
    return u;
  }

  Eigen::Index support_dim_ = 0;
  bool dilated_ = false;
  Real scale_ = 1;
  Real success_probability_ = 0;
  std::vector<Real> probabilities_;
  std::vector<VectorX<Real>> blocks_;
  PureState<Real> target_{VectorX<Real>::Unit(1, 0)};
};

template <typename Real>
RetrievalOutcome<Real> probabilistic_retrieve(const MatrixX<Real>& stored_op,
                                              const KrausMap<Real>& map,
                                              const PureState<Real>& psi,
                                              Seed seed) {
  return RetrievalExperiment<Real>(stored_op, map, psi).sample(seed);
}

/// Retrieves the map's own Kraus operator `index`.
template <typename Real>
RetrievalOutcome<Real> probabilistic_retrieve(std::size_t index,
                                              const KrausMap<Real>& map,
                                              const PureState<Real>& psi,
                                              Seed seed) {
  if (index >= map.size()) {
    throw InvalidArgument("retrieve: operator index out of range");
  }
  return probabilistic_retrieve(map[index], map, psi, seed);
}

template <typename Real>
struct RetrievalStatistics {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  Real success_probability = 0;
  // Worst fidelity of a heralded output with the target.
  Real min_fidelity = 1;

  Real rate() const { return trials ? Real(successes) / Real(trials) : Real(0); }
  Real standard_error() const {
    return std::sqrt(success_probability * (Real(1) - success_probability) /
                     Real(std::max<std::uint64_t>(trials, 1)));
  }
};

/// Trial t draws from stream (seed, t).
template <typename Real>
RetrievalStatistics<Real> retrieve_trials(const MatrixX<Real>& stored_op,
                                          const KrausMap<Real>& map,
                                          const PureState<Real>& psi,
                                          std::uint64_t trials, Seed seed) {
  const RetrievalExperiment<Real> exp(stored_op, map, psi);
  RetrievalStatistics<Real> stats;
  stats.trials = trials;
  stats.success_probability = exp.success_probability();
  const std::span<const Real> probs(exp.outcome_probabilities());
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto engine = stream_engine(seed, t);
    if (sample_index(probs, engine) == 0) ++stats.successes;
  }
  if (stats.successes > 0) {
    const Real fid =
        std::norm(exp.target().amplitudes().dot(exp.outcome(0).post_state.amplitudes()));
    stats.min_fidelity = fid;
  }
  return stats;
}

}  // namespace qevol
