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

#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "qevol/evolution_store.hpp"
#include "qevol/random.hpp"
#include "test_util.hpp"

namespace qevol {
namespace {

using std::numbers::pi;
using testing_util::choose;
using testing_util::max_abs;
using testing_util::random_kraus;
using testing_util::z_score;

const double r2 = 1 / std::sqrt(2.0);

KrausMapd dephasing() { return KrausMapd({r2 * pauli<double>(0), r2 * pauli<double>(3)}); }

KrausMapd two_term(double p, const Matrixd& a, const Matrixd& b) {
  return KrausMapd({std::sqrt(p) * a, std::sqrt(1 - p) * b});
}

Matrixd exp_pauli(int axis, double theta) {  // exp(-i theta sigma)
  return std::cos(theta) * pauli<double>(0) - Complexd(0, std::sin(theta)) * pauli<double>(axis);
}

// Rotated Pauli channel {sqrt(p_a) U sigma_a}: canonical operators are unitary.
KrausMapd rotated_pauli(const Matrixd& u, const std::vector<double>& p) {
  std::vector<Matrixd> ops;
  for (int a = 0; a < 4; ++a) ops.push_back(std::sqrt(p[a]) * u * pauli<double>(a));
  return KrausMapd(ops);
}

TEST(Store, IdentityChannel) {
  const EvolutionSequence<double> seq(KrausMapd::unitary(UnitaryOperatord::identity(2)),
                                      {0, 0, 0});
  const auto s = store(seq);
  ASSERT_EQ(s.states.size(), 3u);
  for (const auto& v : s.states) {
    EXPECT_LT((v - max_entangled<double>(2)).norm(), 1e-12);
  }
}

TEST(Store, DephasingStatesAreOrthogonal) {
  const auto s = store(EvolutionSequence<double>(dephasing(), {0, 1}));
  EXPECT_NEAR(std::abs(s.states[0].dot(s.states[1])), 0.0, 1e-15);
  Vectord want = Vectord::Zero(4);
  want(0) = r2;
  want(3) = -r2;
  EXPECT_LT((s.states[1] - want).norm(), 1e-12);
  EXPECT_THROW(EvolutionSequence<double>(dephasing(), {0, 2}), InvalidArgument);
}

TEST(Store, NonOrthogonalEnsembleOverlap) {
  const Matrixd h = (pauli<double>(1) + pauli<double>(3)) / std::sqrt(2.0);
  const Matrixd phase_h = Complexd(0, 1) * h;  // unitary with tr = 0 after phase
  const Matrixd g = exp_pauli(1, 0.3);
  const auto s = store(EvolutionSequence<double>(two_term(0.5, pauli<double>(0), g), {0, 1}));
  EXPECT_NEAR(std::abs(s.states[0].dot(s.states[1])), std::abs(g.trace()) / 2.0, 1e-12);
  EXPECT_NEAR(std::abs(storage_state(pauli<double>(0)).dot(storage_state(phase_h))), 0.0, 1e-12);
}

TEST(Store, InnerProductsMatchTraceFormula) {
  std::mt19937_64 eng(8);
  for (int t = 0; t < 30; ++t) {
    const Matrixd a = ginibre<double>(3, 3, eng);
    const Matrixd b = ginibre<double>(3, 3, eng);
    const Complexd got = storage_state(a).dot(storage_state(b));
    const Complexd want = (a.adjoint() * b).trace() / std::sqrt((a.adjoint() * a).trace().real() *
                                                                (b.adjoint() * b).trace().real());
    EXPECT_LT(std::abs(got - want), 1e-10);
  }
  EXPECT_THROW(storage_state(Matrixd(Matrixd::Zero(2, 2))), InvalidArgument);
}

TEST(CompressionRate, Examples) {
  EXPECT_NEAR(compression_rate(KrausMapd::unitary(UnitaryOperatord(pauli<double>(2)))), 0.0, 1e-12);
  EXPECT_NEAR(compression_rate(dephasing()), 1.0, 1e-12);
  std::vector<Matrixd> dep;
  for (int a = 0; a < 4; ++a) dep.push_back(pauli<double>(a) / 2.0);
  EXPECT_NEAR(compression_rate(KrausMapd(dep)), 2.0, 1e-12);
}

TEST(TypicalCompress, UniformKeepsEverything) {
  const auto r = typical_compress(dephasing(), 10, 0.5);
  EXPECT_EQ(r.kept_dim, 1024u);
  EXPECT_NEAR(r.infidelity_bound, 0.0, 1e-12);
  EXPECT_NEAR(r.rate, 1.0, 1e-12);
}

TEST(TypicalCompress, BiasedBinomialOracle) {
  const int n = 16;
  const double delta = 0.1;
  const auto r = typical_compress(two_term(0.9, pauli<double>(0), pauli<double>(3)), n, delta);
  // strongly typical: |k/n - 0.1| <= delta on the minority count k
  double kept = 0, mass = 0;
  for (int k = 0; k <= n; ++k) {
    if (std::abs(double(k) / n - 0.1) <= delta + 1e-12) {
      kept += choose(n, k);
      mass += choose(n, k) * std::pow(0.1, k) * std::pow(0.9, n - k);
    }
  }
  EXPECT_EQ(double(r.kept_dim), kept);
  EXPECT_NEAR(r.infidelity_bound, 1 - mass, 1e-12);
  const double h = testing_util::h_bits({0.9, 0.1});
  EXPECT_GE(r.rate, h - 0.2);
  EXPECT_LE(r.rate, h + 0.2);
  EXPECT_LT(r.infidelity_bound, 0.35);
}

TEST(TypicalCompress, UnitaryChannelAndLimits) {
  const auto r = typical_compress(KrausMapd::unitary(UnitaryOperatord::identity(2)), 12, 0.05);
  EXPECT_EQ(r.kept_dim, 1u);
  EXPECT_NEAR(r.infidelity_bound, 0.0, 1e-12);
  EXPECT_THROW(typical_compress(dephasing(), 21, 0.1), CapacityExceeded);
  EXPECT_THROW(typical_compress(dephasing(), 0, 0.1), InvalidArgument);
}

TEST(CompressAtTailMass, RateDecreasesTowardEntropy) {
  const auto m = two_term(0.75, pauli<double>(0), pauli<double>(3));
  const double h = testing_util::h_bits({0.75, 0.25});
  double previous = 2.0;
  for (int n : {4, 8, 12, 16}) {
    const auto r = compress_at_tail_mass(m, n, 0.01);
    EXPECT_LE(r.infidelity_bound, 0.01 + 1e-12);
    EXPECT_LT(r.rate, previous);
    EXPECT_GT(r.rate, h);
    previous = r.rate;
  }
}

TEST(CompressAtTailMass, BruteForceSmallestSet) {
  // Oracle: sort all 2^n string probabilities.
  const int n = 10;
  const double p = 0.8;
  std::vector<double> probs;
  for (unsigned s = 0; s < (1u << n); ++s) {
    const int k = __builtin_popcount(s);
    probs.push_back(std::pow(1 - p, k) * std::pow(p, n - k));
  }
  std::sort(probs.rbegin(), probs.rend());
  const double eps = 0.05;
  double mass = 0;
  std::uint64_t kept = 0;
  while (mass < 1 - eps) mass += probs[kept++];
  const auto r = compress_at_tail_mass(two_term(p, pauli<double>(0), pauli<double>(3)), n, eps);
  EXPECT_EQ(r.kept_dim, kept);
}

TEST(Verify, UnitaryChannelAlwaysVerified) {
  const auto m = KrausMapd::unitary(UnitaryOperatord(random_unitary<double>(2, 4)));
  const auto dil = stinespring(m);
  const Matrixd basis = Matrixd::Identity(1, 1);
  const auto report = verify_sequence(dil, basis, EvolutionSequence<double>(m, {0, 0, 0, 0}), 3);
  EXPECT_TRUE(report.verified);
}

TEST(Verify, DephasingBornRule) {
  const auto dil = stinespring(dephasing());
  const Matrixd basis = Matrixd::Identity(2, 2);
  const std::size_t steps = 10000;
  const auto honest = source_record(dil, basis, steps, 99);
  const auto report = verify_sequence(dil, basis, honest, 99);
  EXPECT_TRUE(report.verified);
  EXPECT_LT(z_score(report.outcome_counts[0], steps, 0.5), 3.0);
  EXPECT_NEAR(report.outcome_probabilities[0], 0.5, 1e-12);
}

TEST(Verify, FourierBasisInducesProjectors) {
  const auto dil = stinespring(dephasing());
  const Matrixd f = fourier_matrix<double>(2);
  const auto honest = source_record(dil, f, 50, 1);
  const Matrixd p0 = (pauli<double>(0) + pauli<double>(3)) / 2.0;
  EXPECT_TRUE(max_abs(honest.map[0] - p0) < 1e-12 || max_abs(honest.map[1] - p0) < 1e-12);
  EXPECT_TRUE(verify_sequence(dil, f, honest, 1).verified);
  // Claiming {I, sigma_z} against the Fourier readout is a mismatch.
  EXPECT_THROW(verify_sequence(dil, f, EvolutionSequence<double>(dephasing(), {0}), 1),
               InvalidArgument);
}

TEST(Verify, CorruptedRecordRejectedAtBornWeight) {
  const auto m = two_term(0.5, pauli<double>(0), exp_pauli(1, pi / 6));
  const auto dil = stinespring(m);
  const Matrixd basis = Matrixd::Identity(2, 2);
  const std::size_t steps = 20000;
  auto honest = source_record(dil, basis, steps, 5);
  std::vector<std::size_t> flipped = honest.indices;
  for (auto& i : flipped) i = 1 - i;
  const auto report = verify_sequence(dil, basis, EvolutionSequence<double>(m, flipped), 5);
  // 1 - |<psi_0|psi_1>|^2 = 1 - cos^2(pi/6)
  const double want = 1 - std::pow(std::cos(pi / 6), 2);
  EXPECT_FALSE(report.verified);
  EXPECT_LT(z_score(report.rejected_steps, steps, want), 5.0);

  // One flipped step of an orthogonal ensemble is always caught.
  const auto ddil = stinespring(dephasing());
  auto rec = source_record(ddil, basis, 30, 8);
  rec.indices[7] = 1 - rec.indices[7];
  const auto r = verify_sequence(ddil, basis, rec, 8);
  EXPECT_FALSE(r.verified);
  EXPECT_EQ(r.rejected_steps, 1u);
  EXPECT_FALSE(r.steps[7].accepted);
}

TEST(Retrieve, PhaseGateHalfSuccess) {
  const double a = 0.4, b = -0.9;
  const Matrixd ua = exp_pauli(3, -a), ub = exp_pauli(3, -b);  // exp(i a sigma_z)
  const auto m = two_term(0.7, ua, ub);
  const PureStated psi(random_state<double>(2, 31));
  const RetrievalExperiment<double> exp(ua, m, psi);
  EXPECT_EQ(exp.support_dim(), 2);
  EXPECT_FALSE(exp.dilated());
  EXPECT_NEAR(exp.success_probability(), 0.5, 1e-12);
  const auto ok = exp.outcome(0);
  ASSERT_TRUE(ok.output.has_value());
  EXPECT_NEAR(ok.output->overlap(PureStated::normalized(ua * psi.amplitudes())), 1.0, 1e-9);
  const auto fail = exp.outcome(1);
  EXPECT_FALSE(fail.heralded_success);
  EXPECT_FALSE(fail.output.has_value());
}

TEST(Retrieve, GenericUnitaryQuarterSuccess) {
  const Matrixd u = random_unitary<double>(2, 17);
  const auto m = rotated_pauli(u, {0.4, 0.3, 0.2, 0.1});
  const PureStated psi(random_state<double>(2, 18));
  const RetrievalExperiment<double> exp(u, m, psi);
  EXPECT_EQ(exp.support_dim(), 4);
  EXPECT_NEAR(exp.success_probability(), 0.25, 1e-12);
  EXPECT_NEAR(exp.outcome(0).output->overlap(PureStated::normalized(u * psi.amplitudes())), 1.0,
              1e-9);
  double total = 0;
  for (double p : exp.outcome_probabilities()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Retrieve, IdentitySupportOfOne) {
  const auto m = KrausMapd::unitary(UnitaryOperatord::identity(2));
  const PureStated psi(random_state<double>(2, 1));
  const auto r = probabilistic_retrieve(std::size_t(0), m, psi, 4);
  EXPECT_TRUE(r.heralded_success);
  EXPECT_NEAR(r.success_probability, 1.0, 1e-12);
  EXPECT_NEAR(r.output->overlap(psi), 1.0, 1e-12);
}

TEST(Retrieve, OutsideSupportRejected) {
  const auto m = two_term(0.7, exp_pauli(3, 0.2), exp_pauli(3, 1.1));
  const PureStated psi(random_state<double>(2, 1));
  EXPECT_THROW(probabilistic_retrieve(pauli<double>(1), m, psi, 0), InvalidArgument);
  EXPECT_THROW(probabilistic_retrieve(std::size_t(5), m, psi, 0), InvalidArgument);
}

TEST(Retrieve, RandomTriplesFidelityAndFormula) {
  for (Seed s = 0; s < 50; ++s) {
    const Eigen::Index d = 2 + s % 2;
    const KrausMapd m(random_kraus(d, 2 + s % 3, 1000 + s));
    const std::size_t i = s % m.size();
    const PureStated psi(random_state<double>(d, 2000 + s));
    const RetrievalExperiment<double> exp(m[i], m, psi);
    const auto ok = exp.outcome(0);
    EXPECT_NEAR(ok.output->overlap(PureStated::normalized(m[i] * psi.amplitudes())), 1.0, 1e-9);

    // Oracle: herald weight |M_i psi|^2 / (n_i^2 D s^2), s the largest
    // singular value of the normalized canonical operators.
    const auto canon = canonical_kraus(m);
    double s_max = 0;
    for (std::size_t mu = 0; mu < canon.support_size(); ++mu) {
      const Matrixd hat = canon.operators[mu] / std::sqrt(canon.probabilities[mu]);
      s_max = std::max(s_max, Eigen::JacobiSVD<Matrixd>(hat).singularValues()(0));
    }
    if (!exp.dilated()) s_max = 1;
    const double n2 = m[i].squaredNorm() / double(d);
    const double want = (m[i] * psi.amplitudes()).squaredNorm() /
                        (n2 * double(canon.support_size()) * s_max * s_max);
    EXPECT_NEAR(exp.success_probability(), want, 1e-10);
  }
}

TEST(Retrieve, HeraldRateStatistics) {
  const Matrixd u = random_unitary<double>(2, 40);
  const auto m = rotated_pauli(u, {0.4, 0.3, 0.2, 0.1});
  const PureStated psi(random_state<double>(2, 41));
  const std::uint64_t trials = 100000;
  const auto stats = retrieve_trials(u, m, psi, trials, 2026);
  EXPECT_LT(z_score(stats.successes, trials, 0.25), 5.0);
  EXPECT_NEAR(stats.min_fidelity, 1.0, 1e-9);
  const auto again = retrieve_trials(u, m, psi, trials, 2026);
  EXPECT_EQ(stats.successes, again.successes);
}

}  // namespace
}  // namespace qevol
