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

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qevol/cp_map.hpp"
#include "qevol/random.hpp"
#include "test_util.hpp"

namespace qevol {
namespace {

using testing_util::max_abs;
using testing_util::random_kraus;

const double r2 = 1 / std::sqrt(2.0);

KrausMapd dephasing() { return KrausMapd({r2 * pauli<double>(0), r2 * pauli<double>(3)}); }

KrausMapd depolarizing() {
  std::vector<Matrixd> ops;
  for (int a = 0; a < 4; ++a) ops.push_back(pauli<double>(a) / 2.0);
  return KrausMapd(ops);
}

Matrixd projector(const Vectord& v) { return v * v.adjoint(); }

std::vector<double> eigenvalues_desc(const Matrixd& h) {
  Eigen::SelfAdjointEigenSolver<Matrixd> es(h);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  std::sort(v.rbegin(), v.rend());
  return v;
}

TEST(KrausMap, RejectsNonTracePreserving) {
  EXPECT_THROW(KrausMapd({pauli<double>(0), pauli<double>(3)}), InvalidArgument);
  EXPECT_THROW(KrausMapd({pauli<double>(0), Matrixd::Zero(3, 3)}), DimensionMismatch);
  EXPECT_THROW(KrausMapd(std::vector<Matrixd>{}), InvalidArgument);
}

TEST(Apply, Examples) {
  const Matrixd u = random_unitary<double>(3, 1);
  const Matrixd rho = projector(random_state<double>(3, 2));
  EXPECT_LT(max_abs(qevol::apply(KrausMapd::unitary(UnitaryOperatord(u)), rho) - u * rho * u.adjoint()),
            1e-12);
  const Matrixd zero = projector(Vectord::Unit(2, 0));
  EXPECT_LT(max_abs(qevol::apply(depolarizing(), zero) - Matrixd::Identity(2, 2) / 2.0), 1e-15);
  Vectord plus(2);
  plus << r2, r2;
  EXPECT_LT(max_abs(qevol::apply(dephasing(), projector(plus)) - Matrixd::Identity(2, 2) / 2.0), 1e-15);
  EXPECT_THROW(qevol::apply(dephasing(), Matrixd(Matrixd::Identity(3, 3))), DimensionMismatch);
}

TEST(Apply, OutputIsStateForRandomMaps) {
  for (Seed s = 0; s < 20; ++s) {
    const KrausMapd m(random_kraus(3, 4, s));
    const Matrixd out = qevol::apply(m, projector(random_state<double>(3, 100 + s)));
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-9);
    EXPECT_GT(eigenvalues_desc(out).back(), -1e-9);
  }
}

TEST(Choi, Examples) {
  const auto id = choi(KrausMapd::unitary(UnitaryOperatord::identity(2)));
  Vectord psi = Vectord::Zero(4);
  psi(0) = r2;
  psi(3) = r2;
  EXPECT_LT(max_abs(id.matrix - projector(psi)), 1e-15);
  EXPECT_TRUE(id.is_valid());
  EXPECT_LT(max_abs(choi(depolarizing()).matrix - Matrixd::Identity(4, 4) / 4.0), 1e-15);
  const auto ev = eigenvalues_desc(choi(dephasing()).matrix);
  EXPECT_NEAR(ev[0], 0.5, 1e-12);
  EXPECT_NEAR(ev[1], 0.5, 1e-12);
  EXPECT_NEAR(ev[2], 0.0, 1e-12);
}

TEST(Choi, ValidityChecks) {
  ChoiState<double> bad{2, Matrixd::Identity(4, 4)};
  EXPECT_FALSE(bad.is_valid());  // trace 4
  for (Seed s = 0; s < 10; ++s) EXPECT_TRUE(choi(KrausMapd(random_kraus(2, 3, s))).is_valid());
}

TEST(CanonicalKraus, UnitaryChannel) {
  const Matrixd u = random_unitary<double>(2, 9);
  const auto c = canonical_kraus(KrausMapd::unitary(UnitaryOperatord(u)));
  ASSERT_EQ(c.support_size(), 1u);
  EXPECT_NEAR(c.probabilities[0], 1.0, 1e-12);
  const Complexd phase = (u.adjoint() * c.operators[0]).trace() / 2.0;
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-10);
  EXPECT_LT(max_abs(c.operators[0] - phase * u), 1e-10);
}

TEST(CanonicalKraus, BitFlipProbabilities) {
  const double q = 0.25;
  const KrausMapd m({std::sqrt(1 - q) * pauli<double>(0), std::sqrt(q) * pauli<double>(1)});
  const auto c = canonical_kraus(m);
  ASSERT_EQ(c.support_size(), 2u);
  EXPECT_NEAR(c.probabilities[0], 0.75, 1e-12);
  EXPECT_NEAR(c.probabilities[1], 0.25, 1e-12);
  // operator 0 proportional to I, operator 1 to sigma_x
  EXPECT_NEAR(std::abs((c.operators[0]).trace()) / 2.0, std::sqrt(0.75), 1e-10);
  EXPECT_NEAR(std::abs((pauli<double>(1) * c.operators[1]).trace()) / 2.0, std::sqrt(0.25), 1e-10);
}

TEST(CanonicalKraus, OrthogonalityAndReconstruction) {
  for (Seed s = 0; s < 30; ++s) {
    const KrausMapd m(random_kraus(3, 1 + s % 5, 40 + s));
    const auto c = canonical_kraus(m);
    double total = 0;
    for (std::size_t a = 0; a < c.support_size(); ++a) {
      total += c.probabilities[a];
      if (a > 0) {
        EXPECT_GE(c.probabilities[a - 1], c.probabilities[a]);
      }
      for (std::size_t b = 0; b < c.support_size(); ++b) {
        const Complexd t = (c.operators[a].adjoint() * c.operators[b]).trace();
        const double want = a == b ? 3.0 * c.probabilities[a] : 0.0;
        EXPECT_LT(std::abs(t - want), 1e-9);
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_LT(choi_distance(c.to_map(), m), 1e-9);
    EXPECT_LE(c.support_size(), std::size_t(1 + s % 5));
  }
}

TEST(CanonicalKraus, MixedKrausSetsShareProbabilities) {
  const KrausMapd m(random_kraus(2, 2, 77));
  const Matrixd u = random_unitary<double>(2, 78);
  const auto a = canonical_kraus(m);
  const auto b = canonical_kraus(kraus_rotation(m, u));
  ASSERT_EQ(a.support_size(), b.support_size());
  for (std::size_t i = 0; i < a.support_size(); ++i) {
    EXPECT_NEAR(a.probabilities[i], b.probabilities[i], 1e-10);
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entropy(KrausMapd::unitary(UnitaryOperatord(random_unitary<double>(3, 5)))), 0.0,
              1e-12);
  EXPECT_NEAR(entropy(depolarizing()), 2.0, 1e-12);
  EXPECT_NEAR(entropy(dephasing()), 1.0, 1e-12);
}

TEST(Entropy, BoundsAndRotationInvariance) {
  for (Seed s = 0; s < 50; ++s) {
    const Eigen::Index d = 2 + s % 2;
    const Eigen::Index k = 1 + s % 4;
    const KrausMapd m(random_kraus(d, k, 500 + s));
    const Matrixd u = random_unitary<double>(k + 2, 900 + s).topRows(k + 1);
    const auto rotated = kraus_rotation(m, u);
    EXPECT_LT(choi_distance(m, rotated), 1e-9);
    EXPECT_NEAR(entropy(m), entropy(rotated), 1e-9);
    EXPECT_LT(max_abs(rotated.completeness() - Matrixd::Identity(d, d)), 1e-9);
    const double h = entropy(m);
    EXPECT_GE(h, -1e-12);
    EXPECT_LE(h, 2 * std::log2(double(d)) + 1e-12);
    EXPECT_EQ(h < 1e-9, canonical_kraus(m).support_size() == 1);
  }
}

TEST(KrausRotation, Examples) {
  const auto m = dephasing();
  const auto same = kraus_rotation(m, Matrixd(Matrixd::Identity(2, 2)));
  EXPECT_LT(max_abs(same[0] - m[0]), 1e-15);
  EXPECT_LT(max_abs(same[1] - m[1]), 1e-15);

  Matrixd h(2, 2);
  h << r2, r2, r2, -r2;
  const auto proj = kraus_rotation(m, h);
  Matrixd p0 = Matrixd::Zero(2, 2), p1 = Matrixd::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  EXPECT_LT(max_abs(proj[0] - p0), 1e-15);
  EXPECT_LT(max_abs(proj[1] - p1), 1e-15);
  EXPECT_TRUE(equivalent(m, proj));

  const KrausMapd three(random_kraus(2, 3, 12));
  EXPECT_TRUE(equivalent(three, kraus_rotation(three, random_unitary<double>(3, 13))));

  Matrixd bad = Matrixd::Identity(2, 2) * 2.0;
  EXPECT_THROW(kraus_rotation(m, bad), NotUnitary);
  EXPECT_THROW(kraus_rotation(three, Matrixd(Matrixd::Identity(2, 2))), DimensionMismatch);
}

TEST(Equivalent, DistinctMaps) {
  EXPECT_FALSE(equivalent(dephasing(), depolarizing()));
  EXPECT_TRUE(equivalent(dephasing(), dephasing()));
  EXPECT_THROW(equivalent(dephasing(), KrausMapd::unitary(UnitaryOperatord::identity(3))),
               DimensionMismatch);
}

TEST(Stinespring, UnitaryChannel) {
  const Matrixd u = random_unitary<double>(2, 31);
  const auto dil = stinespring(KrausMapd::unitary(UnitaryOperatord(u)));
  EXPECT_EQ(dil.ancilla_dim, 1);
  EXPECT_LT(max_abs(dil.global - u), 1e-12);
}

TEST(Stinespring, DephasingRoundTrip) {
  const auto dil = stinespring(dephasing());
  EXPECT_EQ(dil.ancilla_dim, 2);
  EXPECT_TRUE(is_unitary<double>(dil.global));
  for (Seed s = 0; s < 10; ++s) {
    const Matrixd rho = projector(random_state<double>(2, s));
    EXPECT_LT(max_abs(dil.apply(rho) - qevol::apply(dephasing(), rho)), 1e-10);
  }
  const auto back = kraus_from_ancilla_basis(dil, Matrixd(Matrixd::Identity(2, 2)));
  EXPECT_TRUE(equivalent(back, dephasing()));
  EXPECT_LT(max_abs(back[0] - dephasing()[0]), 1e-12);
}

TEST(Stinespring, FourierAncillaGivesProjectors) {
  const auto dil = stinespring(dephasing());
  const auto k = kraus_from_ancilla_basis(dil, fourier_matrix<double>(2));
  // Up to ordering, {(I + Z)/2, (I - Z)/2}.
  const Matrixd pp = (pauli<double>(0) + pauli<double>(3)) / 2.0;
  const Matrixd pm = (pauli<double>(0) - pauli<double>(3)) / 2.0;
  const bool direct = max_abs(k[0] - pp) < 1e-12 && max_abs(k[1] - pm) < 1e-12;
  const bool swapped = max_abs(k[0] - pm) < 1e-12 && max_abs(k[1] - pp) < 1e-12;
  EXPECT_TRUE(direct || swapped);
}

TEST(Stinespring, AnyAncillaBasisIsEquivalent) {
  for (Seed s = 0; s < 20; ++s) {
    const KrausMapd m(random_kraus(3, 4, 60 + s));
    const auto dil = stinespring(m);
    EXPECT_TRUE(is_unitary<double>(dil.global));
    const auto a = kraus_from_ancilla_basis(dil, random_unitary<double>(4, 70 + s));
    const auto b = kraus_from_ancilla_basis(dil, random_unitary<double>(4, 80 + s));
    EXPECT_TRUE(equivalent(a, b));
    EXPECT_TRUE(equivalent(a, m));
  }
  Matrixd bad = Matrixd::Identity(2, 2);
  bad(1, 1) = 0.5;
  EXPECT_THROW(kraus_from_ancilla_basis(stinespring(dephasing()), bad), InvalidArgument);
}

}  // namespace
}  // namespace qevol
