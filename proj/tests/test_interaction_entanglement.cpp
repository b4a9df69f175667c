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

#include <cmath>
#include <numbers>

#include "qevol/cp_map.hpp"
#include "qevol/interaction_entanglement.hpp"
#include "qevol/random.hpp"
#include "test_util.hpp"

namespace qevol {
namespace {

using std::numbers::pi;
using testing_util::choose;
using testing_util::h_bits;
using testing_util::max_abs;

Matrixd cnot() {
  Matrixd m = Matrixd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

Matrixd swap_gate() {
  Matrixd m = Matrixd::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

Matrixd xx_gate(double theta) {  // cos I - i sin X (x) X
  const Matrixd xx = kron<double>(pauli<double>(1), pauli<double>(1));
  return std::cos(theta) * Matrixd::Identity(4, 4) - Complexd(0, std::sin(theta)) * xx;
}

BipartiteUnitaryd qubits(const Matrixd& m) { return {UnitaryOperatord(m), 2, 2}; }

TEST(BipartiteUnitary, Validation) {
  EXPECT_THROW(BipartiteUnitaryd(UnitaryOperatord::identity(4), 2, 3), DimensionMismatch);
  const auto p = BipartiteUnitaryd::product(UnitaryOperatord(pauli<double>(1)),
                                            UnitaryOperatord::identity(3));
  EXPECT_EQ(p.dim_a(), 2);
  EXPECT_EQ(p.dim_b(), 3);
}

TEST(BipartiteExpand, ProductWithMatchingPrefactors) {
  const Matrixd ua = random_unitary<double>(2, 1), ub = random_unitary<double>(3, 2);
  const auto u = BipartiteUnitaryd::product(UnitaryOperatord(ua), UnitaryOperatord(ub));
  const Matrixd c = bipartite_expand(u, pauli_basis(UnitaryOperatord(ua)),
                                     weyl_basis<double>(3, UnitaryOperatord(ub)));
  EXPECT_NEAR(std::abs(c(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(c.squaredNorm(), 1.0, 1e-12);
}

TEST(BipartiteExpand, CnotAndSwap) {
  const auto pa = pauli_basis<double>(1);
  const Matrixd c = bipartite_expand(qubits(cnot()), pa, pa);
  Matrixd want = Matrixd::Zero(4, 4);
  want(0, 0) = want(0, 1) = want(3, 0) = 0.5;
  want(3, 1) = -0.5;
  EXPECT_LT(max_abs(c - want), 1e-15);

  const Matrixd s = bipartite_expand(qubits(swap_gate()), pa, pa);
  EXPECT_LT(max_abs(s - 0.5 * Matrixd::Identity(4, 4)), 1e-15);
  EXPECT_THROW(bipartite_expand(qubits(cnot()), weyl_basis<double>(3), pa), DimensionMismatch);
}

TEST(OperatorSchmidt, Examples) {
  const auto c = operator_schmidt(qubits(cnot()));
  ASSERT_EQ(c.rank(), 2u);
  EXPECT_NEAR(c.values(0), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(c.values(1), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(c.entropy(), 1.0, 1e-12);

  const auto s = operator_schmidt(qubits(swap_gate()));
  ASSERT_EQ(s.rank(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(s.values(k), 0.5, 1e-12);
  EXPECT_NEAR(s.entropy(), 2.0, 1e-12);

  const auto p = operator_schmidt(BipartiteUnitaryd::product(
      UnitaryOperatord(random_unitary<double>(2, 3)), UnitaryOperatord(random_unitary<double>(2, 4))));
  EXPECT_EQ(p.rank(), 1u);
  EXPECT_NEAR(p.values(0), 1.0, 1e-12);
  EXPECT_NEAR(p.entropy(), 0.0, 1e-12);
}

TEST(OperatorSchmidt, LocalOperatorsAreOrthonormal) {
  const auto s = operator_schmidt(qubits(swap_gate()));
  for (std::size_t j = 0; j < s.rank(); ++j) {
    for (std::size_t k = 0; k < s.rank(); ++k) {
      const double want = j == k ? 1.0 : 0.0;
      EXPECT_LT(std::abs((s.a_ops[j].adjoint() * s.a_ops[k]).trace() / 2.0 - want), 1e-10);
      EXPECT_LT(std::abs((s.b_ops[j].adjoint() * s.b_ops[k]).trace() / 2.0 - want), 1e-10);
    }
  }
  // degenerate values: deterministic output
  const auto again = operator_schmidt(qubits(swap_gate()));
  for (int k = 0; k < 4; ++k) EXPECT_LT(max_abs(again.a_ops[k] - s.a_ops[k]), 1e-15);
}

TEST(OperatorSchmidt, RandomReconstruction) {
  const std::vector<std::pair<int, int>> shapes{{2, 2}, {2, 3}, {3, 3}};
  for (Seed s = 0; s < 50; ++s) {
    const auto [da, db] = shapes[s % 3];
    const BipartiteUnitaryd u(UnitaryOperatord(random_unitary<double>(da * db, 100 + s)), da, db);
    const auto os = operator_schmidt(u);
    EXPECT_LT((os.reconstruct() - u.matrix()).norm(), 1e-9);
    EXPECT_NEAR(os.values.squaredNorm(), 1.0, 1e-10);
    for (Eigen::Index k = 1; k < os.values.size(); ++k) EXPECT_GE(os.values(k - 1), os.values(k));
    EXPECT_LE(os.entropy(), 2 * std::log2(double(std::min(da, db))) + 1e-12);
  }
}

TEST(InteractionEntanglement, Examples) {
  const Matrixd xxmax = (Matrixd::Identity(4, 4) +
                         Complexd(0, 1) * kron<double>(pauli<double>(1), pauli<double>(1))) /
                        std::sqrt(2.0);
  EXPECT_NEAR(interaction_entanglement(qubits(xxmax)), 1.0, 1e-12);
  EXPECT_NEAR(interaction_entanglement(qubits(xx_gate(pi / 6))), h_bits({0.75, 0.25}), 1e-12);
  EXPECT_NEAR(interaction_entanglement(qubits(cnot())), 1.0, 1e-12);
}

TEST(InteractionEntanglement, LocalUnitaryInvariance) {
  for (Seed s = 0; s < 20; ++s) {
    const Matrixd u = random_unitary<double>(6, 200 + s);
    const Matrixd left = kron<double>(random_unitary<double>(2, 300 + s),
                                      random_unitary<double>(3, 400 + s));
    const Matrixd right = kron<double>(random_unitary<double>(2, 500 + s),
                                       random_unitary<double>(3, 600 + s));
    const BipartiteUnitaryd a(UnitaryOperatord(u), 2, 3);
    const BipartiteUnitaryd b(UnitaryOperatord(Matrixd(left * u * right)), 2, 3);
    EXPECT_NEAR(interaction_entanglement(a), interaction_entanglement(b), 1e-9);
  }
}

TEST(OperatorSchmidt, ValuesIndependentOfExpansionBasis) {
  Matrixd k = random_unitary<double>(4, 9);
  const auto rotated = rotate_basis(pauli_basis<double>(1), BasisRotation<double>(k));
  for (Seed s = 0; s < 10; ++s) {
    const auto u = qubits(random_unitary<double>(4, 700 + s));
    const auto p = operator_schmidt(u, pauli_basis<double>(1), pauli_basis<double>(1));
    const auto w = operator_schmidt(u, weyl_basis<double>(2), weyl_basis<double>(2));
    const auto r = operator_schmidt(u, rotated, pauli_basis(UnitaryOperatord(random_unitary<double>(2, 8))));
    ASSERT_EQ(p.rank(), w.rank());
    ASSERT_EQ(p.rank(), r.rank());
    for (Eigen::Index i = 0; i < Eigen::Index(p.rank()); ++i) {
      EXPECT_NEAR(p.values(i), w.values(i), 1e-9);
      EXPECT_NEAR(p.values(i), r.values(i), 1e-9);
    }
    EXPECT_LT((r.reconstruct() - u.matrix()).norm(), 1e-9);
  }
}

TEST(InducedLocalMap, Examples) {
  const auto prod = BipartiteUnitaryd::product(UnitaryOperatord(random_unitary<double>(2, 1)),
                                               UnitaryOperatord(random_unitary<double>(2, 2)));
  EXPECT_NEAR(entropy(induced_local_map(prod, Side::first)), 0.0, 1e-10);
  EXPECT_NEAR(entropy(induced_local_map(prod, Side::first, MaximallyMixed{})), 0.0, 1e-10);
  EXPECT_NEAR(entropy(induced_local_map(qubits(cnot()), Side::first, MaximallyMixed{})), 1.0,
              1e-10);
  EXPECT_NEAR(entropy(induced_local_map(qubits(swap_gate()), Side::first, MaximallyMixed{})), 2.0,
              1e-10);
  // CNOT with the target fixed to |0> copies the control: a dephasing map
  const auto copy = induced_local_map(qubits(cnot()), Side::first);
  Matrixd plus = Matrixd::Constant(2, 2, 0.5);
  EXPECT_LT(max_abs(qevol::apply(copy, plus) - Matrixd::Identity(2, 2) / 2.0), 1e-12);
  EXPECT_THROW(induced_local_map(qubits(cnot()), Side::first, TracedInput<double>(Vectord::Unit(3, 0))),
               DimensionMismatch);
}

TEST(InducedLocalMap, EntropyEqualsInteractionEntanglement) {
  for (Seed s = 0; s < 30; ++s) {
    const int da = 2 + s % 2, db = 2 + (s / 2) % 2;
    const BipartiteUnitaryd u(UnitaryOperatord(random_unitary<double>(da * db, 800 + s)), da, db);
    const double su = interaction_entanglement(u);
    EXPECT_NEAR(entropy(induced_local_map(u, Side::first, MaximallyMixed{})), su, 1e-9);
    EXPECT_NEAR(entropy(induced_local_map(u, Side::second, MaximallyMixed{})), su, 1e-9);
  }
}

TEST(Concentrate, SingleCopy) {
  const double a = std::sqrt(0.3);
  const auto r = concentrate<double>(1, a, Complexd(0, std::sqrt(0.7)),
                                     ConcentrationMode::combinatorial, 1);
  ASSERT_EQ(r.distribution.size(), 2u);
  EXPECT_EQ(r.distribution[0].k, 1);
  EXPECT_NEAR(r.distribution[0].probability, 0.3, 1e-15);
  EXPECT_NEAR(r.distribution[1].probability, 0.7, 1e-15);
  EXPECT_EQ(r.distribution[1].term_count, 1u);
}

TEST(Concentrate, TwoCopiesExactMatrix) {
  const double r2 = 1 / std::sqrt(2.0);
  const auto r = concentrate<double>(2, r2, Complexd(0, r2), ConcentrationMode::exact_matrix, 3);
  const std::vector<double> want{0.25, 0.5, 0.25};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.distribution[i].probability, want[i], 1e-12);
    EXPECT_NEAR(r.simulated[i], want[i], 1e-10);
    EXPECT_EQ(r.distribution[i].eigenvalue, 2 * r.distribution[i].k - 2);
  }
  EXPECT_EQ(r.distribution[1].term_count, 2u);
  EXPECT_TRUE(r.equal_weights);
  EXPECT_LT(r.max_deviation, 1e-10);
  EXPECT_NEAR(r.sector_entanglement[0], 0.0, 1e-10);
  EXPECT_NEAR(r.sector_entanglement[1], 1.0, 1e-10);
  EXPECT_NEAR(r.sector_entanglement[2], 0.0, 1e-10);
}

TEST(Concentrate, ExactMatrixAgreesUpToFour) {
  for (int n = 1; n <= 4; ++n) {
    for (double a2 : {0.5, 0.8}) {
      const auto r = concentrate<double>(n, std::sqrt(a2), Complexd(0, std::sqrt(1 - a2)),
                                         ConcentrationMode::exact_matrix, 0);
      double total = 0;
      for (std::size_t i = 0; i < r.distribution.size(); ++i) {
        const int k = r.distribution[i].k;
        const double p = choose(n, k) * std::pow(a2, k) * std::pow(1 - a2, n - k);
        EXPECT_NEAR(r.distribution[i].probability, p, 1e-12);
        EXPECT_NEAR(r.simulated[i], p, 1e-10);
        EXPECT_NEAR(r.sector_entanglement[i], std::log2(choose(n, k)), 1e-9);
        total += r.distribution[i].probability;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_TRUE(r.equal_weights);
    }
  }
  EXPECT_THROW(concentrate<double>(5, 1.0, 0.0, ConcentrationMode::exact_matrix, 0),
               CapacityExceeded);
  EXPECT_THROW(concentrate<double>(2, 0.9, 0.9, ConcentrationMode::combinatorial, 0),
               InvalidArgument);
  EXPECT_THROW(concentrate<double>(65, 1.0, 0.0, ConcentrationMode::combinatorial, 0),
               CapacityExceeded);
}

TEST(Concentrate, SixteenCopiesPeak) {
  const auto r = concentrate<double>(16, std::sqrt(0.75), Complexd(0, 0.5),
                                     ConcentrationMode::combinatorial, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.distribution.size(); ++i)
    if (r.distribution[i].probability > r.distribution[best].probability) best = i;
  EXPECT_EQ(r.distribution[best].k, 12);
  EXPECT_EQ(r.distribution[best].term_count, 1820u);
}

TEST(ConcentrationYield, Examples) {
  for (int n : {1, 5, 20}) EXPECT_NEAR(concentration_yield<double>(n, 1.0), 0.0, 1e-15);
  double oracle = 0;
  for (int k = 0; k <= 10; ++k) oracle += choose(10, k) / 1024.0 * std::log2(choose(10, k));
  EXPECT_NEAR(concentration_yield<double>(10, std::sqrt(0.5)), oracle, 1e-12);
}

TEST(ConcentrationYield, RatioIncreasesTowardEntropy) {
  const double a = std::sqrt(0.7);
  const double h = h_bits({0.7, 0.3});
  double previous = 0;
  for (int n : {4, 8, 16, 32}) {
    const double ratio = concentration_yield<double>(n, a) / n;
    EXPECT_GT(ratio, previous);
    EXPECT_LT(ratio, h);
    previous = ratio;
  }
}

}  // namespace
}  // namespace qevol
