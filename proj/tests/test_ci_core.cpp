#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "orbent/basis.hpp"
#include "orbent/hamiltonian.hpp"
#include "orbent/solver.hpp"
#include "orbent/spin.hpp"
#include "support.hpp"

using namespace orbent;
using orbent::test_support::make_basis;
using orbent::test_support::operator_algebra_hamiltonian;
using orbent::test_support::random_integrals;
using orbent::test_support::random_vector;

TEST(Basis, Dimensions) {
  EXPECT_EQ(enumerate_basis(2, 1, 1).size(), 4u);
  EXPECT_EQ(enumerate_basis(9, 5, 4).size(), 15876u);
  const auto b = enumerate_basis(2, 2, 0);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.determinant(0).alpha, Bits{0b11});
  EXPECT_EQ(b.determinant(0).beta, Bits{0});
  EXPECT_EQ(enumerate_basis(3, 0, 0).size(), 1u);
  EXPECT_THROW(enumerate_basis(2, 3, 0), Error);
  EXPECT_THROW(enumerate_basis(2, 0, -1), Error);
}

TEST(Basis, CanonicalOrderAndBijection) {
  const auto b = enumerate_basis(6, 3, 2);
  EXPECT_EQ(b.size(), binomial(6, 3) * binomial(6, 2));
  EXPECT_TRUE(std::is_sorted(b.alpha_strings().begin(), b.alpha_strings().end()));
  EXPECT_TRUE(std::is_sorted(b.beta_strings().begin(), b.beta_strings().end()));
  std::set<std::pair<Bits, Bits>> seen;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto d = b.determinant(k);
    EXPECT_EQ(popcount(d.alpha), 3);
    EXPECT_EQ(popcount(d.beta), 2);
    EXPECT_EQ(d.alpha >> 6, 0u);
    EXPECT_TRUE(seen.insert({d.alpha, d.beta}).second);
    EXPECT_EQ(b.find(d.alpha, d.beta), static_cast<std::int64_t>(k));
  }
}

TEST(Basis, SymmetrySectorsPartitionTheSpace) {
  const std::vector<int> orbsym{1, 2, 3, 4, 1, 2};
  std::size_t total = 0;
  for (int isym = 1; isym <= 4; ++isym) {
    const auto b = enumerate_basis(6, 2, 2, orbsym, isym);
    for (std::size_t k = 0; k < b.size(); ++k)
      EXPECT_EQ(determinant_irrep(b.determinant(k), orbsym), isym - 1);
    total += b.size();
  }
  EXPECT_EQ(total, enumerate_basis(6, 2, 2).size());
}

// Two routes to the same double excitation through single-excitation lists
// must agree on sign.
TEST(Basis, DoubleExcitationSignIsPathIndependent) {
  const auto b = enumerate_basis(7, 4, 0);
  const auto& singles = b.alpha_singles();
  auto step = [&](std::uint32_t from, int p, int q, int& sign) -> std::int64_t {
    for (const auto& e : singles[from])
      if (e.p == p && e.q == q) {
        sign *= e.sign;
        return e.target;
      }
    return -1;
  };
  int checked = 0;
  for (std::uint32_t i = 0; i < b.alpha_strings().size(); ++i) {
    const Bits s = b.alpha_strings()[i];
    for (int p = 0; p < 7; ++p)
      for (int q = 0; q < 7; ++q)
        for (int a = 0; a < 7; ++a)
          for (int c = 0; c < 7; ++c) {
            if (!(s & bit(p)) || !(s & bit(q)) || p == q) continue;
            if ((s & bit(a)) || (s & bit(c)) || a == c) continue;
            int s1 = 1, s2 = 1;
            const auto k1 = step(i, a, p, s1);
            const auto j1 = step(static_cast<std::uint32_t>(k1), c, q, s1);
            const auto k2 = step(i, c, q, s2);
            const auto j2 = step(static_cast<std::uint32_t>(k2), a, p, s2);
            ASSERT_EQ(j1, j2);
            ASSERT_EQ(s1, s2);
            ++checked;
          }
  }
  EXPECT_GT(checked, 0);
}

TEST(Hamiltonian, SingleDeterminantDiagonal) {
  auto single = make_basis(2, 2, 2);
  IntegralSet four(2, 4, 0);
  four.set_core_energy(0.25);
  four.set_h(1, 1, -1.0);
  four.set_h(2, 2, -0.5);
  four.set_eri(1, 1, 1, 1, 0.7);
  four.set_eri(2, 2, 2, 2, 0.6);
  four.set_eri(1, 1, 2, 2, 0.4);
  four.set_eri(1, 2, 2, 1, 0.1);
  Hamiltonian ham(four, single);
  // 2(h11 + h22) + J11 + J22 + 4 J12 - 2 K12
  const double expected = 0.25 + 2 * (-1.0 - 0.5) + 0.7 + 0.6 + 4 * 0.4 - 2 * 0.1;
  Eigen::VectorXd one(1);
  one << 1.0;
  EXPECT_NEAR(ham.sigma(one)(0), expected, 1e-14);
  EXPECT_NEAR(ham.diagonal_element(single->determinant(0)), expected, 1e-14);
  EXPECT_NEAR(operator_algebra_hamiltonian(four, *single)(0, 0), expected, 1e-14);
}

class SigmaOracle : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(SigmaOracle, MatchesOperatorAlgebra) {
  const auto [n, na, nb] = GetParam();
  std::mt19937 rng(100 + 10 * n + na + 3 * nb);
  const auto ints = random_integrals(n, na + nb, na - nb, rng, std::nullopt, 0.3);
  auto basis = make_basis(n, na, nb);
  Hamiltonian ham(ints, basis);
  const Eigen::MatrixXd reference = operator_algebra_hamiltonian(ints, *basis);
  const auto dim = static_cast<Eigen::Index>(basis->size());
  ASSERT_LT((reference - reference.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  Eigen::MatrixXd from_elements(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      from_elements(i, j) = ham.element(basis->spin_orbital_mask(static_cast<std::size_t>(i)),
                                        basis->spin_orbital_mask(static_cast<std::size_t>(j)));
  EXPECT_LT((from_elements - reference).cwiseAbs().maxCoeff(), 1e-12);
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::VectorXd c = random_vector(basis->size(), rng);
    EXPECT_LT((ham.sigma(c) - reference * c).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LT((ham.diagonal() - reference.diagonal()).cwiseAbs().maxCoeff(), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(SmallSpaces, SigmaOracle,
                         ::testing::Values(std::tuple{2, 1, 1}, std::tuple{2, 2, 0},
                                           std::tuple{3, 2, 1}, std::tuple{3, 1, 1},
                                           std::tuple{4, 2, 2}, std::tuple{4, 3, 1},
                                           std::tuple{4, 1, 0}, std::tuple{5, 2, 1}));

TEST(Hamiltonian, SigmaIsSymmetricLinearOperator) {
  std::mt19937 rng(3);
  const auto ints = random_integrals(6, 6, 0, rng, std::nullopt, 0.2);
  auto basis = make_basis(6, 3, 3);
  Hamiltonian ham(ints, basis);
  for (int t = 0; t < 5; ++t) {
    const Eigen::VectorXd x = random_vector(basis->size(), rng);
    const Eigen::VectorXd y = random_vector(basis->size(), rng);
    const double lhs = x.dot(ham.sigma(y));
    const double rhs = ham.sigma(x).dot(y);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
    const Eigen::VectorXd combo = ham.sigma(Eigen::VectorXd(2.0 * x - 0.5 * y));
    EXPECT_LT((combo - (2.0 * ham.sigma(x) - 0.5 * ham.sigma(y))).cwiseAbs().maxCoeff(), 1e-11);
  }
  EXPECT_THROW(ham.sigma(Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST(Hamiltonian, SymmetryRestrictedSigmaIsProjection) {
  std::mt19937 rng(5);
  const std::vector<int> orbsym{1, 2, 1, 2, 3};
  const auto ints = random_integrals(5, 4, 0, rng, orbsym);
  auto full = make_basis(5, 2, 2);
  auto sector = std::make_shared<const DeterminantBasis>(5, 2, 2, orbsym, 1);
  const Eigen::MatrixXd h_full = operator_algebra_hamiltonian(ints, *full);
  Hamiltonian ham(ints, sector);
  const Eigen::VectorXd c = random_vector(sector->size(), rng);
  Eigen::VectorXd embedded = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full->size()));
  for (std::size_t k = 0; k < sector->size(); ++k) {
    const auto d = sector->determinant(k);
    embedded(full->find(d.alpha, d.beta)) = c(static_cast<Eigen::Index>(k));
  }
  const Eigen::VectorXd ref = h_full * embedded;
  const Eigen::VectorXd got = ham.sigma(c);
  for (std::size_t k = 0; k < sector->size(); ++k) {
    const auto d = sector->determinant(k);
    EXPECT_NEAR(got(static_cast<Eigen::Index>(k)), ref(full->find(d.alpha, d.beta)), 1e-12);
  }
}

TEST(Solver, DimensionFourAgreesWithDense) {
  // H2-like minimal basis: 2 orbitals, 2 electrons.
  IntegralSet ints(2, 2, 0);
  ints.set_core_energy(0.7137539936876182);
  ints.set_h(1, 1, -1.2524635735648981);
  ints.set_h(2, 2, -0.4759487152209648);
  ints.set_eri(1, 1, 1, 1, 0.6745650806634133);
  ints.set_eri(2, 2, 2, 2, 0.6973556059959103);
  ints.set_eri(1, 1, 2, 2, 0.6634496312255014);
  ints.set_eri(1, 2, 1, 2, 0.1813910739049861);
  auto basis = make_basis(2, 1, 1);
  Hamiltonian ham(ints, basis);
  const auto dav = solve_lowest(ham, 1);
  const auto dense = dense_solve(ham, 1);
  ASSERT_TRUE(dav.converged);
  EXPECT_NEAR(dav.eigenvalues[0], dense.eigenvalues[0], 1e-10);
  // Closed form inside the 2x2 sigma_g / sigma_u singlet block.
  const double a = ham.diagonal()(0), d = ham.diagonal()(3);
  const double b = ham.element(basis->spin_orbital_mask(0), basis->spin_orbital_mask(3));
  const double closed = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  EXPECT_NEAR(dense.eigenvalues[0], closed, 1e-12);
  EXPECT_LE(dav.residual_norms[0], 1e-8);
}

TEST(Solver, SingleDeterminantBasis) {
  std::mt19937 rng(11);
  const auto ints = random_integrals(3, 6, 0, rng);
  auto basis = make_basis(3, 3, 3);
  Hamiltonian ham(ints, basis);
  const double diag = ham.diagonal_element(basis->determinant(0));
  EXPECT_EQ(solve_lowest(ham, 1).eigenvalues[0], diag);
  EXPECT_EQ(dense_solve(ham, 1).eigenvalues[0], diag);
}

TEST(Solver, TwoByTwoClosedForm) {
  IntegralSet ints(2, 1, 1);
  ints.set_core_energy(0.1);
  ints.set_h(1, 1, -1.0);
  ints.set_h(2, 2, -0.3);
  ints.set_h(1, 2, 0.2);
  auto basis = make_basis(2, 1, 0);
  Hamiltonian ham(ints, basis);
  const double a = 0.1 - 1.0, d = 0.1 - 0.3, b = 0.2;
  const double closed = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  EXPECT_NEAR(dense_solve(ham, 1).eigenvalues[0], closed, 1e-14);
  EXPECT_NEAR(solve_lowest(ham, 1).eigenvalues[0], closed, 1e-12);
  const auto both = dense_solve(ham, 2);
  EXPECT_NEAR(both.eigenvalues[1], 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * b), 1e-14);
}

TEST(Solver, DavidsonMatchesDenseOnRandomInstances) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> norb(2, 6);
  int compared = 0;
  while (compared < 50) {
    const int n = norb(rng);
    std::uniform_int_distribution<int> occ(0, n);
    const int na = occ(rng), nb = occ(rng);
    if (na + nb == 0) continue;
    const auto ints = random_integrals(n, na + nb, na - nb, rng, std::nullopt, 0.2);
    auto basis = make_basis(n, na, nb);
    Hamiltonian ham(ints, basis);
    const int roots = std::min<int>(2, static_cast<int>(basis->size()));
    const auto dav = solve_lowest(ham, roots);
    const auto dense = dense_solve(ham, roots);
    ASSERT_TRUE(dav.converged) << n << " " << na << " " << nb;
    for (int k = 0; k < roots; ++k)
      EXPECT_NEAR(dav.eigenvalues[static_cast<std::size_t>(k)],
                  dense.eigenvalues[static_cast<std::size_t>(k)], 1e-9);
    EXPECT_TRUE(std::is_sorted(dav.eigenvalues.begin(), dav.eigenvalues.end()));
    const Eigen::VectorXd diag = ham.diagonal();
    EXPECT_LE(dav.eigenvalues[0], diag.minCoeff() + 1e-12);
    ++compared;
  }
}

TEST(Solver, DenseUsesSymmetryBlocksExactly) {
  std::mt19937 rng(9);
  const std::vector<int> orbsym{1, 2, 3, 4, 1, 2};
  const auto ints = random_integrals(6, 5, 1, rng, orbsym, 0.3);
  ASSERT_TRUE(ints.respects_symmetry());
  auto basis = make_basis(6, 3, 2);
  Hamiltonian ham(ints, basis);
  DenseOptions blocked, plain;
  plain.use_symmetry_blocks = false;
  const auto a = dense_solve(ham, 4, blocked);
  const auto b = dense_solve(ham, 4, plain);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(a.eigenvalues[k], b.eigenvalues[k], 1e-11);
  for (double r : a.residual_norms) EXPECT_LT(r, 1e-9);
}

TEST(Solver, ErrorsAndNonConvergence) {
  std::mt19937 rng(1);
  const auto ints = random_integrals(5, 4, 0, rng, std::nullopt, 0.3);
  auto basis = make_basis(5, 2, 2);
  Hamiltonian ham(ints, basis);
  EXPECT_THROW(solve_lowest(ham, 101), Error);
  EXPECT_THROW(solve_lowest(ham, 0), Error);
  EXPECT_THROW(dense_solve(ham, 101), Error);
  DenseOptions capped;
  capped.max_dimension = 50;
  EXPECT_THROW(dense_solve(ham, 1, capped), Error);
  DavidsonOptions one_step;
  one_step.max_iterations = 1;
  const auto partial = solve_lowest(ham, 1, one_step);
  EXPECT_FALSE(partial.converged);
  EXPECT_EQ(partial.iterations, 1);
  ASSERT_EQ(partial.vectors.size(), 1u);
  EXPECT_GT(partial.residual_norms[0], one_step.tolerance);
}

TEST(Solver, SmallSubspaceCapForcesRestarts) {
  std::mt19937 rng(77);
  const auto ints = random_integrals(7, 6, 0, rng, std::nullopt, 0.3);
  auto basis = make_basis(7, 3, 3);
  Hamiltonian ham(ints, basis);
  DavidsonOptions tight;
  tight.max_subspace = 6;
  tight.max_iterations = 500;
  const auto dav = solve_lowest(ham, 2, tight);
  const auto dense = dense_solve(ham, 2);
  ASSERT_TRUE(dav.converged);
  EXPECT_NEAR(dav.eigenvalues[0], dense.eigenvalues[0], 1e-9);
  EXPECT_NEAR(dav.eigenvalues[1], dense.eigenvalues[1], 1e-9);
}

TEST(Spin, SSquaredReferenceStates) {
  auto high = make_basis(2, 2, 0);
  EXPECT_NEAR(s_squared(CIVector(high, Eigen::VectorXd::Ones(1))), 2.0, 1e-14);
  auto closed = make_basis(3, 1, 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(closed->size()));
  c(closed->find(0b001, 0b001)) = 1.0;
  EXPECT_NEAR(s_squared(CIVector(closed, c)), 0.0, 1e-14);

  // In site notation (1↑2↓ − 1↓2↑)/√2. Reordering 1↓2↑ = a†1β a†2α into
  // canonical alpha-first order costs one swap, so both canonical
  // coefficients are +1/√2.
  auto open = make_basis(2, 1, 1);
  Eigen::VectorXd singlet = Eigen::VectorXd::Zero(4);
  singlet(open->find(0b01, 0b10)) = 1.0;
  singlet(open->find(0b10, 0b01)) = 1.0;
  EXPECT_NEAR(s_squared(CIVector(open, singlet)), 0.0, 1e-14);
  Eigen::VectorXd triplet = Eigen::VectorXd::Zero(4);
  triplet(open->find(0b01, 0b10)) = 1.0;
  triplet(open->find(0b10, 0b01)) = -1.0;
  EXPECT_NEAR(s_squared(CIVector(open, triplet)), 2.0, 1e-14);
}

TEST(Spin, GroundStateOfSpinFreeHamiltonianIsPure) {
  std::mt19937 rng(4);
  const auto ints = random_integrals(4, 4, 0, rng, std::nullopt, 0.2);
  auto basis = make_basis(4, 2, 2);
  const auto res = solve_lowest(basis, ints, 1, 1e-10);
  const double s2 = s_squared(res.vectors[0]);
  // S(S+1) for integer S
  const double spin = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * s2));
  EXPECT_NEAR(spin, std::round(spin), 1e-6);
}
