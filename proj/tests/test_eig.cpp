#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "zaremba/eig.hpp"
#include "zaremba/errors.hpp"

using namespace zaremba;

namespace {

Angle pi_frac(std::int64_t p, std::int64_t q) { return Angle::pi_times(p, q); }

SparseMatrix sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

// Random sparse SPD pair: banded K plus diagonal shift, M diagonally dominant.
std::pair<SparseMatrix, SparseMatrix> random_pair(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Eigen::Triplet<double>> tk, tm;
  for (int i = 0; i < n; ++i) {
    tk.emplace_back(i, i, 6 + u(rng));
    tm.emplace_back(i, i, 2 + 0.5 * u(rng));
    for (int off : {1, 7}) {
      if (i + off < n) {
        const double a = u(rng), b = 0.2 * u(rng);
        tk.emplace_back(i, i + off, a);
        tk.emplace_back(i + off, i, a);
        tm.emplace_back(i, i + off, b);
        tm.emplace_back(i + off, i, b);
      }
    }
  }
  SparseMatrix k(n, n), m(n, n);
  k.setFromTriplets(tk.begin(), tk.end());
  m.setFromTriplets(tm.begin(), tm.end());
  return {k, m};
}

}  // namespace

TEST(Dense, DiagonalExample) {
  const auto r = solve_dense_reference(sparse(Eigen::Vector2d(1, 2).asDiagonal().toDenseMatrix()),
                                       sparse(Eigen::Matrix2d::Identity()), 2);
  EXPECT_NEAR(r.eigenvalues[0], 1, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 2, 1e-14);
  const auto s = solve_smallest(sparse(Eigen::Vector2d(1, 2).asDiagonal().toDenseMatrix()),
                                sparse(Eigen::Matrix2d::Identity()), 2, 1e-10);
  EXPECT_NEAR(s.eigenvalues[1], 2, 1e-14);
}

TEST(Dense, TwoByTwoElementPair) {
  // det(K - lambda M) = 0 by hand: (2 - l/3)^2 - (1 + l/6)^2 = 0 -> l = 2, 18
  Eigen::Matrix2d k, m;
  k << 2, -1, -1, 2;
  m << 2, 1, 1, 2;
  m /= 6;
  const auto r = solve_dense_reference(sparse(k), sparse(m), 2);
  EXPECT_NEAR(r.eigenvalues[0], 2, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1], 18, 1e-12);
}

TEST(Sparse, MatchesDenseOnRandomPair) {
  const auto [k, m] = random_pair(300, 3);
  const auto d = solve_dense_reference(k, m, 6);
  const auto s = solve_smallest(k, m, 6, 1e-11);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.eigenvalues[i], d.eigenvalues[i], 1e-8 * std::max(1.0, d.eigenvalues[i]));
}

TEST(Sparse, MatchesDenseOnMeshes) {
  for (const auto& p : {make_gamma({kPi, pi_frac(3, 32)}), make_uniform(3, kPi), BoundaryPartition::all_neumann(),
                        BoundaryPartition::all_dirichlet()}) {
    for (double h : {0.2, 0.1}) {
      const auto pair = assemble(triangulate(p, h, 3));
      ASSERT_LE(pair.dofs(), kDenseLimit);
      const auto d = solve_dense_reference(pair, 5);
      const auto s = solve_smallest(pair, 5, 1e-10);
      for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(s.eigenvalues[i], d.eigenvalues[i], 1e-8 * std::max(1.0, d.eigenvalues[i]));
      }
    }
  }
}

TEST(Sparse, ResultInvariants) {
  const auto pair = assemble(triangulate(make_gamma({kPi, pi_frac(1, 8)}), 0.05, 6));
  const auto r = solve_smallest(pair, 4, 1e-10);
  ASSERT_EQ(r.eigenvalues.size(), 4u);
  EXPECT_TRUE(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
  const Eigen::MatrixXd g = r.eigenvectors.transpose() * (pair.mass * r.eigenvectors);
  EXPECT_LT((g - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
  for (int i = 0; i < 4; ++i) EXPECT_LE(r.residuals[i], std::max(1e-10, r.residual_floors[i]) * 1.01);
}

TEST(Sparse, ShiftInvariance) {
  const auto pair = assemble(triangulate(make_uniform(2, kPi), 0.1, 4));
  SolverOptions a, b;
  b.shift = -2.0;
  const auto ra = solve_smallest(pair, 4, 1e-11, a);
  const auto rb = solve_smallest(pair, 4, 1e-11, b);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ra.eigenvalues[i], rb.eigenvalues[i], 1e-9);
}

TEST(Sparse, DeterministicForFixedSeed) {
  const auto pair = assemble(triangulate(make_uniform(3, kPi), 0.1, 3));
  const auto a = solve_smallest(pair, 4, 1e-10);
  const auto b = solve_smallest(pair, 4, 1e-10);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(Sparse, ResolvesDoubleEigenvalue) {
  // Pure Dirichlet disk: lambda2 = lambda3 exactly in the continuum and up to
  // mesh asymmetry here; both must be found.
  const auto pair = assemble(triangulate(BoundaryPartition::all_dirichlet(), 0.05, 0));
  const auto r = solve_smallest(pair, 4, 1e-10);
  EXPECT_NEAR(r.eigenvalues[1], r.eigenvalues[2], 1e-6 * r.eigenvalues[1]);
  EXPECT_GT(r.eigenvalues[3], r.eigenvalues[2] + 1);
}

TEST(Sparse, Errors) {
  const auto pair = assemble(triangulate(make_uniform(2, kPi), 0.2, 0));
  EXPECT_THROW(solve_smallest(pair, 0, 1e-10), DomainError);
  EXPECT_THROW(solve_smallest(pair, 4, 1e-3), DomainError);
  EXPECT_THROW(solve_smallest(pair, 4, 1e-13), DomainError);
  SolverOptions bad;
  bad.shift = 1e6;  // K - sigma M indefinite
  EXPECT_THROW(solve_smallest(pair, 4, 1e-10, bad), FactorizationError);
  SolverOptions capped;
  capped.max_restarts = 1;
  capped.krylov_blocks = 2;
  try {
    solve_smallest(assemble(triangulate(make_uniform(2, kPi), 0.05, 6)), 4, 1e-12, capped);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    ASSERT_EQ(e.best_residuals().size(), 4u);
    EXPECT_GT(e.best_residuals()[3], 1e-12);
  }
  EXPECT_THROW(solve_dense_reference(assemble(triangulate(make_uniform(2, kPi), 0.025, 0)), 2), DomainError);
}
