#include <gtest/gtest.h>

#include "oracle.hpp"
#include "zaremba/bessel.hpp"
#include "zaremba/eig.hpp"
#include "zaremba/fem.hpp"

using namespace zaremba;

TEST(Oracle, KnownTableValues) {
  // Abramowitz-Stegun table 9.5
  EXPECT_NEAR(std::sqrt(oracle::j01_squared()), 2.404825557695773, 1e-12);
  EXPECT_NEAR(std::sqrt(oracle::j11_squared()), 3.831705970207512, 1e-12);
  EXPECT_NEAR(std::sqrt(oracle::jp11_squared()), 1.841183781340659, 1e-12);
}

TEST(Bessel, LibraryZerosMatchOracle) {
  for (int n = 0; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      const double z = oracle::kth_root([n](double x) { return oracle::bessel_j(n, x); }, k, 0.5);
      EXPECT_NEAR(bessel_zero(n, k), z, 1e-10) << n << "," << k;
    }
  }
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 2; ++k) {
      const double z = oracle::kth_root([n](double x) { return oracle::bessel_j_prime(n, x); }, k, 0.5);
      EXPECT_NEAR(bessel_derivative_zero(n, k), z, 1e-10);
    }
  }
  EXPECT_NEAR(dirichlet_disk_eigenvalue_1(), oracle::j01_squared(), 1e-10);
  EXPECT_NEAR(dirichlet_disk_eigenvalue_2(), oracle::j11_squared(), 1e-10);
  EXPECT_NEAR(neumann_disk_first_nonzero_eigenvalue(), oracle::jp11_squared(), 1e-10);
}

TEST(Disk, DirichletEigenvaluesConverge) {
  const double ref = oracle::j01_squared();
  double prev = 1e9;
  for (double h : {0.2, 0.1, 0.05}) {
    const auto r = solve_smallest(assemble(triangulate(BoundaryPartition::all_dirichlet(), h, 0)), 3, 1e-10);
    const double err = r.eigenvalues[0] - ref;
    EXPECT_GT(err, 0);  // conforming P1 on an inscribed polygon: upper bound
    EXPECT_LT(err, prev / 3);
    prev = err;
  }
  EXPECT_LT(prev / ref, 2e-3);
}

TEST(Disk, NeumannEigenvaluesConverge) {
  const auto r = solve_smallest(assemble(triangulate(BoundaryPartition::all_neumann(), 0.05, 0)), 3, 1e-10);
  EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-9);
  EXPECT_NEAR(r.eigenvalues[1], oracle::jp11_squared(), 5e-3 * oracle::jp11_squared());
  EXPECT_NEAR(r.eigenvalues[2], oracle::jp11_squared(), 5e-3 * oracle::jp11_squared());
}
