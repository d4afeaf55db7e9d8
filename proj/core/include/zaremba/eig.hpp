#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "zaremba/fem.hpp"

namespace zaremba {

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // columns, M-orthonormal, free DOFs
  std::vector<double> residuals;    // ||K u - lambda M u||_2 / ||M u||_2
  // Rounding level of each residual (a multiple of eps (|K||u| + lambda |M||u|)
  // over ||M u||). Pairs count as converged at max(tol, floor); empty for
  // the dense path.
  std::vector<double> residual_floors;
  int iterations = 0;               // restart cycles (0 for the dense path)
  int factorizations = 0;
};

struct SolverOptions {
  double shift = -1.0;  // sigma; K - sigma M must be positive definite
  int block_size = 0;   // 0 -> k + 3 (never below 3)
  int krylov_blocks = 5;
  int max_restarts = 300;
  std::uint64_t seed = 20240917;
};

inline constexpr int kDefaultEigenCount = 4;

// k algebraically smallest pairs of K u = lambda M u by shift-invert block
// Krylov iteration with Rayleigh-Ritz restarts. The operator (K - sigma M)^-1 M
// is applied through a sparse Cholesky factorization.
// Residuals are accepted at max(tol, residual floor): on strongly graded fine
// meshes rounding alone exceeds small tolerances.
// Throws DomainError for bad k/tol, FactorizationError, or ConvergenceError
// carrying the best residuals reached.
EigenResult solve_smallest(const OperatorPair& pair, int k, double tol, const SolverOptions& options = {});

// Same contract on raw matrices.
EigenResult solve_smallest(const SparseMatrix& stiffness, const SparseMatrix& mass, int k, double tol,
                           const SolverOptions& options = {});

inline constexpr Eigen::Index kDenseLimit = 2000;

// Full dense generalized symmetric solve (dimension <= kDenseLimit).
EigenResult solve_dense_reference(const OperatorPair& pair, int k);
EigenResult solve_dense_reference(const SparseMatrix& stiffness, const SparseMatrix& mass, int k);

}  // namespace zaremba
