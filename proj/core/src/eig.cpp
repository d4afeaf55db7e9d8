#include "zaremba/eig.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include "zaremba/errors.hpp"

namespace zaremba {

namespace {

// Dimension up to which solve_smallest delegates to the dense path.
constexpr Eigen::Index kSmallDense = 64;
// Multiple of the componentwise rounding bound accepted as converged.
constexpr double kFloorFactor = 4.0;

void finalize(const SparseMatrix& stiffness, const SparseMatrix& mass, EigenResult& r) {
  const Eigen::Index k = r.eigenvectors.cols();
  r.residuals.assign(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    auto x = r.eigenvectors.col(i);
    const Eigen::VectorXd mx = mass * x;
    x /= std::sqrt(x.dot(mx));
    // Deterministic sign: largest-magnitude entry positive.
    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    if (x[imax] < 0) x = -x;
    const Eigen::VectorXd mx2 = mass * x;
    const double lambda = r.eigenvalues[static_cast<std::size_t>(i)];
    r.residuals[static_cast<std::size_t>(i)] = (stiffness * x - lambda * mx2).norm() / mx2.norm();
  }
}

void check_inputs(const SparseMatrix& stiffness, const SparseMatrix& mass, int k) {
  if (stiffness.rows() != stiffness.cols() || mass.rows() != stiffness.rows() || mass.cols() != stiffness.cols()) {
    throw DomainError("stiffness and mass must be square of equal size");
  }
  if (k < 1 || k > stiffness.rows()) throw DomainError("eigenpair count k out of range");
}

// M-orthogonalizes the columns of w against basis (with cached M*basis) and
// among themselves; returns the surviving columns.
Eigen::MatrixXd m_orthonormalize(const SparseMatrix& mass, const Eigen::MatrixXd& basis, const Eigen::MatrixXd& mbasis,
                                 Eigen::MatrixXd w, Eigen::MatrixXd& mw_out) {
  for (int pass = 0; pass < 2; ++pass) {
    if (basis.cols() > 0) w -= basis * (mbasis.transpose() * w);
  }
  Eigen::MatrixXd out(w.rows(), w.cols());
  Eigen::MatrixXd mout(w.rows(), w.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Eigen::VectorXd v = w.col(j);
    const double before = std::sqrt(std::max(0.0, v.dot(mass * v)));
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols() > 0) v -= basis * (mbasis.transpose() * v);
      if (kept > 0) v -= out.leftCols(kept) * (mout.leftCols(kept).transpose() * v);
    }
    Eigen::VectorXd mv = mass * v;
    const double norm = std::sqrt(std::max(0.0, v.dot(mv)));
    if (!(norm > 1e-10 * before) || norm == 0.0) continue;
    out.col(kept) = v / norm;
    mout.col(kept) = mv / norm;
    ++kept;
  }
  mw_out = mout.leftCols(kept);
  return out.leftCols(kept);
}

}  // namespace

EigenResult solve_dense_reference(const SparseMatrix& stiffness, const SparseMatrix& mass, int k) {
  check_inputs(stiffness, mass, k);
  if (stiffness.rows() > kDenseLimit) {
    throw DomainError("dense reference limited to " + std::to_string(kDenseLimit) + " DOFs");
  }
  const Eigen::MatrixXd kd = Eigen::MatrixXd(stiffness);
  const Eigen::MatrixXd md = Eigen::MatrixXd(mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(kd, md, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) throw FactorizationError("dense generalized eigensolver failed");
  EigenResult r;
  r.eigenvalues.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + k);
  r.eigenvectors = ges.eigenvectors().leftCols(k);
  finalize(stiffness, mass, r);
  return r;
}

EigenResult solve_dense_reference(const OperatorPair& pair, int k) {
  return solve_dense_reference(pair.stiffness, pair.mass, k);
}

EigenResult solve_smallest(const SparseMatrix& stiffness, const SparseMatrix& mass, int k, double tol,
                           const SolverOptions& options) {
  check_inputs(stiffness, mass, k);
  if (!(tol >= 1e-12) || !(tol <= 1e-4)) throw DomainError("tolerance must lie in [1e-12, 1e-4]");
  const Eigen::Index n = stiffness.rows();
  if (n <= kSmallDense) return solve_dense_reference(stiffness, mass, k);

  const SparseMatrix shifted = stiffness - options.shift * mass;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("Cholesky factorization of K - sigma M failed (sigma = " + std::to_string(options.shift) +
                             ")");
  }

  const int b = static_cast<int>(std::min<Eigen::Index>(std::max(options.block_size > 0 ? options.block_size : k + 3, 3), n / 4));
  if (b < k) throw DomainError("block size smaller than k");
  const int blocks = std::max(2, options.krylov_blocks);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd x(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = unif(rng);
  }

  EigenResult result;
  result.factorizations = 1;
  std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
  const SparseMatrix abs_k = stiffness.cwiseAbs();
  const SparseMatrix abs_m = mass.cwiseAbs();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int restart = 1; restart <= options.max_restarts; ++restart) {
    Eigen::MatrixXd basis(n, 0), mbasis(n, 0);
    Eigen::MatrixXd block = x;
    for (int blk = 0; blk < blocks; ++blk) {
      if (blk > 0) {
        const Eigen::MatrixXd rhs = mbasis.rightCols(block.cols());
        block = llt.solve(rhs);
      }
      Eigen::MatrixXd mblock;
      Eigen::MatrixXd q = m_orthonormalize(mass, basis, mbasis, block, mblock);
      if (q.cols() == 0) break;
      Eigen::MatrixXd nb(n, basis.cols() + q.cols()), nmb(n, basis.cols() + q.cols());
      nb << basis, q;
      nmb << mbasis, mblock;
      basis.swap(nb);
      mbasis.swap(nmb);
      block = q;
    }
    if (basis.cols() < k) throw ConvergenceError("Krylov basis collapsed", best);

    const Eigen::MatrixXd kbasis = stiffness * basis;
    Eigen::MatrixXd h = basis.transpose() * kbasis;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(h);
    const Eigen::Index keep = std::min<Eigen::Index>(b, basis.cols());
    const Eigen::MatrixXd y = small.eigenvectors().leftCols(keep);
    x = basis * y;
    const Eigen::MatrixXd kx = kbasis * y;
    const Eigen::MatrixXd mx = mbasis * y;

    bool converged = true;
    std::vector<double> floors(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const double theta = small.eigenvalues()[i];
      const double mnorm = mx.col(i).norm();
      const double res = (kx.col(i) - theta * mx.col(i)).norm() / mnorm;
      const Eigen::VectorXd ax = x.col(i).cwiseAbs();
      floors[static_cast<std::size_t>(i)] =
          kFloorFactor * eps * ((abs_k * ax).norm() + std::abs(theta) * (abs_m * ax).norm()) / mnorm;
      best[static_cast<std::size_t>(i)] = std::min(best[static_cast<std::size_t>(i)], res);
      if (!(res <= std::max(tol, floors[static_cast<std::size_t>(i)]))) converged = false;
    }
    if (converged) {
      result.iterations = restart;
      result.eigenvalues.assign(small.eigenvalues().data(), small.eigenvalues().data() + k);
      result.eigenvectors = x.leftCols(k);
      finalize(stiffness, mass, result);
      result.residual_floors = floors;
      return result;
    }
    if (x.cols() < b) {
      // refill the block after a dependency drop
      Eigen::MatrixXd full(n, b);
      full.leftCols(x.cols()) = x;
      for (Eigen::Index j = x.cols(); j < b; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) full(i, j) = unif(rng);
      }
      x.swap(full);
    }
  }
  throw ConvergenceError("shift-invert iteration did not reach tolerance", best);
}

EigenResult solve_smallest(const OperatorPair& pair, int k, double tol, const SolverOptions& options) {
  return solve_smallest(pair.stiffness, pair.mass, k, tol, options);
}

}  // namespace zaremba
