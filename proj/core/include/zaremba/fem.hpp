#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <iosfwd>
#include <vector>

#include "zaremba/mesh.hpp"

namespace zaremba {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct AssemblyOptions {
  // Arc endpoints belong to the Dirichlet set (eliminated) when true.
  bool junctions_dirichlet = true;
};

// Stiffness and consistent mass matrices restricted to the free DOFs.
struct OperatorPair {
  SparseMatrix stiffness;  // K
  SparseMatrix mass;       // M
  std::vector<int> vertex_to_dof;  // -1 for eliminated vertices
  std::vector<int> dof_to_vertex;
  std::vector<int> dirichlet_vertices;

  Eigen::Index dofs() const { return stiffness.rows(); }
  // Free-DOF vector -> vertex vector, zero on eliminated vertices.
  Eigen::VectorXd extend(const Eigen::VectorXd& free) const;
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;
};

// P1 element matrices of the affine triangle (p0, p1, p2).
Eigen::Matrix3d element_stiffness(const Point& p0, const Point& p1, const Point& p2);
Eigen::Matrix3d element_mass(const Point& p0, const Point& p1, const Point& p2);

// Neumann edges contribute nothing (natural condition); Dirichlet vertices are
// eliminated. Throws AssemblyError naming the first non-positive triangle.
OperatorPair assemble(const DiskMesh& m, const AssemblyOptions& options = {});

// Matrices over all vertices, no elimination.
std::pair<SparseMatrix, SparseMatrix> assemble_full(const DiskMesh& m);

// (u^T K u) / (u^T M u) for a free-DOF vector; DomainError on zero M-norm.
double rayleigh(const OperatorPair& pair, const Eigen::VectorXd& u);

// Matrix Market coordinate format (symmetric, lower triangle, 1-based).
void write_matrix_market(const SparseMatrix& a, std::ostream& out);

}  // namespace zaremba
