#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <vector>

#include "zaremba/geometry.hpp"
#include "zaremba/mesh.hpp"

namespace zaremba {

enum class SymmetryClass { Symmetric, Antisymmetric, Neither };

const char* to_string(SymmetryClass c);

// Sign structure of a P1 function given by its vertex values.
struct NodalReport {
  int domain_count = 0;
  // +1 / -1 / 0 per vertex, before zero vertices are attached to a domain.
  std::vector<signed char> vertex_labels;
  // Nodal domain id per vertex; -1 on Dirichlet vertices.
  std::vector<int> vertex_domain;
  std::vector<int> domain_sign;
  double neumann_measure_plus = 0.0;
  double neumann_measure_minus = 0.0;
  double beta_u2 = 0.0;
  // Angles (radians, [0, 2pi)) where the zero set meets the circle.
  std::vector<double> nodal_endpoints;
  bool is_closed = false;
  // Some endpoint sits on a Dirichlet-Neumann junction vertex.
  bool touches_junction = false;
  // Zero level set, one segment per crossed triangle.
  std::vector<std::array<Point, 2>> nodal_segments;
};

inline constexpr double kZeroThreshold = 1e-9;

// u holds one value per mesh vertex (zero on Dirichlet vertices). Vertices
// with |u| <= kZeroThreshold * max|u| count as zero and are attached to the
// sign whose neighbours have the larger mean |u| (ties to +); Dirichlet
// vertices belong to no domain. Domains are connected components of the edge
// graph restricted to one sign. Throws DomainError for an all-zero vector.
NodalReport nodal_domains(const DiskMesh& m, const Eigen::VectorXd& u);

// beta_u2 of a two-domain report; DomainError otherwise.
double beta_of(const NodalReport& report);

inline constexpr double kSymmetryThreshold = 1e-6;

// Compares u with its pullback under (x, y) -> (x, -y) in the mass norm.
// PreconditionError if the reflection is not a mesh automorphism.
SymmetryClass symmetry_class(const DiskMesh& m, const Eigen::VectorXd& u);

// Relative mass-norm distances ||u - u o R|| / ||u|| and ||u + u o R|| / ||u||.
std::pair<double, double> symmetry_defects(const DiskMesh& m, const Eigen::VectorXd& u);

// Angular rearrangement of the first eigenfunction u (vertex values) of the
// uniform 2-partition onto the two-component partition
// make_two_component(a, gap_b, ell). The mesh must carry the uniform
// 2-partition make_gamma({ell, (2pi - ell)/4}), be built with uniform_rings
// and no grading, and the shifts alpha = (ell/2 - a)/2 and
// beta = ((2pi - ell)/2 - gap_b)/2 must be grid multiples of equal parity
// (PreconditionError otherwise). u is first averaged over the reflections
// of the partition so that the result is an exact vertex permutation.
Eigen::VectorXd rearrange_test_function(const DiskMesh& m, const Eigen::VectorXd& u, const Angle& a,
                                        const Angle& gap_b);

// Same, with (a, gap_b) read off a target in make_two_component placement.
Eigen::VectorXd rearrange_test_function(const DiskMesh& m, const Eigen::VectorXd& u, const BoundaryPartition& target);

// Average of u over the reflections (x, y) -> (x, -y), (-x, y) and the
// rotation by pi. PreconditionError if any of them is not a mesh automorphism.
Eigen::VectorXd symmetrize_dihedral(const DiskMesh& m, const Eigen::VectorXd& u);

// Segments as "x0 y0 x1 y1" lines.
void write_segments(const std::vector<std::array<Point, 2>>& segments, std::ostream& out);

}  // namespace zaremba
