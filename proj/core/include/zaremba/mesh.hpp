#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "zaremba/angle.hpp"
#include "zaremba/geometry.hpp"

namespace zaremba {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class EdgeLabel { Dirichlet, Neumann };

struct BoundaryEdge {
  std::array<int, 2> v{};  // counterclockwise along the circle
  EdgeLabel label = EdgeLabel::Neumann;
  std::size_t arc_id = 0;  // Dirichlet arc index, or Neumann gap index
};

struct MeshOptions {
  double grading_ratio = 0.5;
  // Node count of the uniform part of the boundary ring; 0 picks ~2pi/h,
  // raised when that aligns every exact junction angle with the grid.
  int angular_nodes = 0;
  // Ring node counts are multiples of lcm(4, 2 * symmetry).
  int symmetry = 1;
  // Every ring carries the boundary's angular nodes (no inward coarsening).
  // Rotations by grid multiples are then mesh automorphisms.
  bool uniform_rings = false;
  // Additional boundary angles that must be vertices (e.g. junctions of a
  // second partition to be imposed on the same mesh).
  std::vector<Angle> extra_boundary_angles;
  std::size_t max_vertices = 4'000'000;
};

// Polar triangulation of the unit disk. Vertex 0 is the centre; the remaining
// vertices lie on concentric rings (ring_offset[j] is the first vertex of ring
// j, the last ring is the boundary). Angular node sets grow outward, so every
// inner-ring angle also appears on the next ring out.
struct DiskMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<int> junction_vertices;
  double h = 0.0;
  double grading_ratio = 0.5;
  int grading_levels = 0;
  BoundaryPartition partition;
  MeshOptions options;

  // Boundary vertices in counterclockwise order with their angles;
  // boundary_index[v] is the position of v in that list, or -1.
  std::vector<int> boundary_vertices;
  std::vector<Angle> boundary_angles;
  std::vector<int> boundary_index;

  // Ring structure; empty after refine_uniform().
  std::vector<double> ring_radii;
  std::vector<std::vector<Angle>> ring_angles;
  std::vector<int> ring_offset;

  bool structured() const noexcept { return !ring_radii.empty(); }
  std::size_t boundary_ring() const noexcept { return ring_radii.size() - 1; }
  // Vertex on ring `ring` at angle theta, if present.
  std::optional<int> find_vertex(std::size_t ring, const Angle& theta) const;
  bool is_boundary_vertex(int vertex) const { return boundary_index[vertex] >= 0; }
  const Angle& boundary_angle(int vertex) const { return boundary_angles[boundary_index[vertex]]; }
};

// Boundary node count used when MeshOptions::angular_nodes is 0: about
// 2pi/h, rounded to a halvable multiple of lcm(4, 2 * symmetry), and raised
// (up to 8x) so that every exact angle in `angles` is a grid node.
int choose_angular_nodes(const std::vector<Angle>& angles, double h, int symmetry = 1);

// Structured polar mesh conforming to p: every junction angle is a boundary
// vertex. With grading_levels > 0, `grading_levels` thin rings are inserted at
// depths h * ratio^k below the boundary and angular nodes at distances
// (2pi/N) * ratio^k around each junction, giving elements that shrink
// geometrically toward every Dirichlet-Neumann junction.
// Throws DomainError for invalid h or levels and ResourceError past
// options.max_vertices.
DiskMesh triangulate(const BoundaryPartition& p, double h, int grading_levels, const MeshOptions& options = {});

// Re-meshes with node counts that are multiples of 2n so the vertex set is
// invariant under rotation by 2pi/n and reflection across the x-axis.
// Throws PreconditionError when the partition-dependent nodes (junctions,
// grading) break that symmetry.
DiskMesh symmetrize_angular(const DiskMesh& m, int n);

// Same triangulation with boundary labels for another partition whose
// junctions are all boundary vertices of m (PreconditionError otherwise).
DiskMesh relabel(const DiskMesh& m, const BoundaryPartition& p);

// Red refinement: each triangle split into four through edge midpoints.
// The boundary polygon is kept (midpoints are not projected), so the P1 space
// of the result contains that of m.
DiskMesh refine_uniform(const DiskMesh& m);

// Maps each vertex i to the vertex at transform(vertices[i]) (within tol);
// nullopt if some image is not a vertex.
std::optional<std::vector<int>> match_vertices(const DiskMesh& m, const std::function<Point(Point)>& transform,
                                               double tol = 1e-10);
// Whether the vertex map carries the triangle set onto itself.
bool preserves_triangles(const DiskMesh& m, const std::vector<int>& vertex_map);

std::optional<std::vector<int>> reflection_map(const DiskMesh& m);  // (x, y) -> (x, -y)
std::optional<std::vector<int>> rotation_map(const DiskMesh& m, double angle);

double signed_area(const DiskMesh& m, std::size_t triangle);
double total_area(const DiskMesh& m);
// Smallest and largest interior angle over all triangles, in degrees.
std::pair<double, double> angle_range_degrees(const DiskMesh& m);

// Gmsh MSH 2.2 ASCII: nodes, then boundary lines (element type 1) and
// triangles (type 2). Lines carry physical tag 1 (Dirichlet) or 2 (Neumann)
// and elementary tag arc_id + 1; triangles carry physical tag 10.
void write_msh(const DiskMesh& m, std::ostream& out);

}  // namespace zaremba
