#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "zaremba/errors.hpp"
#include "zaremba/mesh.hpp"

using namespace zaremba;

namespace {

constexpr double kPiD = std::numbers::pi;

Angle pi_frac(std::int64_t p, std::int64_t q) { return Angle::pi_times(p, q); }

bool has_boundary_vertex_at(const DiskMesh& m, const Angle& a) {
  for (const auto& b : m.boundary_angles) {
    if (b == a.normalized()) return true;
  }
  return false;
}

void expect_valid(const DiskMesh& m) {
  for (std::size_t t = 0; t < m.triangles.size(); ++t) ASSERT_GT(signed_area(m, t), 0.0) << "triangle " << t;
  // conforming: every interior edge is shared by exactly two triangles,
  // boundary edges by one
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::size_t boundary = 0;
  for (const auto& [e, c] : edges) {
    ASSERT_LE(c, 2);
    if (c == 1) {
      ++boundary;
      EXPECT_TRUE(m.is_boundary_vertex(e.first) && m.is_boundary_vertex(e.second));
    }
  }
  EXPECT_EQ(boundary, m.boundary_edges.size());
  // labels agree with the partition at edge midpoints
  for (const auto& e : m.boundary_edges) {
    const Angle a0 = m.boundary_angle(e.v[0]);
    const Angle mid = a0 + ccw_distance(a0, m.boundary_angle(e.v[1])) / 2;
    const auto cls = m.partition.contains(mid);
    ASSERT_NE(cls, BoundaryClass::Endpoint);
    EXPECT_EQ(e.label == EdgeLabel::Dirichlet, cls == BoundaryClass::Dirichlet);
  }
  for (const auto& j : m.partition.junctions()) EXPECT_TRUE(has_boundary_vertex_at(m, j)) << j.to_string();
}

}  // namespace

TEST(Triangulate, CoarseDirichletDisk) {
  const auto m = triangulate(BoundaryPartition::all_dirichlet(), 0.5, 0);
  EXPECT_GE(m.vertices.size(), 9u);
  // hand value: a regular N-gon has area (N/2) sin(2pi/N); here at least
  // the 8-gon bound 2.83
  EXPECT_NEAR(total_area(m), kPiD, 0.15);
  expect_valid(m);
}

TEST(Triangulate, JunctionsAreVertices) {
  for (double h : {0.2, 0.1, 0.05}) {
    const auto m = triangulate(make_gamma({kPi, pi_frac(1, 4)}), h, 6);
    for (int k : {1, 3, 5, 7}) EXPECT_TRUE(has_boundary_vertex_at(m, pi_frac(k, 4)));
    expect_valid(m);
  }
}

TEST(Triangulate, AreaConvergesQuadratically) {
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const auto m = triangulate(make_uniform(3, kPi), h, 0);
    // inscribed polygon through the boundary vertices
    std::vector<double> th;
    for (const auto& a : m.boundary_angles) th.push_back(a.radians());
    std::sort(th.begin(), th.end());
    double polygon = 0, max_gap = 0;
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double gap = (i + 1 < th.size() ? th[i + 1] : th[0] + 2 * kPiD) - th[i];
      polygon += 0.5 * std::sin(gap);
      max_gap = std::max(max_gap, gap);
    }
    const double area = total_area(m);
    EXPECT_NEAR(area, polygon, 1e-12);
    EXPECT_GT(kPiD - area, 0);
    EXPECT_LE(kPiD - area, kPiD * max_gap * max_gap / 6 + 1e-14);
    EXPECT_LE(max_gap, 1.6 * h);
  }
}

TEST(Triangulate, VertexCountGrowthUnderHalving) {
  for (const auto& p : {BoundaryPartition::all_dirichlet(), make_gamma({kPi, pi_frac(1, 4)}),
                        make_gamma({kPi, pi_frac(3, 32)})}) {
    std::size_t prev = 0;
    for (double h : {0.1, 0.05, 0.025}) {
      const std::size_t n = triangulate(p, h, 0).vertices.size();
      if (prev) {
        const double ratio = static_cast<double>(n) / static_cast<double>(prev);
        EXPECT_GE(ratio, 3.5);
        EXPECT_LE(ratio, 4.5);
      }
      prev = n;
    }
  }
}

TEST(Triangulate, AngleBounds) {
  // ungraded: away from any grading the structured mesh keeps angles >= 15 deg
  for (double h : {0.2, 0.1, 0.05}) {
    const auto [lo, hi] = angle_range_degrees(triangulate(make_gamma({kPi, pi_frac(1, 8)}), h, 0));
    EXPECT_GE(lo, 15.0);
    EXPECT_LT(hi, 150.0);
  }
  // graded: elements shrink toward junctions; no degeneracy
  const auto m = triangulate(make_gamma({kPi, pi_frac(1, 8)}), 0.05, 6);
  const auto [lo, hi] = angle_range_degrees(m);
  EXPECT_GT(lo, 0.5);
  EXPECT_LT(hi, 179.0);
  expect_valid(m);
}

TEST(Triangulate, GradingShrinksElementsAtJunctions) {
  const auto p = make_gamma({kPi, pi_frac(1, 8)});
  const auto m = triangulate(p, 0.05, 6);
  double smallest = 1;
  for (const auto& e : m.boundary_edges) {
    const Point a = m.vertices[e.v[0]], b = m.vertices[e.v[1]];
    smallest = std::min(smallest, std::hypot(a.x - b.x, a.y - b.y));
  }
  EXPECT_LT(smallest, 0.05 * std::pow(0.5, 6) * 2 * kPiD);
  EXPECT_GT(m.vertices.size(), triangulate(p, 0.05, 0).vertices.size());
}

TEST(Triangulate, OffGridJunctionDoesNotCreateSlivers) {
  // junction a hair away from a grid node
  const auto p = make_gamma({kPi, Angle::from_radians(0.78233)});
  const auto m = triangulate(p, 0.05, 6);
  expect_valid(m);
  EXPECT_GT(angle_range_degrees(m).first, 0.5);
}

TEST(Triangulate, Deterministic) {
  const auto p = make_two_component(pi_frac(1, 5), pi_frac(3, 7), kPi);
  const auto a = triangulate(p, 0.1, 4);
  const auto b = triangulate(p, 0.1, 4);
  std::ostringstream sa, sb;
  write_msh(a, sa);
  write_msh(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Triangulate, Errors) {
  EXPECT_THROW(triangulate(make_uniform(2, kPi), 0.0, 0), DomainError);
  EXPECT_THROW(triangulate(make_uniform(2, kPi), 0.1, -1), DomainError);
  MeshOptions small;
  small.max_vertices = 1000;
  EXPECT_THROW(triangulate(make_uniform(2, kPi), 0.01, 0, small), ResourceError);
  EXPECT_THROW(triangulate(make_uniform(2, kPi), 1e-6, 0), ResourceError);
}

TEST(Symmetrize, RotationsAndReflections) {
  const auto g2 = symmetrize_angular(triangulate(make_uniform(2, kPi), 0.1, 3), 2);
  EXPECT_TRUE(rotation_map(g2, kPiD).has_value());
  EXPECT_TRUE(reflection_map(g2).has_value());

  const auto g4 = symmetrize_angular(triangulate(make_uniform(4, kPi), 0.1, 3), 4);
  const auto rot = rotation_map(g4, kPiD / 2);
  ASSERT_TRUE(rot.has_value());
  EXPECT_TRUE(preserves_triangles(g4, *rot));
  // the map is a bijection
  std::set<int> image(rot->begin(), rot->end());
  EXPECT_EQ(image.size(), g4.vertices.size());

  const auto g1 = symmetrize_angular(triangulate(make_gamma({kPi, Angle()}), 0.1, 3), 1);
  const auto refl = reflection_map(g1);
  ASSERT_TRUE(refl.has_value());
  EXPECT_TRUE(preserves_triangles(g1, *refl));
}

TEST(Symmetrize, ReportsIncompatiblePartition) {
  // three arcs cannot be symmetric under rotation by pi/2
  EXPECT_THROW(symmetrize_angular(triangulate(make_uniform(3, kPi), 0.1, 3), 4), PreconditionError);
}

TEST(Relabel, KeepsGeometryChangesLabels) {
  const auto outer = make_gamma({kPi, pi_frac(1, 4)});
  MeshOptions opts;
  const auto inner = make_two_component(pi_frac(1, 4), pi_frac(1, 2), pi_frac(1, 2));
  opts.extra_boundary_angles = inner.junctions();
  const auto m = triangulate(outer, 0.1, 2, opts);
  const auto r = relabel(m, inner);
  EXPECT_EQ(r.vertices.size(), m.vertices.size());
  EXPECT_EQ(r.triangles, m.triangles);
  expect_valid(r);
  EXPECT_THROW(relabel(triangulate(outer, 0.1, 0), make_uniform(3, kPi)), PreconditionError);
}

TEST(Refine, SplitsEveryTriangle) {
  const auto m = triangulate(make_uniform(2, kPi), 0.2, 1);
  const auto r = refine_uniform(m);
  EXPECT_EQ(r.triangles.size(), 4 * m.triangles.size());
  EXPECT_NEAR(total_area(r), total_area(m), 1e-12);
  EXPECT_EQ(r.boundary_edges.size(), 2 * m.boundary_edges.size());
  expect_valid(r);
}

TEST(Msh, WritesAllSections) {
  const auto m = triangulate(make_uniform(2, kPi), 0.3, 0);
  std::ostringstream os;
  write_msh(m, os);
  const std::string s = os.str();
  EXPECT_NE(s.find("$MeshFormat\n2.2 0 8"), std::string::npos);
  EXPECT_NE(s.find("$Nodes\n" + std::to_string(m.vertices.size()) + "\n"), std::string::npos);
  EXPECT_NE(s.find("$Elements\n" + std::to_string(m.triangles.size() + m.boundary_edges.size()) + "\n"),
            std::string::npos);
}
