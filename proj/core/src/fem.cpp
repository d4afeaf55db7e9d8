#include "zaremba/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "zaremba/errors.hpp"

namespace zaremba {

Eigen::VectorXd OperatorPair::extend(const Eigen::VectorXd& free) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertex_to_dof.size()));
  for (std::size_t d = 0; d < dof_to_vertex.size(); ++d) full[dof_to_vertex[d]] = free[static_cast<Eigen::Index>(d)];
  return full;
}

Eigen::VectorXd OperatorPair::restrict(const Eigen::VectorXd& full) const {
  Eigen::VectorXd free(static_cast<Eigen::Index>(dof_to_vertex.size()));
  for (std::size_t d = 0; d < dof_to_vertex.size(); ++d) free[static_cast<Eigen::Index>(d)] = full[dof_to_vertex[d]];
  return free;
}

Eigen::Matrix3d element_stiffness(const Point& p0, const Point& p1, const Point& p2) {
  // Gradients of barycentric coordinates: grad(l_i) = rot(e_i) / (2 A), with
  // e_i the edge opposite vertex i.
  const double area2 = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  const std::array<Point, 3> p{p0, p1, p2};
  std::array<double, 3> gx{}, gy{};
  for (int i = 0; i < 3; ++i) {
    const Point& a = p[(i + 1) % 3];
    const Point& b = p[(i + 2) % 3];
    gx[i] = (a.y - b.y) / area2;
    gy[i] = (b.x - a.x) / area2;
  }
  Eigen::Matrix3d k;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k(i, j) = 0.5 * std::abs(area2) * (gx[i] * gx[j] + gy[i] * gy[j]);
  }
  return k;
}

Eigen::Matrix3d element_mass(const Point& p0, const Point& p1, const Point& p2) {
  const double area = 0.5 * std::abs((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return m * (area / 12.0);
}

namespace {

// Assembles over vertex-to-dof map (-1 = skip).
std::pair<SparseMatrix, SparseMatrix> assemble_mapped(const DiskMesh& m, const std::vector<int>& dof, int n) {
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(m.triangles.size() * 9);
  mt.reserve(m.triangles.size() * 9);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    const Point& p0 = m.vertices[tri[0]];
    const Point& p1 = m.vertices[tri[1]];
    const Point& p2 = m.vertices[tri[2]];
    const double area = signed_area(m, t);
    const double longest = std::max({std::hypot(p1.x - p0.x, p1.y - p0.y), std::hypot(p2.x - p1.x, p2.y - p1.y),
                                     std::hypot(p0.x - p2.x, p0.y - p2.y)});
    // relative test so rounding-level areas count as degenerate
    if (!(area > 1e-12 * longest * longest)) {
      throw AssemblyError("degenerate or inverted triangle " + std::to_string(t), t);
    }
    const Eigen::Matrix3d ke = element_stiffness(p0, p1, p2);
    const Eigen::Matrix3d me = element_mass(p0, p1, p2);
    for (int i = 0; i < 3; ++i) {
      const int di = dof[tri[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dof[tri[j]];
        if (dj < 0) continue;
        kt.emplace_back(di, dj, ke(i, j));
        mt.emplace_back(di, dj, me(i, j));
      }
    }
  }
  SparseMatrix k(n, n), mm(n, n);
  k.setFromTriplets(kt.begin(), kt.end());
  mm.setFromTriplets(mt.begin(), mt.end());
  return {std::move(k), std::move(mm)};
}

}  // namespace

OperatorPair assemble(const DiskMesh& m, const AssemblyOptions& options) {
  OperatorPair pair;
  const std::size_t nv = m.vertices.size();
  std::vector<char> eliminated(nv, 0);
  for (const auto& e : m.boundary_edges) {
    if (e.label == EdgeLabel::Dirichlet) {
      eliminated[e.v[0]] = 1;
      eliminated[e.v[1]] = 1;
    }
  }
  if (!options.junctions_dirichlet) {
    for (int v : m.junction_vertices) eliminated[v] = 0;
  }
  pair.vertex_to_dof.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    if (eliminated[v]) {
      pair.dirichlet_vertices.push_back(static_cast<int>(v));
    } else {
      pair.vertex_to_dof[v] = static_cast<int>(pair.dof_to_vertex.size());
      pair.dof_to_vertex.push_back(static_cast<int>(v));
    }
  }
  auto [k, mm] = assemble_mapped(m, pair.vertex_to_dof, static_cast<int>(pair.dof_to_vertex.size()));
  pair.stiffness = std::move(k);
  pair.mass = std::move(mm);
  return pair;
}

std::pair<SparseMatrix, SparseMatrix> assemble_full(const DiskMesh& m) {
  std::vector<int> dof(m.vertices.size());
  for (std::size_t v = 0; v < dof.size(); ++v) dof[v] = static_cast<int>(v);
  return assemble_mapped(m, dof, static_cast<int>(dof.size()));
}

double rayleigh(const OperatorPair& pair, const Eigen::VectorXd& u) {
  const double denom = u.dot(pair.mass * u);
  if (!(denom > 0.0)) throw DomainError("Rayleigh quotient of a vector with zero mass norm");
  return u.dot(pair.stiffness * u) / denom;
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  std::size_t nnz = 0;
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (it.row() >= it.col()) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.rows() << " " << a.cols() << " " << nnz << "\n";
  char buf[96];
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      if (it.row() < it.col()) continue;
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(it.row() + 1),
                    static_cast<long long>(it.col() + 1), it.value());
      out << buf;
    }
  }
}

}  // namespace zaremba
