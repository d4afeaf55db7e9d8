#include "zaremba/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>

#include "zaremba/errors.hpp"
#include "zaremba/fem.hpp"

namespace zaremba {

const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Symmetric:
      return "symmetric";
    case SymmetryClass::Antisymmetric:
      return "antisymmetric";
    case SymmetryClass::Neither:
      return "neither";
  }
  return "?";
}

namespace {

constexpr double kTwoPiD = 2.0 * std::numbers::pi;

std::vector<std::vector<int>> adjacency(const DiskMesh& m) {
  std::vector<std::vector<int>> adj(m.vertices.size());
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].push_back(t[(k + 1) % 3]);
      adj[t[k]].push_back(t[(k + 2) % 3]);
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double wrap(double theta) {
  double t = std::fmod(theta, kTwoPiD);
  if (t < 0) t += kTwoPiD;
  return t;
}

double mass_norm_sq(const DiskMesh& m, const Eigen::VectorXd& w) {
  double s = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    const double area = std::abs(signed_area(m, t));
    const double a = w[tri[0]], b = w[tri[1]], c = w[tri[2]];
    // v^T (area/12)[[2,1,1],[1,2,1],[1,1,2]] v
    s += area / 12.0 * (a * a + b * b + c * c + (a + b + c) * (a + b + c));
  }
  return s;
}

Eigen::VectorXd pullback(const Eigen::VectorXd& u, const std::vector<int>& map) {
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = u[map[static_cast<std::size_t>(i)]];
  return out;
}

std::vector<int> automorphism(const DiskMesh& m, const std::function<Point(Point)>& f, const char* what) {
  auto map = match_vertices(m, f);
  if (!map || !preserves_triangles(m, *map)) {
    throw PreconditionError(std::string("mesh is not invariant under ") + what);
  }
  return *map;
}

std::int64_t grid_steps(const Angle& x, int n, const char* what) {
  // x / (2pi/n)
  if (x.pi_multiple()) {
    const Rational q = *x.pi_multiple() * Rational(n, 2);
    if (q.den() == 1) return q.num();
  } else {
    const double q = x.radians() * n / kTwoPiD;
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9) return static_cast<std::int64_t>(r);
  }
  throw PreconditionError(std::string(what) + " = " + x.to_string() + " is not on the angular grid of " +
                          std::to_string(n) + " nodes");
}

}  // namespace

NodalReport nodal_domains(const DiskMesh& m, const Eigen::VectorXd& u) {
  const std::size_t nv = m.vertices.size();
  if (static_cast<std::size_t>(u.size()) != nv) throw DomainError("vector length does not match the vertex count");
  const double umax = u.cwiseAbs().maxCoeff();
  if (!(umax > 0.0)) throw DomainError("nodal analysis of the zero vector");
  const double eps = kZeroThreshold * umax;

  std::vector<char> dirichlet(nv, 0);
  for (const auto& e : m.boundary_edges) {
    if (e.label == EdgeLabel::Dirichlet) dirichlet[e.v[0]] = dirichlet[e.v[1]] = 1;
  }
  for (int v : m.junction_vertices) dirichlet[v] = 1;

  NodalReport r;
  r.vertex_labels.assign(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (u[v] > eps) r.vertex_labels[v] = 1;
    if (u[v] < -eps) r.vertex_labels[v] = -1;
  }

  // Effective signs: zero vertices join the side with the larger mean |u|.
  const auto adj = adjacency(m);
  std::vector<signed char> sign(r.vertex_labels);
  bool pending = true;
  for (int pass = 0; pending && pass < 64; ++pass) {
    pending = false;
    std::vector<signed char> next = sign;
    for (std::size_t v = 0; v < nv; ++v) {
      if (sign[v] != 0 || dirichlet[v]) continue;
      double sp = 0, sm = 0;
      int np = 0, nm = 0;
      for (int w : adj[v]) {
        if (dirichlet[w]) continue;
        if (sign[w] > 0) sp += std::abs(u[w]), ++np;
        if (sign[w] < 0) sm += std::abs(u[w]), ++nm;
      }
      if (np == 0 && nm == 0) {
        pending = true;
        continue;
      }
      const double mp = np ? sp / np : -1.0;
      const double mm = nm ? sm / nm : -1.0;
      next[v] = mp >= mm ? 1 : -1;
    }
    sign.swap(next);
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (sign[v] == 0 && !dirichlet[v]) sign[v] = 1;
  }

  UnionFind uf(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    if (dirichlet[v]) continue;
    for (int w : adj[v]) {
      if (!dirichlet[w] && sign[w] == sign[v]) uf.unite(static_cast<int>(v), w);
    }
  }
  r.vertex_domain.assign(nv, -1);
  std::map<int, int> ids;
  for (std::size_t v = 0; v < nv; ++v) {
    if (dirichlet[v]) continue;
    const int root = uf.find(static_cast<int>(v));
    auto [it, inserted] = ids.emplace(root, static_cast<int>(ids.size()));
    if (inserted) r.domain_sign.push_back(sign[v]);
    r.vertex_domain[v] = it->second;
  }
  r.domain_count = static_cast<int>(ids.size());

  // Third vertex of the triangle on each boundary edge.
  std::map<std::pair<int, int>, int> opposite;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (m.is_boundary_vertex(a) && m.is_boundary_vertex(b)) opposite[{std::min(a, b), std::max(a, b)}] = t[(k + 2) % 3];
    }
  }

  struct Candidate {
    double angle;
    int position;  // boundary index
    bool junction;
  };
  std::vector<Candidate> cand;
  const int nb = static_cast<int>(m.boundary_vertices.size());

  for (int i = 0; i < nb; ++i) {
    const auto& e = m.boundary_edges[i];
    if (e.label != EdgeLabel::Neumann) continue;
    const int a = e.v[0], b = e.v[1];
    const double th0 = m.boundary_angles[i].radians();
    const double len = ccw_distance(m.boundary_angles[i], m.boundary_angles[(i + 1) % nb]).radians();
    const int s0 = dirichlet[a] ? 0 : sign[a];
    const int s1 = dirichlet[b] ? 0 : sign[b];
    if (s0 * s1 < 0) {
      double t = u[a] / (u[a] - u[b]);
      if (!(t >= 0.0 && t <= 1.0)) t = 0.5;  // joined zero vertex with opposite raw sign
      const double plus = s0 > 0 ? t : 1.0 - t;
      r.neumann_measure_plus += plus * len;
      r.neumann_measure_minus += (1.0 - plus) * len;
      cand.push_back({wrap(th0 + t * len), i, false});
      continue;
    }
    int s = s0 != 0 ? s0 : s1;
    if (s == 0) {
      auto it = opposite.find({std::min(a, b), std::max(a, b)});
      s = (it != opposite.end() && !dirichlet[it->second]) ? sign[it->second] : 1;
    }
    (s > 0 ? r.neumann_measure_plus : r.neumann_measure_minus) += len;
  }

  // The zero set reaches a Dirichlet vertex when free neighbours of both
  // signs surround it.
  for (int i = 0; i < nb; ++i) {
    const int v = m.boundary_vertices[i];
    if (!dirichlet[v]) continue;
    bool pos = false, neg = false;
    for (int w : adj[v]) {
      if (dirichlet[w]) continue;
      pos |= sign[w] > 0;
      neg |= sign[w] < 0;
    }
    if (pos && neg) {
      const bool junction = std::find(m.junction_vertices.begin(), m.junction_vertices.end(), v) != m.junction_vertices.end();
      cand.push_back({m.boundary_angles[i].radians(), i, junction});
    }
  }

  // Cluster candidates within two boundary steps.
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    return x.position != y.position ? x.position < y.position : x.angle < y.angle;
  });
  if (!cand.empty()) {
    std::vector<std::vector<Candidate>> groups;
    for (const auto& c : cand) {
      if (!groups.empty() && c.position - groups.back().back().position <= 2) {
        groups.back().push_back(c);
      } else {
        groups.push_back({c});
      }
    }
    if (groups.size() > 1 && groups.front().front().position + nb - groups.back().back().position <= 2) {
      groups.front().insert(groups.front().begin(), groups.back().begin(), groups.back().end());
      groups.pop_back();
    }
    for (const auto& g : groups) {
      double sx = 0, sy = 0;
      bool junction = false;
      for (const auto& c : g) {
        sx += std::cos(c.angle);
        sy += std::sin(c.angle);
        junction |= c.junction;
      }
      r.nodal_endpoints.push_back(wrap(std::atan2(sy, sx)));
      r.touches_junction |= junction;
    }
    std::sort(r.nodal_endpoints.begin(), r.nodal_endpoints.end());
  }
  r.is_closed = r.domain_count >= 2 && r.nodal_endpoints.empty();
  r.beta_u2 = 0.5 * std::min(r.neumann_measure_plus, r.neumann_measure_minus);

  // Zero level set per triangle.
  for (const auto& t : m.triangles) {
    int s[3];
    for (int k = 0; k < 3; ++k) s[k] = dirichlet[t[k]] ? 0 : sign[t[k]];
    std::vector<Point> pts;
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
      const int sa = s[k], sb = s[(k + 1) % 3], sc = s[(k + 2) % 3];
      if (sa * sb < 0) {
        double w = u[a] / (u[a] - u[b]);
        if (!(w >= 0.0 && w <= 1.0)) w = 0.5;
        pts.push_back({m.vertices[a].x + w * (m.vertices[b].x - m.vertices[a].x),
                       m.vertices[a].y + w * (m.vertices[b].y - m.vertices[a].y)});
      }
      if (sa == 0 && sb * sc < 0) pts.push_back(m.vertices[a]);
      (void)c;
    }
    if (pts.size() == 2) r.nodal_segments.push_back({pts[0], pts[1]});
  }
  return r;
}

double beta_of(const NodalReport& report) {
  if (report.domain_count != 2) {
    throw DomainError("beta_u2 needs exactly two nodal domains, got " + std::to_string(report.domain_count));
  }
  return report.beta_u2;
}

std::pair<double, double> symmetry_defects(const DiskMesh& m, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != m.vertices.size()) {
    throw DomainError("vector length does not match the vertex count");
  }
  const auto map = automorphism(m, [](Point p) { return Point{p.x, -p.y}; }, "reflection across the x-axis");
  const Eigen::VectorXd ur = pullback(u, map);
  const double norm = std::sqrt(mass_norm_sq(m, u));
  if (!(norm > 0.0)) throw DomainError("symmetry class of the zero vector");
  return {std::sqrt(mass_norm_sq(m, u - ur)) / norm, std::sqrt(mass_norm_sq(m, u + ur)) / norm};
}

SymmetryClass symmetry_class(const DiskMesh& m, const Eigen::VectorXd& u) {
  const auto [minus, plus] = symmetry_defects(m, u);
  if (minus <= plus && minus <= kSymmetryThreshold) return SymmetryClass::Symmetric;
  if (plus < minus && plus <= kSymmetryThreshold) return SymmetryClass::Antisymmetric;
  return SymmetryClass::Neither;
}

Eigen::VectorXd symmetrize_dihedral(const DiskMesh& m, const Eigen::VectorXd& u) {
  const auto rx = automorphism(m, [](Point p) { return Point{p.x, -p.y}; }, "reflection across the x-axis");
  const auto ry = automorphism(m, [](Point p) { return Point{-p.x, p.y}; }, "reflection across the y-axis");
  const auto rpi = automorphism(m, [](Point p) { return Point{-p.x, -p.y}; }, "rotation by pi");
  return 0.25 * (u + pullback(u, rx) + pullback(u, ry) + pullback(u, rpi));
}

Eigen::VectorXd rearrange_test_function(const DiskMesh& m, const Eigen::VectorXd& u, const Angle& a,
                                        const Angle& gap_b) {
  if (static_cast<std::size_t>(u.size()) != m.vertices.size()) {
    throw DomainError("vector length does not match the vertex count");
  }
  const Angle ell = m.partition.total_length();
  if (m.partition.is_empty() || m.partition.is_full_circle()) {
    throw PreconditionError("rearrangement needs the uniform 2-partition");
  }
  const GammaParams g2{ell, (kTwoPi - ell) / 4};
  if (!(m.partition == make_gamma(g2))) {
    throw PreconditionError("mesh partition is not the uniform 2-partition with arcs centred at +-pi/2");
  }
  make_two_component(a, gap_b, ell);  // range checks
  if (!m.structured() || !m.options.uniform_rings || m.grading_levels != 0) {
    throw PreconditionError("rearrangement needs an ungraded mesh built with uniform_rings");
  }
  const int n = static_cast<int>(m.boundary_vertices.size());
  if (n % 4 != 0) throw PreconditionError("angular node count must be a multiple of 4");
  for (std::size_t j = 0; j < m.ring_angles.size(); ++j) {
    if (static_cast<int>(m.ring_angles[j].size()) != n) throw PreconditionError("rings differ in node count");
  }
  for (int k = 0; k < n; ++k) {
    if (!(m.boundary_angles[k] == Angle::pi_times(2 * k, n))) {
      throw PreconditionError("boundary nodes are not a uniform angular grid");
    }
  }

  const Angle alpha = (ell / 2 - a) / 2;
  const Angle beta = ((kTwoPi - ell) / 2 - gap_b) / 2;
  const std::int64_t ia = grid_steps(alpha, n, "alpha");
  const std::int64_t ib = grid_steps(beta, n, "beta");
  if ((ia - ib) % 2 != 0) {
    throw PreconditionError("alpha and beta must be grid multiples of equal parity");
  }

  const Eigen::VectorXd w = symmetrize_dihedral(m, u);
  const std::int64_t p1 = n / 4 - ib;
  const std::int64_t p2 = n / 2 - ia;
  const std::int64_t p3 = 3 * n / 4 + ib;
  std::vector<int> source_index(n);
  for (int k = 0; k < n; ++k) {
    std::int64_t kk = k < ia ? k + n : k;
    std::int64_t shift;
    if (kk <= p1) {
      shift = ib - ia;
    } else if (kk <= p2) {
      shift = ia + ib;
    } else if (kk <= p3) {
      shift = ia - ib;
    } else {
      shift = -ia - ib;
    }
    source_index[k] = static_cast<int>((((k + shift) % n) + n) % n);
  }

  Eigen::VectorXd out(w.size());
  out[0] = w[0];
  for (std::size_t j = 0; j < m.ring_angles.size(); ++j) {
    const int off = m.ring_offset[j];
    for (int k = 0; k < n; ++k) out[off + k] = w[off + source_index[k]];
  }
  return out;
}

Eigen::VectorXd rearrange_test_function(const DiskMesh& m, const Eigen::VectorXd& u, const BoundaryPartition& target) {
  const Angle ell = m.partition.total_length();
  if (!(target.total_length() == ell)) throw PreconditionError("target has a different Dirichlet length");
  const Angle neumann_half = (kTwoPi - ell) / 2;
  Angle a, b;
  if (target.component_count() == 1 && !target.is_full_circle()) {
    const Arc& arc = target.arcs().front();
    const Angle centre = arc.start + arc.length / 2;
    const Angle beta = ccw_distance(Angle::pi_times(3, 2), centre);
    a = Angle();
    b = neumann_half - beta * 2;
  } else if (target.component_count() == 2) {
    const auto& arcs = target.arcs();
    const auto gaps = target.neumann_gaps();
    a = std::min(arcs[0].length, arcs[1].length);
    b = std::min(gaps[0].length, gaps[1].length);
  } else {
    throw PreconditionError("target must have one or two Dirichlet components");
  }
  if (b < Angle() || b > neumann_half || !(make_two_component(a, b, ell) == target)) {
    throw PreconditionError("target is not in the placement produced by make_two_component");
  }
  return rearrange_test_function(m, u, a, b);
}

void write_segments(const std::vector<std::array<Point, 2>>& segments, std::ostream& out) {
  char buf[128];
  for (const auto& s : segments) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", s[0].x, s[0].y, s[1].x, s[1].y);
    out << buf;
  }
}

}  // namespace zaremba
