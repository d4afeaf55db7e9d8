#include "zaremba/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "zaremba/errors.hpp"

namespace zaremba {

namespace {

constexpr int kMaxGradingLevels = 12;

std::optional<Rational> dyadic(double g) {
  double scale = 1.0;
  for (int k = 0; k <= 30; ++k) {
    const double x = g * scale;
    if (x == std::floor(x)) return Rational(static_cast<std::int64_t>(x), static_cast<std::int64_t>(scale));
    scale *= 2.0;
  }
  return std::nullopt;
}

Angle scaled(const Angle& a, double g, const std::optional<Rational>& exact_g) {
  if (exact_g) return a * *exact_g;
  return Angle::from_radians(a.radians() * g);
}

// Grid multiple needed for an exact angle p/q*pi to be k*2pi/N.
std::optional<std::int64_t> alignment_factor(const Angle& a) {
  if (!a.pi_multiple()) return std::nullopt;
  const Rational r = a.normalized().pi_multiple().value();
  const std::int64_t two_q = 2 * r.den();
  return two_q / std::gcd(r.num(), two_q);
}

// Smallest multiple * c * 2^q >= target with c in {1, 3, 5, 7}: such counts
// halve several times while staying multiples of `multiple`.
std::int64_t smooth_count(std::int64_t target, std::int64_t multiple) {
  std::int64_t best = 0;
  for (std::int64_t c : {1, 3, 5, 7}) {
    std::int64_t v = multiple * c;
    while (v < target) v *= 2;
    if (best == 0 || v < best) best = v;
  }
  return best;
}

std::vector<Angle> uniform_angles(int n) {
  std::vector<Angle> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(Angle::pi_times(2 * k, n));
  return out;
}

void insert_sorted(std::vector<Angle>& set, const Angle& a) {
  const Angle x = a.normalized();
  auto it = std::lower_bound(set.begin(), set.end(), x);
  if (it != set.end() && *it == x) return;
  if (it == set.end() && !set.empty() && x == kTwoPi) return;  // equals 0 modulo 2pi
  set.insert(it, x);
}

// Removes nodes that sit much closer to a neighbour than the neighbouring
// spacings (an off-grid junction next to a grid node gives sliver triangles).
// Junctions and extra angles stay; a removed grid node is replaced by the
// node it collided with, and the returned map records that move so inner
// rings can follow it.
std::map<Angle, Angle> declutter(std::vector<Angle>& nodes, int n_grid, const std::vector<Angle>& special, double ratio) {
  enum Kind { kGraded = 0, kGrid = 1, kFixed = 2 };
  std::vector<int> kind(nodes.size(), kGraded);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& r = nodes[i].pi_multiple();
    if (r && (Rational(n_grid) * *r / Rational(2)).den() == 1) kind[i] = kGrid;
    for (const auto& a : special) {
      if (nodes[i] == a.normalized()) kind[i] = kFixed;
    }
  }
  std::map<Angle, Angle> moved;
  const double tau = 0.4 * ratio;
  bool changed = true;
  while (changed && nodes.size() >= 4) {
    changed = false;
    const std::size_t n = nodes.size();
    auto gap = [&](std::size_t i) { return ccw_distance(nodes[i % n], nodes[(i + 1) % n]).radians(); };
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      if (!(gap(i) < tau * std::min(gap(i + n - 1), gap(i + 1)))) continue;
      if (kind[i] == kFixed && kind[j] == kFixed) continue;
      // lower kind goes; graded before grid, so grid moves only onto fixed nodes
      const std::size_t victim = kind[i] < kind[j] ? i : (kind[j] < kind[i] ? j : (kind[i] == kGraded ? j : i));
      const std::size_t keep = victim == i ? j : i;
      if (kind[victim] == kGrid) {
        moved[nodes[victim]] = nodes[keep];
        kind[keep] = kFixed;
      }
      nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(victim));
      kind.erase(kind.begin() + static_cast<std::ptrdiff_t>(victim));
      changed = true;
      break;
    }
  }
  return moved;
}

Point polar(double r, const Angle& a) { return {r * std::cos(a.radians()), r * std::sin(a.radians())}; }

void orient_and_push(std::vector<std::array<int, 3>>& tris, const std::vector<Point>& v, int a, int b, int c) {
  const double area2 = (v[b].x - v[a].x) * (v[c].y - v[a].y) - (v[c].x - v[a].x) * (v[b].y - v[a].y);
  if (area2 >= 0) {
    tris.push_back({a, b, c});
  } else {
    tris.push_back({a, c, b});
  }
}

void label_boundary(DiskMesh& m) {
  const auto& p = m.partition;
  const std::size_t nb = m.boundary_vertices.size();
  m.boundary_edges.clear();
  m.junction_vertices.clear();
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t j = (i + 1) % nb;
    const Angle& a0 = m.boundary_angles[i];
    const Angle mid = a0 + ccw_distance(a0, m.boundary_angles[j]) / 2;
    BoundaryEdge e;
    e.v = {m.boundary_vertices[i], m.boundary_vertices[j]};
    const auto cls = p.contains(mid);
    if (cls == BoundaryClass::Endpoint) {
      throw PreconditionError("junction inside a boundary edge at angle " + mid.to_string());
    }
    e.label = cls == BoundaryClass::Dirichlet ? EdgeLabel::Dirichlet : EdgeLabel::Neumann;
    e.arc_id = p.component_at(mid).value_or(0);
    m.boundary_edges.push_back(e);
  }
  std::size_t found = 0;
  const auto junctions = p.junctions();
  for (std::size_t i = 0; i < nb; ++i) {
    if (std::binary_search(junctions.begin(), junctions.end(), m.boundary_angles[i])) {
      m.junction_vertices.push_back(m.boundary_vertices[i]);
      ++found;
    }
  }
  if (found != junctions.size()) throw PreconditionError("partition junction is not a boundary vertex");
}

}  // namespace

std::optional<int> DiskMesh::find_vertex(std::size_t ring, const Angle& theta) const {
  if (ring >= ring_angles.size()) return std::nullopt;
  const auto& set = ring_angles[ring];
  Angle x = theta.normalized();
  auto it = std::lower_bound(set.begin(), set.end(), x);
  if (it != set.end() && *it == x) return ring_offset[ring] + static_cast<int>(it - set.begin());
  if (!set.empty() && x == kTwoPi && set.front() == Angle()) return ring_offset[ring];
  return std::nullopt;
}

int choose_angular_nodes(const std::vector<Angle>& angles, double h, int symmetry) {
  if (!(h > 0.0) || h > 1.0) throw DomainError("mesh size h must lie in (0, 1]");
  if (symmetry < 1) throw DomainError("symmetry order must be positive");
  const int multiple = std::lcm(4, 2 * symmetry);
  const double estimate = 2.0 * std::numbers::pi / h;
  const auto base_count = static_cast<std::int64_t>(std::max(8.0, std::ceil(estimate - 1e-9)));
  const std::int64_t base = smooth_count(base_count, multiple);
  std::int64_t align = multiple;
  for (const auto& a : angles) {
    const auto f = alignment_factor(a);
    if (!f || *f > 1 << 20) return static_cast<int>(base);
    align = std::lcm(align, *f);
    if (align > 8 * base) return static_cast<int>(base);
  }
  const std::int64_t aligned = (base + align - 1) / align * align;
  return static_cast<int>(aligned <= 8 * base ? aligned : base);
}

DiskMesh triangulate(const BoundaryPartition& p, double h, int grading_levels, const MeshOptions& options) {
  if (!(h > 0.0) || h > 1.0) throw DomainError("mesh size h must lie in (0, 1]");
  if (grading_levels < 0 || grading_levels > kMaxGradingLevels) throw DomainError("grading_levels must lie in [0, 12]");
  if (!(options.grading_ratio > 0.0) || !(options.grading_ratio < 1.0)) {
    throw DomainError("grading ratio must lie in (0, 1)");
  }
  if (options.symmetry < 1) throw DomainError("symmetry order must be positive");

  const int multiple = std::lcm(4, 2 * options.symmetry);
  const auto rings_regular = static_cast<int>(std::ceil(1.0 / h - 1e-9));
  const double estimate = 2.0 * std::numbers::pi / h;
  if (estimate * estimate > 4.0 * static_cast<double>(options.max_vertices)) {
    throw ResourceError("mesh size h too small for the vertex cap");
  }

  std::vector<Angle> special = p.junctions();
  for (const auto& a : options.extra_boundary_angles) special.push_back(a.normalized());

  int n_out = 0;
  if (options.angular_nodes > 0) {
    if (options.angular_nodes % multiple != 0) {
      throw PreconditionError("angular_nodes must be a multiple of " + std::to_string(multiple));
    }
    n_out = options.angular_nodes;
  } else {
    n_out = choose_angular_nodes(special, h, options.symmetry);
  }

  const std::optional<Rational> exact_g = dyadic(options.grading_ratio);
  const Angle spacing = Angle::pi_times(2, n_out);

  // Boundary node set: uniform grid, junctions and extra angles, graded
  // offsets around each junction.
  std::vector<Angle> outer = uniform_angles(n_out);
  for (const auto& a : special) insert_sorted(outer, a);
  if (grading_levels > 0) {
    for (const auto& j : p.junctions()) {
      Angle offset = spacing;
      for (int k = 1; k <= grading_levels; ++k) {
        offset = scaled(offset, options.grading_ratio, exact_g);
        insert_sorted(outer, j + offset);
        insert_sorted(outer, j - offset);
      }
    }
  }
  const auto moved = declutter(outer, n_out, special, std::min(options.grading_ratio, 1.0 - options.grading_ratio));

  // Radii, inner to outer.
  std::vector<double> radii;
  for (int j = 1; j < rings_regular; ++j) radii.push_back(static_cast<double>(j) / rings_regular);
  const double h_ring = 1.0 / rings_regular;
  std::vector<double> layer;
  double depth = h_ring;
  for (int k = 1; k <= grading_levels; ++k) {
    depth *= options.grading_ratio;
    layer.push_back(1.0 - depth);
  }
  const std::size_t first_layer = radii.size();
  radii.insert(radii.end(), layer.begin(), layer.end());
  radii.push_back(1.0);

  // Angular sets, outer to inner. Boundary layer rings share the boundary set.
  const std::size_t n_rings = radii.size();
  std::vector<std::vector<Angle>> sets(n_rings);
  std::vector<int> uniform_count(n_rings, n_out);
  for (std::size_t j = first_layer; j < n_rings; ++j) sets[j] = outer;
  for (std::size_t jj = first_layer; jj-- > 0;) {
    int n_next = uniform_count[jj + 1];
    if (!options.uniform_rings) {
      const double gap = radii[jj + 1] - radii[jj];
      const double arc = 2.0 * std::numbers::pi * radii[jj] / n_next;
      if (arc < 0.5 * gap && n_next % 2 == 0 && (n_next / 2) % multiple == 0 && n_next / 2 >= 8) n_next /= 2;
    }
    uniform_count[jj] = n_next;
    if (options.uniform_rings) {
      sets[jj] = outer;
    } else {
      sets[jj] = uniform_angles(n_next);
      for (auto& a : sets[jj]) {
        if (auto it = moved.find(a); it != moved.end()) a = it->second;
      }
    }
  }

  std::size_t count = 1;
  for (const auto& s : sets) count += s.size();
  if (count > options.max_vertices) {
    throw ResourceError("mesh would have " + std::to_string(count) + " vertices, cap is " +
                        std::to_string(options.max_vertices));
  }

  DiskMesh m;
  m.h = h;
  m.grading_ratio = options.grading_ratio;
  m.grading_levels = grading_levels;
  m.partition = p;
  m.options = options;
  m.ring_radii = radii;
  m.ring_angles = sets;
  m.vertices.reserve(count);
  m.vertices.push_back({0.0, 0.0});
  for (std::size_t j = 0; j < n_rings; ++j) {
    m.ring_offset.push_back(static_cast<int>(m.vertices.size()));
    for (const auto& a : sets[j]) m.vertices.push_back(polar(radii[j], a));
  }

  // Central fan.
  {
    const auto& s = sets.front();
    const int off = m.ring_offset.front();
    const int n = static_cast<int>(s.size());
    for (int k = 0; k < n; ++k) orient_and_push(m.triangles, m.vertices, 0, off + k, off + (k + 1) % n);
  }

  // Annular strips. Each inner cell [a_i, a_{i+1}] is joined to the outer
  // nodes it spans; the inner edge connects to the outer node nearest the
  // cell's mid-angle, ties broken by cell parity so that reflections map the
  // triangulation to itself.
  for (std::size_t j = 0; j + 1 < n_rings; ++j) {
    const auto& in = sets[j];
    const auto& out = sets[j + 1];
    const int in_off = m.ring_offset[j];
    const int out_off = m.ring_offset[j + 1];
    const int p_in = static_cast<int>(in.size());
    const int q_out = static_cast<int>(out.size());
    std::vector<int> pos(p_in);
    {
      int cursor = 0;
      for (int i = 0; i < p_in; ++i) {
        while (cursor < q_out && out[cursor] < in[i]) ++cursor;
        if (cursor == q_out || !(out[cursor] == in[i])) throw std::logic_error("ring angle sets are not nested");
        pos[i] = cursor;
      }
    }
    for (int i = 0; i < p_in; ++i) {
      const int i1 = (i + 1) % p_in;
      const Angle width = (i1 == 0 && p_in == 1) ? kTwoPi : ccw_distance(in[i], in[i1]);
      const Angle half = width / 2;
      int span = pos[i1] - pos[i];
      if (span <= 0) span += q_out;
      int best = 0;
      Angle best_dist;
      for (int s = 0; s <= span; ++s) {
        const Angle d = ccw_distance(in[i], out[(pos[i] + s) % q_out]);
        const Angle offset = s == span ? width : d;
        const Angle dist = offset > half ? offset - half : half - offset;
        const int c = s == 0 ? -1 : compare(dist, best_dist);
        if (s == 0 || c < 0 || (c == 0 && i % 2 == 1)) {
          best = s;
          best_dist = dist;
        }
      }
      const int a0 = in_off + i;
      const int a1 = in_off + i1;
      auto outer_vertex = [&](int s) { return out_off + (pos[i] + s) % q_out; };
      for (int s = 0; s < best; ++s) orient_and_push(m.triangles, m.vertices, a0, outer_vertex(s), outer_vertex(s + 1));
      orient_and_push(m.triangles, m.vertices, a0, a1, outer_vertex(best));
      for (int s = best; s < span; ++s) orient_and_push(m.triangles, m.vertices, a1, outer_vertex(s), outer_vertex(s + 1));
    }
  }

  const std::size_t last = n_rings - 1;
  m.boundary_index.assign(m.vertices.size(), -1);
  for (std::size_t k = 0; k < sets[last].size(); ++k) {
    const int v = m.ring_offset[last] + static_cast<int>(k);
    m.boundary_index[v] = static_cast<int>(m.boundary_vertices.size());
    m.boundary_vertices.push_back(v);
    m.boundary_angles.push_back(sets[last][k]);
  }
  label_boundary(m);
  return m;
}

DiskMesh symmetrize_angular(const DiskMesh& m, int n) {
  if (n < 1) throw DomainError("symmetry order must be positive");
  if (!m.structured()) throw PreconditionError("symmetrize_angular needs a mesh produced by triangulate");
  MeshOptions opts = m.options;
  opts.symmetry = std::lcm(opts.symmetry, n);
  const int multiple = std::lcm(4, 2 * opts.symmetry);
  if (opts.angular_nodes > 0 && opts.angular_nodes % multiple != 0) {
    opts.angular_nodes = (opts.angular_nodes + multiple - 1) / multiple * multiple;
  }
  DiskMesh out = triangulate(m.partition, m.h, m.grading_levels, opts);
  const double step = 2.0 * std::numbers::pi / n;
  const auto rot = rotation_map(out, step);
  const auto refl = reflection_map(out);
  if (!rot || !refl) {
    throw PreconditionError("partition nodes break the requested symmetry; lower grading_levels or use a symmetric partition");
  }
  return out;
}

DiskMesh relabel(const DiskMesh& m, const BoundaryPartition& p) {
  DiskMesh out = m;
  out.partition = p;
  label_boundary(out);
  return out;
}

DiskMesh refine_uniform(const DiskMesh& m) {
  DiskMesh out;
  out.h = m.h / 2;
  out.grading_ratio = m.grading_ratio;
  out.grading_levels = m.grading_levels;
  out.partition = m.partition;
  out.options = m.options;
  out.vertices = m.vertices;

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back({0.5 * (m.vertices[a].x + m.vertices[b].x), 0.5 * (m.vertices[a].y + m.vertices[b].y)});
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& t : m.triangles) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  out.boundary_index.assign(out.vertices.size(), -1);
  const std::size_t nb = m.boundary_vertices.size();
  for (std::size_t i = 0; i < nb; ++i) {
    const int a = m.boundary_vertices[i];
    const int b = m.boundary_vertices[(i + 1) % nb];
    const Angle& ta = m.boundary_angles[i];
    const Angle tb = ta + ccw_distance(ta, m.boundary_angles[(i + 1) % nb]);
    for (const auto& [v, ang] : {std::pair{a, ta}, std::pair{mid(a, b), (ta + tb) / 2}}) {
      out.boundary_index[v] = static_cast<int>(out.boundary_vertices.size());
      out.boundary_vertices.push_back(v);
      out.boundary_angles.push_back(ang.normalized());
    }
  }
  label_boundary(out);
  return out;
}

std::optional<std::vector<int>> match_vertices(const DiskMesh& m, const std::function<Point(Point)>& transform,
                                               double tol) {
  const double cell = 1e-6;
  auto key = [&](double x, double y) {
    return std::pair<long long, long long>(static_cast<long long>(std::floor(x / cell)),
                                           static_cast<long long>(std::floor(y / cell)));
  };
  struct Hash {
    std::size_t operator()(const std::pair<long long, long long>& k) const noexcept {
      return std::hash<long long>()(k.first * 1000003LL ^ k.second);
    }
  };
  std::unordered_map<std::pair<long long, long long>, std::vector<int>, Hash> grid;
  grid.reserve(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    grid[key(m.vertices[i].x, m.vertices[i].y)].push_back(static_cast<int>(i));
  }
  std::vector<int> map(m.vertices.size(), -1);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const Point q = transform(m.vertices[i]);
    const auto [kx, ky] = key(q.x, q.y);
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx) {
      for (long long dy = -1; dy <= 1 && found < 0; ++dy) {
        auto it = grid.find({kx + dx, ky + dy});
        if (it == grid.end()) continue;
        for (int c : it->second) {
          if (std::abs(m.vertices[c].x - q.x) <= tol && std::abs(m.vertices[c].y - q.y) <= tol) {
            found = c;
            break;
          }
        }
      }
    }
    if (found < 0) return std::nullopt;
    map[i] = found;
  }
  return map;
}

bool preserves_triangles(const DiskMesh& m, const std::vector<int>& vertex_map) {
  auto canon = [](std::array<int, 3> t) {
    std::sort(t.begin(), t.end());
    return t;
  };
  std::set<std::array<int, 3>> all;
  for (const auto& t : m.triangles) all.insert(canon(t));
  for (const auto& t : m.triangles) {
    if (!all.count(canon({vertex_map[t[0]], vertex_map[t[1]], vertex_map[t[2]]}))) return false;
  }
  return true;
}

std::optional<std::vector<int>> reflection_map(const DiskMesh& m) {
  return match_vertices(m, [](Point p) { return Point{p.x, -p.y}; });
}

std::optional<std::vector<int>> rotation_map(const DiskMesh& m, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return match_vertices(m, [c, s](Point p) { return Point{c * p.x - s * p.y, s * p.x + c * p.y}; });
}

double signed_area(const DiskMesh& m, std::size_t triangle) {
  const auto& t = m.triangles[triangle];
  const Point& a = m.vertices[t[0]];
  const Point& b = m.vertices[t[1]];
  const Point& c = m.vertices[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double total_area(const DiskMesh& m) {
  double sum = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) sum += signed_area(m, t);
  return sum;
}

std::pair<double, double> angle_range_degrees(const DiskMesh& m) {
  double lo = 180.0;
  double hi = 0.0;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point& a = m.vertices[t[k]];
      const Point& b = m.vertices[t[(k + 1) % 3]];
      const Point& c = m.vertices[t[(k + 2) % 3]];
      const double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - a.x, vy = c.y - a.y;
      const double ang = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy) * 180.0 / std::numbers::pi;
      lo = std::min(lo, ang);
      hi = std::max(hi, ang);
    }
  }
  return {lo, hi};
}

void write_msh(const DiskMesh& m, std::ostream& out) {
  char buf[128];
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << m.vertices.size() << "\n";
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g 0\n", i + 1, m.vertices[i].x, m.vertices[i].y);
    out << buf;
  }
  out << "$EndNodes\n$Elements\n" << m.boundary_edges.size() + m.triangles.size() << "\n";
  std::size_t id = 1;
  for (const auto& e : m.boundary_edges) {
    out << id++ << " 1 2 " << (e.label == EdgeLabel::Dirichlet ? 1 : 2) << " " << e.arc_id + 1 << " " << e.v[0] + 1
        << " " << e.v[1] + 1 << "\n";
  }
  for (const auto& t : m.triangles) {
    out << id++ << " 2 2 10 1 " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
  out << "$EndElements\n";
}

}  // namespace zaremba
