#include "zaremba/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "zaremba/bessel.hpp"
#include "zaremba/errors.hpp"

namespace zaremba {

MeshOptions Discretization::mesh_options() const {
  MeshOptions o;
  o.grading_ratio = grading_ratio;
  o.angular_nodes = angular_nodes;
  return o;
}

Eigen::VectorXd Solution::vertex_values(int i) const { return pair.extend(result.eigenvectors.col(i)); }

Solution solve_partition(const BoundaryPartition& p, const Discretization& d) {
  Solution s;
  s.mesh = triangulate(p, d.h, d.grading_levels, d.mesh_options());
  s.pair = assemble(s.mesh, AssemblyOptions{d.junctions_dirichlet});
  s.result = solve_smallest(s.pair, d.k, d.tol, d.solver);
  return s;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

constexpr double kTwoPiD = 2.0 * std::numbers::pi;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Angle abs_diff(const Angle& a, const Angle& b) { return a > b ? a - b : b - a; }

std::vector<int> reflection(const DiskMesh& m) {
  auto map = reflection_map(m);
  if (!map || !preserves_triangles(m, *map)) throw PreconditionError("mesh is not reflection invariant");
  return *map;
}

// Smallest Rayleigh quotient over span{P v : v in vs} with P the projection
// onto the reflection-even (sign +1) or -odd (sign -1) functions.
double sector_minimum(const Solution& s, const std::vector<int>& map, const std::vector<Eigen::VectorXd>& vs, int sign) {
  std::vector<Eigen::VectorXd> basis;
  for (const auto& v : vs) {
    Eigen::VectorXd r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = v[map[static_cast<std::size_t>(i)]];
    basis.push_back(s.pair.restrict(0.5 * (v + sign * r)));
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd a(n, n), b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = basis[i].dot(s.pair.stiffness * basis[j]);
      b(i, j) = basis[i].dot(s.pair.mass * basis[j]);
    }
  }
  // Drop directions with negligible mass.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> be(b);
  const double top = be.eigenvalues().maxCoeff();
  if (!(top > 0)) return std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (be.eigenvalues()[i] > 1e-8 * top) keep.push_back(i);
  }
  Eigen::MatrixXd q(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    q.col(static_cast<Eigen::Index>(c)) = be.eigenvectors().col(keep[c]) / std::sqrt(be.eigenvalues()[keep[c]]);
  }
  const Eigen::MatrixXd reduced = q.transpose() * a * q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> re(reduced);
  return re.eigenvalues().minCoeff();
}

Discretization with_aligned_nodes(const Discretization& d, const std::vector<BoundaryPartition>& parts) {
  Discretization out = d;
  if (out.angular_nodes == 0) {
    std::vector<Angle> all;
    for (const auto& p : parts) {
      for (const auto& j : p.junctions()) all.push_back(j);
    }
    out.angular_nodes = choose_angular_nodes(all, d.h, 1);
  }
  return out;
}

// Richardson estimate of |lambda(h) - lambda(0)| from values at h, h/2, h/4.
double richardson_error(double l0, double l1, double l2) {
  const double d1 = l0 - l1;
  const double d2 = l1 - l2;
  if (d1 * d2 > 0) {
    const double p = std::log2(d1 / d2);
    if (p >= 0.5 && p <= 4.0) {
      const double limit = l2 - d2 / (std::pow(2.0, p) - 1.0);
      return std::abs(l0 - limit);
    }
  }
  return std::abs(d1) + std::abs(d2);
}

Discretization refined(const Discretization& d, int factor) {
  Discretization r = d;
  r.h = d.h / factor;
  if (r.angular_nodes > 0) r.angular_nodes *= factor;
  return r;
}

Angle lattice(std::int64_t k, int den) { return Angle::pi_times(k, den); }

std::int64_t to_lattice(double radians, int den) {
  return static_cast<std::int64_t>(std::llround(radians * den / std::numbers::pi));
}

// Dirichlet(1, ..., 1) weights.
std::vector<double> simplex(std::mt19937_64& rng, int parts) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(static_cast<std::size_t>(parts));
  double sum = 0;
  for (auto& x : w) sum += x = ex(rng);
  for (auto& x : w) x /= sum;
  return w;
}

// Cuts `total` into pieces following weights, with cumulative sums rounded
// to the lattice pi / den; the pieces add up to `total` exactly.
std::vector<Angle> lattice_pieces(const Angle& total, const std::vector<double>& w, int den) {
  std::vector<Angle> out;
  double acc = 0;
  Angle prev;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    Angle cum = i + 1 == w.size() ? total : lattice(to_lattice(acc * total.radians(), den), den);
    if (cum > total) cum = total;
    if (cum < prev) cum = prev;
    out.push_back(cum - prev);
    prev = cum;
  }
  return out;
}

BoundaryPartition random_partition(std::mt19937_64& rng, int components, const Angle& ell, int den) {
  const auto arcs = lattice_pieces(ell, simplex(rng, components), den);
  const auto gaps = lattice_pieces(kTwoPi - ell, simplex(rng, components), den);
  std::uniform_real_distribution<double> u(0.0, kTwoPiD);
  Angle pos = lattice(to_lattice(u(rng), den), den);
  std::vector<Arc> list;
  for (int i = 0; i < components; ++i) {
    list.push_back({pos, arcs[i]});
    pos = pos + arcs[i] + gaps[i];
  }
  return BoundaryPartition::from_arcs(list);
}

ScanRecord make_record(std::string check, std::string label, const BoundaryPartition& p, double value, double baseline,
                       double margin, double tol) {
  ScanRecord r;
  r.check = std::move(check);
  r.label = std::move(label);
  r.partition = p;
  r.value = value;
  r.baseline = baseline;
  r.margin = margin;
  r.tolerance = tol;
  r.violation = !(margin >= -tol);
  return r;
}

struct RearrangementContext {
  DiskMesh mesh;
  Eigen::VectorXd u;
  SparseMatrix k_full, m_full;
  double energy = 0, mass = 0, rayleigh = 0;
  Discretization d;
};

RearrangementContext prepare_rearrangement(const Angle& ell, int nodes, const Discretization& d) {
  RearrangementContext c;
  c.d = d;
  c.d.k = 1;
  MeshOptions o;
  o.angular_nodes = nodes;
  o.uniform_rings = true;
  const GammaParams g2{ell, (kTwoPi - ell) / 4};
  c.mesh = triangulate(make_gamma(g2), d.h, 0, o);
  const auto pair = assemble(c.mesh, AssemblyOptions{d.junctions_dirichlet});
  const auto res = solve_smallest(pair, 1, d.tol, d.solver);
  c.u = symmetrize_dihedral(c.mesh, pair.extend(res.eigenvectors.col(0)));
  auto [kf, mf] = assemble_full(c.mesh);
  c.k_full = std::move(kf);
  c.m_full = std::move(mf);
  c.energy = c.u.dot(c.k_full * c.u);
  c.mass = c.u.dot(c.m_full * c.u);
  c.rayleigh = c.energy / c.mass;
  return c;
}

RearrangementCheck run_rearrangement(const RearrangementContext& c, const Angle& ell, const Angle& a, const Angle& b) {
  RearrangementCheck r;
  r.a = a;
  r.gap_b = b;
  const auto target = make_two_component(a, b, ell);
  const Eigen::VectorXd ut = rearrange_test_function(c.mesh, c.u, a, b);
  const double e = ut.dot(c.k_full * ut);
  const double m = ut.dot(c.m_full * ut);
  r.rayleigh_u = c.rayleigh;
  r.rayleigh_rearranged = e / m;
  r.stiffness_defect = std::abs(e - c.energy) / c.energy;
  r.mass_defect = std::abs(m - c.mass) / c.mass;
  const DiskMesh tm = relabel(c.mesh, target);
  const auto pair = assemble(tm, AssemblyOptions{c.d.junctions_dirichlet});
  const double scale = ut.cwiseAbs().maxCoeff();
  r.vanishes_on_target = true;
  for (int v : pair.dirichlet_vertices) {
    if (std::abs(ut[v]) > 1e-14 * scale) r.vanishes_on_target = false;
  }
  r.lambda1_target = solve_smallest(pair, 1, c.d.tol, c.d.solver).eigenvalues[0];
  return r;
}

}  // namespace

// ---------------------------------------------------------------- sweep

std::vector<Angle> beta_grid(int den, int max_i) {
  if (den < 1 || max_i < 0) throw DomainError("grid needs den >= 1 and max >= 0");
  std::vector<Angle> g;
  for (int i = 0; i <= max_i; ++i) g.push_back(Angle::pi_times(i, den));
  return g;
}

std::vector<Angle> default_beta_grid(const Angle& ell, int steps) {
  if (steps < 1) throw DomainError("grid needs at least one step");
  const Angle bmax = (kTwoPi - ell) / 4;
  std::vector<Angle> g;
  for (int i = 0; i <= steps; ++i) {
    g.push_back(bmax.is_exact() ? bmax * Rational(i, steps) : Angle::from_radians(bmax.radians() * i / steps));
  }
  return g;
}

SweepRecord evaluate_gamma(const Angle& ell, const Angle& beta, const Discretization& d,
                           std::vector<std::array<Point, 2>>* nodal_segments) {
  Discretization dd = d;
  dd.k = std::max(3, d.k);
  const auto p = make_gamma({ell, beta});
  const Solution s = solve_partition(p, dd);
  SweepRecord r;
  r.beta = beta;
  r.lambda1 = s.result.eigenvalues[0];
  r.lambda2 = s.result.eigenvalues[1];
  r.lambda3 = s.result.eigenvalues[2];
  r.gap = r.lambda3 - r.lambda2;
  r.h = d.h;
  for (int i = 0; i < 3; ++i) r.residuals[i] = s.result.residuals[i];
  r.vertices = s.mesh.vertices.size();
  const Eigen::VectorXd u2 = s.vertex_values(1);
  const Eigen::VectorXd u3 = s.vertex_values(2);
  const NodalReport rep = nodal_domains(s.mesh, u2);
  r.domain_count = rep.domain_count;
  r.beta_u2 = rep.beta_u2;
  r.endpoints = rep.nodal_endpoints;
  r.is_closed = rep.is_closed;
  r.touches_junction = rep.touches_junction;
  if (nodal_segments) *nodal_segments = rep.nodal_segments;
  r.symmetry = symmetry_class(s.mesh, u2);
  r.resolved = r.symmetry;
  if (r.symmetry == SymmetryClass::Neither) {
    r.degenerate = true;
    r.symmetry_u3 = symmetry_class(s.mesh, u3);
    r.beta_u3 = nodal_domains(s.mesh, u3).beta_u2;
    const auto map = reflection(s.mesh);
    const double even = sector_minimum(s, map, {u2, u3}, 1);
    const double odd = sector_minimum(s, map, {u2, u3}, -1);
    r.resolved = even <= odd ? SymmetryClass::Symmetric : SymmetryClass::Antisymmetric;
  }
  return r;
}

std::vector<SweepRecord> sweep_beta(const Angle& ell, std::vector<Angle> grid, const Discretization& d) {
  GammaParams{ell, Angle()}.validate();
  const Angle bmax = (kTwoPi - ell) / 4;
  for (const auto& b : grid) {
    if (b < Angle() || b > bmax) throw DomainError("grid value " + b.to_string() + " outside [0, (2pi - l)/4]");
  }
  std::sort(grid.begin(), grid.end());
  std::vector<BoundaryPartition> parts;
  for (const auto& b : grid) parts.push_back(make_gamma({ell, b}));
  const Discretization shared = with_aligned_nodes(d, parts);
  std::vector<SweepRecord> out(grid.size());
  parallel_for(grid.size(), d.threads, [&](std::size_t i) {
    try {
      out[i] = evaluate_gamma(ell, grid[i], shared);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep failed at beta = " + grid[i].to_string() + ": " + e.what());
    }
  });
  return out;
}

std::size_t argmin_lambda2(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw DomainError("empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].lambda2 < records[best].lambda2) best = i;
  }
  return best;
}

std::size_t argmax_lambda1(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw DomainError("empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].lambda1 > records[best].lambda1) best = i;
  }
  return best;
}

std::vector<std::size_t> lambda1_decreases(const std::vector<SweepRecord>& records, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    if (records[i + 1].lambda1 < records[i].lambda1 - tol) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> continuity_jumps(const std::vector<SweepRecord>& records, double factor) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double db = records[i + 1].beta.radians() - records[i].beta.radians();
    if (!(db > 0)) continue;
    slopes.push_back(std::abs(records[i + 1].lambda1 - records[i].lambda1) / db);
    slopes.push_back(std::abs(records[i + 1].lambda2 - records[i].lambda2) / db);
    slopes.push_back(std::abs(records[i + 1].lambda3 - records[i].lambda3) / db);
  }
  std::vector<std::size_t> out;
  if (slopes.empty()) return out;
  std::nth_element(slopes.begin(), slopes.begin() + static_cast<std::ptrdiff_t>(slopes.size() / 2), slopes.end());
  const double c = factor * std::max(slopes[slopes.size() / 2], 1e-12);
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double db = records[i + 1].beta.radians() - records[i].beta.radians();
    const double jump = std::max({std::abs(records[i + 1].lambda1 - records[i].lambda1),
                                  std::abs(records[i + 1].lambda2 - records[i].lambda2),
                                  std::abs(records[i + 1].lambda3 - records[i].lambda3)});
    if (jump > c * db) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------- beta_c

BetaCResult find_beta_c(const Angle& ell, const Angle& lo, const Angle& hi, double tol_beta, const Discretization& d) {
  if (!(tol_beta > 0)) throw DomainError("tol_beta must be positive");
  const Discretization shared = with_aligned_nodes(d, {make_gamma({ell, lo}), make_gamma({ell, hi})});
  BetaCResult out;
  const SweepRecord r_lo = evaluate_gamma(ell, lo, shared);
  const SweepRecord r_hi = evaluate_gamma(ell, hi, shared);
  out.evaluations = 2;
  out.class_lo = r_lo.resolved;
  out.class_hi = r_hi.resolved;
  out.gap_lo = r_lo.gap;
  out.gap_hi = r_hi.gap;
  if (out.class_lo == out.class_hi) {
    throw DomainError(std::string("no symmetry flip in bracket: both ends are ") + to_string(out.class_lo));
  }
  Angle a = lo, b = hi;
  while (abs_diff(a, b).radians() > tol_beta) {
    const Angle mid = (a + b) / 2;
    const SweepRecord r = evaluate_gamma(ell, mid, shared);
    ++out.evaluations;
    if (r.resolved == out.class_lo) {
      a = mid;
    } else {
      b = mid;
    }
  }
  out.lo = a;
  out.hi = b;
  out.beta_c = (a + b) / 2;
  out.gap = evaluate_gamma(ell, out.beta_c, shared).gap;
  ++out.evaluations;
  return out;
}

// ---------------------------------------------------------------- scans

std::size_t ScanReport::violations() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const ScanRecord& r) { return r.violation; }));
}

double estimate_tolerance(const Angle& ell, const Discretization& d) {
  Discretization dd = d;
  dd.k = 3;
  double worst = 0;
  for (const auto& p : {make_gamma({ell, Angle()}), make_gamma({ell, (kTwoPi - ell) / 4})}) {
    std::array<std::vector<double>, 3> lam;
    for (int level = 0; level < 3; ++level) {
      lam[level] = solve_partition(p, refined(dd, 1 << level)).result.eigenvalues;
    }
    for (int i = 0; i < 3; ++i) worst = std::max(worst, richardson_error(lam[0][i], lam[1][i], lam[2][i]));
  }
  return 2.0 * worst;
}

ScanReport minimizer_scan(const Angle& ell, const ScanOptions& opts, const Discretization& d,
                          const std::vector<Angle>& baseline_grid) {
  if (opts.samples < 1) throw DomainError("samples must be >= 1");
  GammaParams{ell, Angle()}.validate();
  ScanReport report;
  report.tol_lambda = opts.tol_lambda >= 0 ? opts.tol_lambda : estimate_tolerance(ell, d);
  const double tol = report.tol_lambda;
  const Angle bmax = (kTwoPi - ell) / 4;
  const Angle half_ell = ell / 2;
  const Angle half_gap = (kTwoPi - ell) / 2;

  const auto grid = baseline_grid.empty() ? default_beta_grid(ell, 16) : baseline_grid;
  const auto sweep = sweep_beta(ell, grid, d);
  const double baseline = sweep[argmin_lambda2(sweep)].lambda2;

  struct Sample {
    std::string label;
    Angle a, b, rot;
  };
  std::vector<Sample> samples{
      {"uniform 2-partition", half_ell, half_gap, Angle()},
      {"one arc", Angle(), half_gap, Angle()},
      {"equal arcs, unequal gaps", half_ell, lattice(to_lattice(half_gap.radians() / 2, opts.lattice_den), opts.lattice_den), Angle()},
      {"touching arcs", ell / 4, Angle(), Angle()},
  };
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < opts.samples; ++i) {
    const double x = unit(rng), y = unit(rng), t = unit(rng);
    Angle a = lattice(to_lattice(std::min(x, 1 - x) * ell.radians(), opts.lattice_den), opts.lattice_den);
    Angle b = lattice(to_lattice(std::min(y, 1 - y) * (kTwoPi - ell).radians(), opts.lattice_den), opts.lattice_den);
    if (a > half_ell) a = half_ell;
    if (b > half_gap) b = half_gap;
    samples.push_back({"random " + std::to_string(i), a, b,
                       lattice(to_lattice(t * kTwoPiD, opts.lattice_den), opts.lattice_den)});
  }

  std::vector<std::vector<ScanRecord>> per(samples.size());
  parallel_for(samples.size(), d.threads, [&](std::size_t i) {
    const auto& s = samples[i];
    const auto p = make_two_component(s.a, s.b, ell).rotated(s.rot);
    Discretization dd = d;
    dd.k = std::max(3, d.k);
    const Solution sol = solve_partition(p, dd);
    const double l2 = sol.result.eigenvalues[1];
    auto r1 = make_record("lambda2 >= min over Gamma(beta)", s.label, p, l2, baseline, l2 - baseline, tol);
    r1.a = s.a;
    r1.gap_b = s.b;
    const NodalReport rep = nodal_domains(sol.mesh, sol.vertex_values(1));
    r1.beta_u2 = rep.beta_u2;
    per[i].push_back(r1);
    if (rep.domain_count != 2) {
      auto rc = make_record("second eigenfunction has two nodal domains", s.label, p, rep.domain_count, 2,
                            -std::abs(rep.domain_count - 2.0), 0.0);
      rc.beta_u2 = rep.beta_u2;
      per[i].push_back(rc);
      return;
    }
    Angle beta;
    if (rep.beta_u2 >= bmax.radians() - 1e-9) {
      beta = bmax;
    } else if (rep.beta_u2 <= 1e-9) {
      beta = Angle();
    } else {
      beta = Angle::from_radians(rep.beta_u2);
    }
    const Solution ref = solve_partition(make_gamma({ell, beta}), dd);
    const double lref = ref.result.eigenvalues[1];
    auto r2 = make_record("lambda2 >= lambda2(Gamma(beta_u2))", s.label, p, l2, lref, l2 - lref, tol);
    r2.a = s.a;
    r2.gap_b = s.b;
    r2.beta_u2 = rep.beta_u2;
    per[i].push_back(r2);
  });
  for (auto& v : per) report.records.insert(report.records.end(), v.begin(), v.end());
  return report;
}

RearrangementCheck check_rearrangement(const Angle& ell, const Angle& a, const Angle& gap_b, int nodes,
                                       const Discretization& d) {
  const auto ctx = prepare_rearrangement(ell, nodes, d);
  return run_rearrangement(ctx, ell, a, gap_b);
}

ScanReport maximizer_scan(int n, const Angle& ell, const ScanOptions& opts, const Discretization& d) {
  if (n < 1 || n > 6) throw DomainError("maximizer scan supports n in 1..6");
  if (opts.samples < 1) throw DomainError("samples must be >= 1");
  GammaParams{ell, Angle()}.validate();
  ScanReport report;
  report.tol_lambda = opts.tol_lambda >= 0 ? opts.tol_lambda : estimate_tolerance(ell, d);
  const double tol = report.tol_lambda;
  Discretization d1 = d;
  d1.k = 1;

  const auto gamma_n = make_uniform(n, ell);
  const double baseline = solve_partition(gamma_n, d1).result.eigenvalues[0];

  std::vector<std::pair<std::string, BoundaryPartition>> samples;
  samples.emplace_back("uniform " + std::to_string(n) + "-partition", gamma_n);
  samples.emplace_back("rotated uniform partition", gamma_n.rotated(lattice(1, opts.lattice_den)));
  for (int m = 1; m < n; ++m) samples.emplace_back("uniform " + std::to_string(m) + "-partition", make_uniform(m, ell));
  std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(n));
  std::uniform_int_distribution<int> comps(1, n);
  for (int i = 0; i < opts.samples; ++i) {
    const int c = comps(rng);
    samples.emplace_back("random " + std::to_string(i), random_partition(rng, c, ell, opts.lattice_den));
  }

  std::vector<ScanRecord> recs(samples.size());
  parallel_for(samples.size(), d.threads, [&](std::size_t i) {
    const double l1 = solve_partition(samples[i].second, d1).result.eigenvalues[0];
    recs[i] = make_record("lambda1 <= lambda1(uniform n-partition)", samples[i].first, samples[i].second, l1, baseline,
                          baseline - l1, tol);
    recs[i].n = n;
  });
  report.records = std::move(recs);

  if (n == 2) {
    const auto ctx = prepare_rearrangement(ell, opts.rearrangement_nodes, d);
    const int nodes = opts.rearrangement_nodes;
    const Angle step = Angle::pi_times(2, nodes);
    const auto max_ia = static_cast<int>(std::floor((ell / 4).radians() / step.radians() + 1e-9));
    const auto max_ib = static_cast<int>(std::floor(((kTwoPi - ell) / 4).radians() / step.radians() + 1e-9));
    std::vector<std::pair<int, int>> shifts{{0, 0}};
    if (max_ia >= 2) shifts.emplace_back(2, 0);
    if (max_ib >= 2) shifts.emplace_back(0, 2);
    if (max_ia >= 1 && max_ib >= 1) shifts.emplace_back(1, 1);
    shifts.emplace_back(max_ia, max_ia % 2 == max_ib % 2 ? max_ib : max_ib - 1);
    std::uniform_int_distribution<int> pick_a(0, std::max(0, max_ia));
    std::uniform_int_distribution<int> pick_b(0, std::max(0, max_ib));
    for (int i = 0; i < opts.samples; ++i) {
      const int ia = pick_a(rng);
      int ib = pick_b(rng);
      if ((ia - ib) % 2 != 0) ib = ib > 0 ? ib - 1 : ib + 1;
      if (ib > max_ib) ib -= 2;
      if (ib < 0) continue;
      shifts.emplace_back(ia, ib);
    }
    std::vector<std::vector<ScanRecord>> per(shifts.size());
    parallel_for(shifts.size(), d.threads, [&](std::size_t i) {
      const auto [ia, ib] = shifts[i];
      const Angle a = ell / 2 - step * (2 * ia);
      const Angle b = (kTwoPi - ell) / 2 - step * (2 * ib);
      const auto c = run_rearrangement(ctx, ell, a, b);
      const auto target = make_two_component(a, b, ell);
      const std::string label = "shift " + std::to_string(ia) + "," + std::to_string(ib);
      auto bound = make_record("lambda1(target) <= Rayleigh(rearranged)", label, target, c.lambda1_target,
                               c.rayleigh_rearranged, c.rayleigh_rearranged - c.lambda1_target, 1e-9);
      if (!c.vanishes_on_target) bound.violation = true;
      auto keep = make_record("Rayleigh(rearranged) == Rayleigh(u)", label, target, c.rayleigh_rearranged, c.rayleigh_u,
                              -std::abs(c.rayleigh_rearranged - c.rayleigh_u), 1e-10);
      for (auto* r : {&bound, &keep}) {
        r->a = a;
        r->gap_b = b;
        r->n = 2;
      }
      per[i] = {bound, keep};
    });
    for (auto& v : per) report.records.insert(report.records.end(), v.begin(), v.end());
  }
  return report;
}

// ---------------------------------------------------------------- smearing

SmearReport smearing_limit(const Angle& ell, const std::vector<int>& orders, const Discretization& d) {
  GammaParams{ell, Angle()}.validate();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1 || orders[i] > 64) throw DomainError("orders must lie in 1..64");
    if (i > 0 && orders[i] <= orders[i - 1]) throw DomainError("orders must be increasing");
  }
  SmearReport out;
  const double dirichlet = dirichlet_disk_eigenvalue_1();
  std::vector<int> valid;
  for (int n : orders) {
    const double shortest = std::min(ell.radians(), (kTwoPi - ell).radians()) / n;
    if (shortest < 4 * d.h) {
      out.stopped_early = true;
      break;
    }
    valid.push_back(n);
  }
  Discretization d1 = d;
  d1.k = 1;
  std::vector<ScanRecord> recs(valid.size());
  parallel_for(valid.size(), d.threads, [&](std::size_t i) {
    const auto p = make_uniform(valid[i], ell);
    const double l1 = solve_partition(p, d1).result.eigenvalues[0];
    recs[i] = make_record("lambda1(uniform n-partition) <= j01^2", "n = " + std::to_string(valid[i]), p, l1, dirichlet,
                          dirichlet - l1, 0.0);
    recs[i].violation = false;  // the bound is checked by the caller with its own tolerance
    recs[i].n = valid[i];
  });
  out.records = std::move(recs);
  out.last_valid_n = valid.empty() ? 0 : valid.back();
  for (std::size_t i = 1; i < out.records.size(); ++i) {
    if (!(out.records[i].value > out.records[i - 1].value)) out.strictly_increasing = false;
    if (!(std::abs(out.records[i].margin) < std::abs(out.records[i - 1].margin))) out.gap_shrinking = false;
  }
  return out;
}

// ---------------------------------------------------------------- audit

std::size_t AuditReport::findings() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.closed && e.closed_after_refinement; }));
}

AuditReport nodal_line_audit(const Angle& ell, const std::vector<Angle>& grid, const Discretization& d,
                             const std::vector<SweepRecord>* sweep) {
  std::vector<SweepRecord> own;
  if (!sweep) {
    own = sweep_beta(ell, grid, d);
    sweep = &own;
  }
  AuditReport out;
  for (const auto& r : *sweep) {
    AuditEntry e;
    e.beta = r.beta;
    e.endpoints = r.endpoints;
    e.closed = r.is_closed || r.endpoints.empty();
    if (e.closed) {
      const auto again = evaluate_gamma(ell, r.beta, refined(d, 2));
      e.closed_after_refinement = again.is_closed || again.endpoints.empty();
    }
    out.entries.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------- convergence

ConvergenceReport convergence_study(const BoundaryPartition& p, const std::vector<double>& h_list,
                                    const Discretization& d) {
  if (h_list.empty()) throw DomainError("empty h list");
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) throw DomainError("h list must be strictly decreasing");
  }
  ConvergenceReport out;
  for (double h : h_list) {
    Discretization dd = d;
    dd.h = h;
    dd.angular_nodes = 0;
    const Solution s = solve_partition(p, dd);
    out.h.push_back(h);
    out.vertices.push_back(s.mesh.vertices.size());
    out.eigenvalues.push_back(s.result.eigenvalues);
  }
  const std::size_t n = out.h.size();
  const std::size_t k = out.eigenvalues.front().size();
  for (std::size_t i = 0; i < k; ++i) {
    if (n >= 3) {
      const double l0 = out.eigenvalues[n - 3][i], l1 = out.eigenvalues[n - 2][i], l2 = out.eigenvalues[n - 1][i];
      const double r = out.h[n - 2] / out.h[n - 1];
      const double d1 = l0 - l1, d2 = l1 - l2;
      double order = std::numeric_limits<double>::quiet_NaN();
      double limit = l2;
      if (d1 * d2 > 0) {
        order = std::log(d1 / d2) / std::log(r);
        limit = l2 - d2 / (std::pow(r, order) - 1.0);
      }
      out.order.push_back(order);
      out.extrapolated.push_back(limit);
    } else if (n == 2) {
      const double r = out.h[0] / out.h[1];
      const double l1 = out.eigenvalues[0][i], l2 = out.eigenvalues[1][i];
      out.order.push_back(std::numeric_limits<double>::quiet_NaN());
      out.extrapolated.push_back(l2 - (l1 - l2) / (r * r - 1.0));
    } else {
      out.order.push_back(std::numeric_limits<double>::quiet_NaN());
      out.extrapolated.push_back(out.eigenvalues[0][i]);
    }
  }
  if (p.is_full_circle()) {
    const double a = dirichlet_disk_eigenvalue_1(), b = dirichlet_disk_eigenvalue_2();
    out.reference = {a, b, b};
    const double j21 = bessel_zero(2.0, 1);
    out.reference.push_back(j21 * j21);
  } else if (p.is_empty()) {
    const double a = neumann_disk_first_nonzero_eigenvalue();
    const double j21 = bessel_derivative_zero(2.0, 1);
    out.reference = {0.0, a, a, j21 * j21};
  }
  if (out.reference.size() > k) out.reference.resize(k);
  return out;
}

// ---------------------------------------------------------------- CSV

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "beta,beta_over_pi,lambda1,lambda2,lambda3,symmetry_u2,beta_u2,gap,h,residual1,residual2,residual3,"
         "domain_count,endpoints,is_closed,touches_junction,degenerate,symmetry_u3,beta_u3,resolved,vertices\n";
  for (const auto& r : records) {
    std::string ends;
    for (std::size_t i = 0; i < r.endpoints.size(); ++i) ends += (i ? ";" : "") + fmt(r.endpoints[i]);
    out << fmt(r.beta.radians()) << ',' << fmt(r.beta.radians() / std::numbers::pi) << ',' << fmt(r.lambda1) << ','
        << fmt(r.lambda2) << ',' << fmt(r.lambda3) << ',' << to_string(r.symmetry) << ',' << fmt(r.beta_u2) << ','
        << fmt(r.gap) << ',' << fmt(r.h) << ',' << fmt(r.residuals[0]) << ',' << fmt(r.residuals[1]) << ','
        << fmt(r.residuals[2]) << ',' << r.domain_count << ',' << ends << ',' << r.is_closed << ','
        << r.touches_junction << ',' << r.degenerate << ',' << to_string(r.symmetry_u3) << ',' << fmt(r.beta_u3)
        << ',' << to_string(r.resolved) << ',' << r.vertices << '\n';
  }
}

void write_scan_csv(const std::vector<ScanRecord>& records, std::ostream& out) {
  out << "check,label,n,a,gap_b,components,value,baseline,margin,tolerance,violation,beta_u2,partition\n";
  for (const auto& r : records) {
    std::string arcs;
    for (const auto& a : r.partition.arcs()) {
      if (!arcs.empty()) arcs += ';';
      arcs += fmt(a.start.radians()) + ' ' + fmt(a.length.radians());
    }
    out << '"' << r.check << "\"," << '"' << r.label << "\"," << r.n << ',' << fmt(r.a.radians()) << ','
        << fmt(r.gap_b.radians()) << ',' << r.partition.component_count() << ',' << fmt(r.value) << ','
        << fmt(r.baseline) << ',' << fmt(r.margin) << ',' << fmt(r.tolerance) << ',' << r.violation << ','
        << fmt(r.beta_u2) << ',' << arcs << '\n';
  }
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  const std::size_t k = report.eigenvalues.empty() ? 0 : report.eigenvalues.front().size();
  out << "row,h,vertices";
  for (std::size_t i = 0; i < k; ++i) out << ",lambda" << i + 1;
  out << '\n';
  for (std::size_t j = 0; j < report.h.size(); ++j) {
    out << "level," << fmt(report.h[j]) << ',' << report.vertices[j];
    for (double l : report.eigenvalues[j]) out << ',' << fmt(l);
    out << '\n';
  }
  out << "extrapolated,0,0";
  for (double l : report.extrapolated) out << ',' << fmt(l);
  out << "\norder,,";
  for (double o : report.order) out << ',' << fmt(o);
  out << '\n';
  if (!report.reference.empty()) {
    out << "reference,0,0";
    for (double l : report.reference) out << ',' << fmt(l);
    out << '\n';
  }
}

void write_audit_csv(const AuditReport& report, std::ostream& out) {
  out << "beta,beta_over_pi,endpoint_count,endpoints,closed,closed_after_refinement\n";
  for (const auto& e : report.entries) {
    std::string ends;
    for (std::size_t i = 0; i < e.endpoints.size(); ++i) ends += (i ? ";" : "") + fmt(e.endpoints[i]);
    out << fmt(e.beta.radians()) << ',' << fmt(e.beta.radians() / std::numbers::pi) << ',' << e.endpoints.size() << ','
        << ends << ',' << e.closed << ',' << e.closed_after_refinement << '\n';
  }
}

// ---------------------------------------------------------------- SVG

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

void line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, std::ostream& out) {
  const double w = 720, h = 440, ml = 70, mr = 150, mt = 40, mb = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto sy = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                ml, mt, w - ml - mr, h - mt - mb);
  out << buf;
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5, yv = y0 + (y1 - y0) * i / 5;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.4g</text>\n", sx(xv), h - mb + 18, xv);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.4g</text>\n", ml - 6, sy(yv) + 4, yv);
    out << buf;
  }
  out << "<text x=\"" << ml + (w - ml - mr) / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << mt + (h - mt - mb) / 2 << "\" transform=\"rotate(-90 16 " << mt + (h - mt - mb) / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(x), sy(y));
      out << buf;
    }
    out << "\"/>\n";
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\"/>\n", sx(x), sy(y), s.color.c_str());
      out << buf;
    }
    const double ly = mt + 16 + 20.0 * static_cast<double>(k);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\">",
                  w - mr + 12, ly, w - mr + 36, ly, s.color.c_str(), w - mr + 42, ly + 4);
    out << buf << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_sweep_svg(const std::vector<SweepRecord>& records, std::ostream& out) {
  std::vector<Series> s{{"lambda1", "#1f77b4", {}}, {"lambda2", "#d62728", {}}, {"lambda3", "#2ca02c", {}}};
  for (const auto& r : records) {
    const double x = r.beta.radians();
    s[0].points.emplace_back(x, r.lambda1);
    s[1].points.emplace_back(x, r.lambda2);
    s[2].points.emplace_back(x, r.lambda3);
  }
  line_plot(s, "Eigenvalues of the two-arc family", "beta (rad)", "eigenvalue", out);
}

void write_scan_svg(const std::vector<ScanRecord>& records, const std::string& title, std::ostream& out) {
  std::vector<Series> s{{"value", "#1f77b4", {}}, {"baseline", "#7f7f7f", {}}};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double x = records[i].n > 0 && title.find("smear") != std::string::npos ? records[i].n : static_cast<double>(i);
    s[0].points.emplace_back(x, records[i].value);
    s[1].points.emplace_back(x, records[i].baseline);
  }
  line_plot(s, title, title.find("smear") != std::string::npos ? "n" : "record", "eigenvalue", out);
}

void write_convergence_svg(const ConvergenceReport& report, std::ostream& out) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  std::vector<Series> s;
  const std::size_t k = report.eigenvalues.empty() ? 0 : report.eigenvalues.front().size();
  for (std::size_t i = 0; i < k; ++i) {
    Series one{"lambda" + std::to_string(i + 1), colors[i % 6], {}};
    for (std::size_t j = 0; j < report.h.size(); ++j) {
      const double ref = i < report.reference.size() ? report.reference[i] : report.extrapolated[i];
      const double err = std::abs(report.eigenvalues[j][i] - ref);
      if (err > 0) one.points.emplace_back(std::log10(report.h[j]), std::log10(err));
    }
    s.push_back(one);
  }
  line_plot(s, "Eigenvalue error against mesh size", "log10 h", "log10 |error|", out);
}

void write_nodal_svg(const BoundaryPartition& p, const std::vector<std::array<Point, 2>>& segments, std::ostream& out) {
  const double size = 440, c = size / 2, r = 200;
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" fill=\"none\" stroke=\"#888\" stroke-width=\"2\"/>\n", c, c, r);
  out << buf;
  std::vector<Arc> arcs = p.arcs();
  if (p.is_full_circle()) arcs = {{Angle(), kTwoPi}};
  for (const auto& a : arcs) {
    const double t0 = a.start.radians(), len = a.length.radians();
    const int steps = std::max(2, static_cast<int>(len / 0.02));
    out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"5\" points=\"";
    for (int i = 0; i <= steps; ++i) {
      const double t = t0 + len * i / steps;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", c + r * std::cos(t), c - r * std::sin(t));
      out << buf;
    }
    out << "\"/>\n";
  }
  for (const auto& s : segments) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
                  c + r * s[0].x, c - r * s[0].y, c + r * s[1].x, c - r * s[1].y);
    out << buf;
  }
  out << "</svg>\n";
}

}  // namespace zaremba
