#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "zaremba/bessel.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/experiments.hpp"

#ifndef ZAREMBA_VERSION
#define ZAREMBA_VERSION "0.0.0"
#endif
#ifndef ZAREMBA_GIT_REVISION
#define ZAREMBA_GIT_REVISION "unknown"
#endif

namespace zaremba::cli {

namespace fs = std::filesystem;

std::string version_string() { return std::string(ZAREMBA_VERSION) + " (" + ZAREMBA_GIT_REVISION + ")"; }

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"solve", "sweep", "beta-c", "minimize", "maximize", "smear", "nodal-audit", "converge"};
  return c;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> k{
      "command",      "family",          "ell",         "beta",       "n",           "a",
      "gap-b",        "arcs",            "h",           "grading-levels", "grading-ratio", "angular-nodes",
      "junctions-dirichlet", "k",        "tol",         "seed",       "threads",     "samples",
      "grid-den",     "grid-max",        "bracket-lo",  "bracket-hi", "tol-beta",    "n-max",
      "orders",       "h-list",          "tol-lambda",  "lattice-den", "rearrangement-nodes", "output",
      "export-mesh",  "export-matrices", "version"};
  return k;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

Angle to_angle(const std::string& key, const std::string& v) {
  try {
    return parse_angle(v);
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<int> parse_orders(const RunConfig& c) {
  std::vector<int> out;
  if (c.orders.empty()) {
    for (int n = 1; n <= c.n_max; ++n) out.push_back(n);
    return out;
  }
  for (const auto& s : split(c.orders, ',')) out.push_back(static_cast<int>(to_int("orders", s)));
  return out;
}

std::vector<double> parse_h_list(const RunConfig& c) {
  std::vector<double> out;
  for (const auto& s : split(c.h_list, ',')) out.push_back(to_double("h-list", s));
  return out;
}

Angle bracket_value(const RunConfig& c, const std::string& key, const std::string& v) {
  if (v == "max") return (kTwoPi - c.ell) / 4;
  return to_angle(key, v);
}

}  // namespace

BoundaryPartition RunConfig::partition() const {
  if (family == "gamma") return make_gamma({ell, beta});
  if (family == "uniform") return make_uniform(n, ell);
  if (family == "two") return make_two_component(a, gap_b, ell);
  if (family == "dirichlet") return BoundaryPartition::all_dirichlet();
  if (family == "neumann") return BoundaryPartition::all_neumann();
  if (family == "arcs") {
    std::vector<Arc> list;
    for (const auto& item : split(arcs, ';')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("arcs: expected start:length, got '" + item + "'");
      list.push_back({to_angle("arcs", trim(item.substr(0, colon))), to_angle("arcs", trim(item.substr(colon + 1)))});
    }
    return BoundaryPartition::from_arcs(list);
  }
  throw ConfigError("family: unknown value '" + family + "'");
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["command"] = command;
  m["family"] = family;
  m["ell"] = ell.to_string();
  m["beta"] = beta.to_string();
  m["n"] = std::to_string(n);
  m["a"] = a.to_string();
  m["gap-b"] = gap_b.to_string();
  m["arcs"] = arcs;
  m["h"] = fmt(h);
  m["grading-levels"] = std::to_string(grading_levels);
  m["grading-ratio"] = fmt(grading_ratio);
  m["angular-nodes"] = std::to_string(angular_nodes);
  m["junctions-dirichlet"] = junctions_dirichlet ? "true" : "false";
  m["k"] = std::to_string(k);
  m["tol"] = fmt(tol);
  m["seed"] = std::to_string(seed);
  m["threads"] = std::to_string(threads);
  m["samples"] = std::to_string(samples);
  m["grid-den"] = std::to_string(grid_den);
  m["grid-max"] = std::to_string(grid_max);
  m["bracket-lo"] = bracket_lo;
  m["bracket-hi"] = bracket_hi;
  m["tol-beta"] = fmt(tol_beta);
  m["n-max"] = std::to_string(n_max);
  m["orders"] = orders;
  m["h-list"] = h_list;
  m["tol-lambda"] = fmt(tol_lambda);
  m["lattice-den"] = std::to_string(lattice_den);
  m["rearrangement-nodes"] = std::to_string(rearrangement_nodes);
  m["output"] = output;
  m["export-mesh"] = export_mesh ? "true" : "false";
  m["export-matrices"] = export_matrices ? "true" : "false";
  return m;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  const auto& keys = known_keys();
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig make_config(const std::map<std::string, std::string>& values) {
  RunConfig c;
  const auto& keys = known_keys();
  for (const auto& [key, v] : values) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  if (auto v = get("command")) c.command = *v;
  if (auto v = get("family")) c.family = *v;
  if (auto v = get("ell")) c.ell = to_angle("ell", *v);
  if (auto v = get("beta")) c.beta = to_angle("beta", *v);
  if (auto v = get("n")) c.n = static_cast<int>(to_int("n", *v));
  if (auto v = get("a")) c.a = to_angle("a", *v);
  if (auto v = get("gap-b")) c.gap_b = to_angle("gap-b", *v);
  if (auto v = get("arcs")) c.arcs = *v;
  if (auto v = get("h")) c.h = to_double("h", *v);
  if (auto v = get("grading-levels")) c.grading_levels = static_cast<int>(to_int("grading-levels", *v));
  if (auto v = get("grading-ratio")) c.grading_ratio = to_double("grading-ratio", *v);
  if (auto v = get("angular-nodes")) c.angular_nodes = static_cast<int>(to_int("angular-nodes", *v));
  if (auto v = get("junctions-dirichlet")) c.junctions_dirichlet = to_bool("junctions-dirichlet", *v);
  if (auto v = get("k")) c.k = static_cast<int>(to_int("k", *v));
  if (auto v = get("tol")) c.tol = to_double("tol", *v);
  if (auto v = get("seed")) {
    const long long s = to_int("seed", *v);
    require(s >= 0, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("threads")) c.threads = static_cast<int>(to_int("threads", *v));
  if (auto v = get("samples")) c.samples = static_cast<int>(to_int("samples", *v));
  if (auto v = get("grid-den")) c.grid_den = static_cast<int>(to_int("grid-den", *v));
  if (auto v = get("grid-max")) c.grid_max = static_cast<int>(to_int("grid-max", *v));
  if (auto v = get("bracket-lo")) c.bracket_lo = *v;
  if (auto v = get("bracket-hi")) c.bracket_hi = *v;
  if (auto v = get("tol-beta")) c.tol_beta = to_double("tol-beta", *v);
  if (auto v = get("n-max")) c.n_max = static_cast<int>(to_int("n-max", *v));
  if (auto v = get("orders")) c.orders = *v;
  if (auto v = get("h-list")) c.h_list = *v;
  if (auto v = get("tol-lambda")) c.tol_lambda = to_double("tol-lambda", *v);
  if (auto v = get("lattice-den")) c.lattice_den = static_cast<int>(to_int("lattice-den", *v));
  if (auto v = get("rearrangement-nodes")) c.rearrangement_nodes = static_cast<int>(to_int("rearrangement-nodes", *v));
  if (auto v = get("output")) c.output = *v;
  if (auto v = get("export-mesh")) c.export_mesh = to_bool("export-mesh", *v);
  if (auto v = get("export-matrices")) c.export_matrices = to_bool("export-matrices", *v);

  const auto& cmds = commands();
  require(std::find(cmds.begin(), cmds.end(), c.command) != cmds.end(), "command: unknown value '" + c.command + "'");
  require(c.ell > Angle() && c.ell < kTwoPi, "ell must lie in (0, 2pi)");
  require(c.h > 0 && c.h <= 1, "h must lie in (0, 1]");
  require(c.grading_levels >= 0 && c.grading_levels <= 12, "grading-levels must lie in [0, 12]");
  require(c.grading_ratio > 0 && c.grading_ratio < 1, "grading-ratio must lie in (0, 1)");
  require(c.angular_nodes >= 0 && c.angular_nodes % 4 == 0, "angular-nodes must be 0 or a positive multiple of 4");
  require(c.k >= 1 && c.k <= 64, "k must lie in [1, 64]");
  require(c.tol >= 1e-12 && c.tol <= 1e-4, "tol must lie in [1e-12, 1e-4]");
  require(c.threads >= 0, "threads must be nonnegative");
  require(c.samples >= 1, "samples must be >= 1");
  require(c.grid_den >= 1 && c.grid_max >= 0, "grid-den must be >= 1 and grid-max >= 0");
  require(c.tol_beta > 0, "tol-beta must be positive");
  require(c.n_max >= 1 && c.n_max <= 64, "n-max must lie in [1, 64]");
  require(c.lattice_den >= 1, "lattice-den must be >= 1");
  require(c.rearrangement_nodes >= 8 && c.rearrangement_nodes % 4 == 0, "rearrangement-nodes must be a multiple of 4, >= 8");
  require(c.output.size() > 0, "output must be nonempty");
  if (c.family == "uniform") require(c.n >= 1 && c.n <= 64, "n must lie in [1, 64]");
  if (c.command == "maximize") require(c.n >= 1 && c.n <= 6, "maximize needs n in [1, 6]");
  if (c.command == "sweep" || c.command == "nodal-audit") {
    require(Angle::pi_times(c.grid_max, c.grid_den) <= (kTwoPi - c.ell) / 4, "grid exceeds (2pi - ell)/4");
  }
  for (int o : parse_orders(c)) require(o >= 1 && o <= 64, "orders must lie in [1, 64]");
  const auto hl = parse_h_list(c);
  require(!hl.empty(), "h-list must not be empty");
  for (std::size_t i = 0; i < hl.size(); ++i) {
    require(hl[i] > 0 && hl[i] <= 1, "h-list values must lie in (0, 1]");
    if (i > 0) require(hl[i] < hl[i - 1], "h-list must be strictly decreasing");
  }
  bracket_value(c, "bracket-lo", c.bracket_lo);
  bracket_value(c, "bracket-hi", c.bracket_hi);
  try {
    c.partition();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("partition: ") + e.what());
  }
  return c;
}

namespace {

Discretization discretization(const RunConfig& c) {
  Discretization d;
  d.h = c.h;
  d.grading_levels = c.grading_levels;
  d.grading_ratio = c.grading_ratio;
  d.angular_nodes = c.angular_nodes;
  d.junctions_dirichlet = c.junctions_dirichlet;
  d.k = c.k;
  d.tol = c.tol;
  d.solver.seed = c.seed;
  d.threads = c.threads;
  return d;
}

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions s;
  s.samples = c.samples;
  s.seed = c.seed;
  s.tol_lambda = c.tol_lambda;
  s.lattice_den = c.lattice_den;
  s.rearrangement_nodes = c.rearrangement_nodes;
  return s;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_manifest(const RunConfig& c, const fs::path& dir) {
  auto f = open_out(dir / "manifest.txt");
  f << "# resolved configuration; rerun with: zaremba rerun " << (dir / "manifest.txt").string() << "\n";
  f << "version = " << version_string() << "\n";
  for (const auto& [k, v] : c.to_map()) f << k << " = " << v << "\n";
}

int cmd_solve(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const auto p = c.partition();
  Discretization d = discretization(c);
  const Solution s = solve_partition(p, d);
  out << "partition: " << p.component_count() << " Dirichlet component(s), length " << dirichlet_measure(p).to_string()
      << "\nmesh: " << s.mesh.vertices.size() << " vertices, " << s.mesh.triangles.size() << " triangles, "
      << s.pair.dofs() << " free DOFs\n";
  auto csv = open_out(dir / "eigenvalues.csv");
  csv << "index,lambda,residual\n";
  char buf[160];
  for (std::size_t i = 0; i < s.result.eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof buf, "lambda%zu = %.12f  (residual %.2e)\n", i + 1, s.result.eigenvalues[i], s.result.residuals[i]);
    out << buf;
    csv << i + 1 << ',' << fmt(s.result.eigenvalues[i]) << ',' << fmt(s.result.residuals[i]) << '\n';
  }
  if (c.k >= 2) {
    const auto u2 = s.vertex_values(1);
    const NodalReport rep = nodal_domains(s.mesh, u2);
    std::string cls = "n/a";
    try {
      cls = to_string(symmetry_class(s.mesh, u2));
    } catch (const PreconditionError&) {
    }
    std::snprintf(buf, sizeof buf, "u2: %d nodal domains, beta_u2 = %.6f, %zu boundary endpoint(s), %s\n", rep.domain_count,
                  rep.beta_u2, rep.nodal_endpoints.size(), cls.c_str());
    out << buf;
    auto svg = open_out(dir / "nodal.svg");
    write_nodal_svg(p, rep.nodal_segments, svg);
  }
  if (c.export_mesh) {
    auto f = open_out(dir / "mesh.msh");
    write_msh(s.mesh, f);
  }
  if (c.export_matrices) {
    auto fk = open_out(dir / "K.mtx");
    write_matrix_market(s.pair.stiffness, fk);
    auto fm = open_out(dir / "M.mtx");
    write_matrix_market(s.pair.mass, fm);
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const Discretization d = discretization(c);
  const auto grid = beta_grid(c.grid_den, c.grid_max);
  const auto rec = sweep_beta(c.ell, grid, d);
  {
    auto f = open_out(dir / "sweep.csv");
    write_sweep_csv(rec, f);
    auto g = open_out(dir / "sweep.svg");
    write_sweep_svg(rec, g);
  }
  const double tol = c.tol_lambda >= 0 ? c.tol_lambda : estimate_tolerance(c.ell, d);
  const std::size_t imin = argmin_lambda2(rec);
  const auto drops = lambda1_decreases(rec, tol);
  const auto jumps = continuity_jumps(rec);
  int findings = 0;
  out << rec.size() << " records; tol_lambda = " << fmt(tol) << "\n";
  out << "argmin lambda2 at beta = " << rec[imin].beta.to_string() << " (lambda2 = " << fmt(rec[imin].lambda2) << ")\n";
  const Angle bmax = (kTwoPi - c.ell) / 4;
  if (rec.back().beta == bmax && imin != rec.size() - 1) {
    out << "finding: lambda2 is not minimal at the uniform 2-partition\n";
    ++findings;
  }
  out << "lambda1 decreases beyond tol_lambda: " << drops.size() << "\n";
  findings += static_cast<int>(drops.size());
  for (const auto& r : rec) {
    if (r.is_closed || r.domain_count != 2) {
      out << "finding: beta = " << r.beta.to_string() << " has " << r.domain_count << " nodal domains"
          << (r.is_closed ? " and a closed nodal line" : "") << "\n";
      ++findings;
    }
  }
  out << "continuity flags: " << jumps.size() << "\n";
  return findings ? kExitFindings : kExitOk;
}

int cmd_beta_c(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const Angle lo = bracket_value(c, "bracket-lo", c.bracket_lo);
  const Angle hi = bracket_value(c, "bracket-hi", c.bracket_hi);
  const auto r = find_beta_c(c.ell, lo, hi, c.tol_beta, discretization(c));
  auto f = open_out(dir / "beta_c.csv");
  f << "beta_c,beta_c_over_pi,lo,hi,gap,gap_lo,gap_hi,class_lo,class_hi,evaluations\n";
  f << fmt(r.beta_c.radians()) << ',' << fmt(r.beta_c.radians() / std::numbers::pi) << ',' << fmt(r.lo.radians()) << ','
    << fmt(r.hi.radians()) << ',' << fmt(r.gap) << ',' << fmt(r.gap_lo) << ',' << fmt(r.gap_hi) << ','
    << to_string(r.class_lo) << ',' << to_string(r.class_hi) << ',' << r.evaluations << '\n';
  out << "beta_c = " << fmt(r.beta_c.radians()) << " rad (" << fmt(r.beta_c.radians() / std::numbers::pi)
      << " pi); u2 " << to_string(r.class_lo) << " below, " << to_string(r.class_hi) << " above\n";
  out << "lambda3 - lambda2: " << fmt(r.gap) << " at beta_c, " << fmt(r.gap_lo) << " and " << fmt(r.gap_hi)
      << " at the bracket ends\n";
  return kExitOk;
}

int report_scan(const ScanReport& r, const std::string& name, const fs::path& dir, std::ostream& out) {
  auto f = open_out(dir / (name + ".csv"));
  write_scan_csv(r.records, f);
  auto g = open_out(dir / (name + ".svg"));
  write_scan_svg(r.records, name, g);
  out << r.records.size() << " checks, tol_lambda = " << fmt(r.tol_lambda) << ", violations: " << r.violations() << "\n";
  for (const auto& rec : r.records) {
    if (rec.violation) {
      out << "finding: " << rec.check << " [" << rec.label << "] value " << fmt(rec.value) << " baseline "
          << fmt(rec.baseline) << "\n";
    }
  }
  return r.violations() ? kExitFindings : kExitOk;
}

int cmd_smear(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const Discretization d = discretization(c);
  const auto r = smearing_limit(c.ell, parse_orders(c), d);
  auto f = open_out(dir / "smear.csv");
  write_scan_csv(r.records, f);
  auto g = open_out(dir / "smear.svg");
  write_scan_svg(r.records, "smearing limit", g);
  const double tol = c.tol_lambda >= 0 ? c.tol_lambda : estimate_tolerance(c.ell, d);
  int findings = 0;
  for (const auto& rec : r.records) {
    out << "n = " << rec.n << ": lambda1 = " << fmt(rec.value) << ", gap to j01^2 = " << fmt(rec.margin) << "\n";
    if (rec.margin < -tol) ++findings;
  }
  if (r.stopped_early) out << "stopped: arcs shorter than 4h beyond n = " << r.last_valid_n << "\n";
  if (!r.strictly_increasing) out << "finding: lambda1 not strictly increasing\n", ++findings;
  if (!r.gap_shrinking) out << "finding: gap to j01^2 not shrinking\n", ++findings;
  return findings ? kExitFindings : kExitOk;
}

int cmd_audit(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const Discretization d = discretization(c);
  const auto grid = beta_grid(c.grid_den, c.grid_max);
  const auto r = nodal_line_audit(c.ell, grid, d);
  auto f = open_out(dir / "audit.csv");
  write_audit_csv(r, f);
  for (const auto* b : {&grid.front(), &grid.back()}) {
    std::vector<std::array<Point, 2>> seg;
    evaluate_gamma(c.ell, *b, d, &seg);
    auto g = open_out(dir / (b == &grid.front() ? "nodal_first.svg" : "nodal_last.svg"));
    write_nodal_svg(make_gamma({c.ell, *b}), seg, g);
  }
  std::size_t closed = 0;
  for (const auto& e : r.entries) closed += e.closed;
  out << r.entries.size() << " nodal lines; closed at h: " << closed << "; closed after refinement: " << r.findings()
      << "\n";
  return r.findings() ? kExitFindings : kExitOk;
}

int cmd_converge(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const auto r = convergence_study(c.partition(), parse_h_list(c), discretization(c));
  auto f = open_out(dir / "converge.csv");
  write_convergence_csv(r, f);
  auto g = open_out(dir / "converge.svg");
  write_convergence_svg(r, g);
  char buf[64];
  out << "h          vertices  eigenvalues\n";
  for (std::size_t j = 0; j < r.h.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%-10.5g %-9zu", r.h[j], r.vertices[j]);
    out << buf;
    for (double l : r.eigenvalues[j]) {
      std::snprintf(buf, sizeof buf, " %.10f", l);
      out << buf;
    }
    out << "\n";
  }
  auto row = [&](const char* name, const std::vector<double>& v) {
    std::snprintf(buf, sizeof buf, "%-20s", name);
    out << buf;
    for (double l : v) {
      std::snprintf(buf, sizeof buf, " %.10f", l);
      out << buf;
    }
    out << "\n";
  };
  row("extrapolated", r.extrapolated);
  row("observed order", r.order);
  if (!r.reference.empty()) row("reference", r.reference);
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const fs::path dir(config.output);
    fs::create_directories(dir);
    write_manifest(config, dir);
    const auto& cmd = config.command;
    if (cmd == "solve") return cmd_solve(config, dir, out);
    if (cmd == "sweep") return cmd_sweep(config, dir, out);
    if (cmd == "beta-c") return cmd_beta_c(config, dir, out);
    if (cmd == "minimize") return report_scan(minimizer_scan(config.ell, scan_options(config), discretization(config)), "minimize", dir, out);
    if (cmd == "maximize") {
      return report_scan(maximizer_scan(config.n, config.ell, scan_options(config), discretization(config)), "maximize", dir, out);
    }
    if (cmd == "smear") return cmd_smear(config, dir, out);
    if (cmd == "nodal-audit") return cmd_audit(config, dir, out);
    if (cmd == "converge") return cmd_converge(config, dir, out);
    err << "error: unknown command '" << cmd << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace zaremba::cli
