#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zaremba/analysis.hpp"
#include "zaremba/eig.hpp"
#include "zaremba/fem.hpp"
#include "zaremba/geometry.hpp"
#include "zaremba/mesh.hpp"

namespace zaremba {

// Mesh, assembly and solver settings shared by the drivers.
struct Discretization {
  double h = 0.05;
  int grading_levels = 6;
  double grading_ratio = 0.5;
  int angular_nodes = 0;  // 0: choose_angular_nodes
  bool junctions_dirichlet = true;
  int k = kDefaultEigenCount;
  double tol = 1e-10;
  SolverOptions solver;
  int threads = 0;  // 0: hardware concurrency

  MeshOptions mesh_options() const;
};

struct Solution {
  DiskMesh mesh;
  OperatorPair pair;
  EigenResult result;

  // Eigenvector i extended to all vertices.
  Eigen::VectorXd vertex_values(int i) const;
};

Solution solve_partition(const BoundaryPartition& p, const Discretization& d);

// Runs body(i) for i in [0, count) on `threads` workers (0: hardware
// concurrency). Every index runs; afterwards the exception of the smallest
// failing index, if any, is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------- beta sweep

struct SweepRecord {
  Angle beta;
  double lambda1 = 0, lambda2 = 0, lambda3 = 0;
  SymmetryClass symmetry = SymmetryClass::Neither;  // of u2
  double beta_u2 = 0;
  double gap = 0;  // lambda3 - lambda2
  double h = 0;
  std::array<double, 3> residuals{};
  int domain_count = 0;
  std::vector<double> endpoints;  // nodal line endpoints of u2 (radians)
  bool is_closed = false;
  bool touches_junction = false;
  // u2 is not an eigenvector of the reflection (near-double lambda2). The
  // u3 report is then kept as well, and `resolved` names the reflection
  // sector holding the lower Rayleigh quotient on span{u2, u3}.
  bool degenerate = false;
  SymmetryClass symmetry_u3 = SymmetryClass::Neither;
  double beta_u3 = 0;
  SymmetryClass resolved = SymmetryClass::Neither;
  std::size_t vertices = 0;
};

// i * pi / den for i = 0..max_i.
std::vector<Angle> beta_grid(int den, int max_i);
// beta_max * i / steps for i = 0..steps.
std::vector<Angle> default_beta_grid(const Angle& ell, int steps = 128);

// Solves the member Gamma(beta) of the symmetric two-arc family.
SweepRecord evaluate_gamma(const Angle& ell, const Angle& beta, const Discretization& d,
                           std::vector<std::array<Point, 2>>* nodal_segments = nullptr);

// One record per grid value (sorted by beta), solved in parallel on a shared
// angular grid aligned with every junction when possible. A failed solve
// aborts with a message naming its beta.
std::vector<SweepRecord> sweep_beta(const Angle& ell, std::vector<Angle> grid, const Discretization& d);

std::size_t argmin_lambda2(const std::vector<SweepRecord>& records);
std::size_t argmax_lambda1(const std::vector<SweepRecord>& records);
// Indices i with lambda1(i+1) < lambda1(i) - tol.
std::vector<std::size_t> lambda1_decreases(const std::vector<SweepRecord>& records, double tol);
// Indices i where some |lambda_k(i+1) - lambda_k(i)| exceeds
// factor * (median slope over the sweep) * |beta(i+1) - beta(i)|.
std::vector<std::size_t> continuity_jumps(const std::vector<SweepRecord>& records, double factor = 8.0);

// ------------------------------------------------------------- beta_c search

struct BetaCResult {
  Angle beta_c;
  Angle lo, hi;  // final bracket, lo carries the class of the initial lo end
  double gap = 0;     // lambda3 - lambda2 at beta_c
  double gap_lo = 0;  // at the initial bracket ends
  double gap_hi = 0;
  SymmetryClass class_lo = SymmetryClass::Neither;
  SymmetryClass class_hi = SymmetryClass::Neither;
  int evaluations = 0;
};

// Bisection on the reflection class of u2 (the resolved class near
// degeneracy) until |hi - lo| <= tol_beta. DomainError if both ends agree.
BetaCResult find_beta_c(const Angle& ell, const Angle& lo, const Angle& hi, double tol_beta, const Discretization& d);

// ------------------------------------------------------------- scans

struct ScanRecord {
  std::string check;  // what was compared
  std::string label;  // sample origin
  int n = 0;          // uniform partition order, when relevant
  Angle a, gap_b;     // two-component parameters, when relevant
  BoundaryPartition partition;
  double value = 0;
  double baseline = 0;
  // Oriented so that margin >= -tolerance passes: value - baseline for lower
  // bounds (minimizer scan), baseline - value for upper bounds.
  double margin = 0;
  double tolerance = 0;
  bool violation = false;
  double beta_u2 = 0;
};

struct ScanOptions {
  int samples = 50;
  std::uint64_t seed = 20240917;
  double tol_lambda = -1;  // < 0: estimate_tolerance
  int lattice_den = 256;   // sampled angles are multiples of pi / lattice_den
  int rearrangement_nodes = 256;
};

struct ScanReport {
  std::vector<ScanRecord> records;
  double tol_lambda = 0;
  std::size_t violations() const;
};

// 2 * max over the first three eigenvalues of Gamma(0) and Gamma(beta_max)
// of the Richardson error estimate at d.h (from h, h/2, h/4).
double estimate_tolerance(const Angle& ell, const Discretization& d);

// Random two-component partitions (a, gap_b) plus fixed edge cases; checks
// lambda2 >= min over a Gamma(beta) sweep and lambda2 >= lambda2 of the
// family member at the sample's beta_u2.
ScanReport minimizer_scan(const Angle& ell, const ScanOptions& opts, const Discretization& d,
                          const std::vector<Angle>& baseline_grid = {});

// Random partitions with at most n components; checks lambda1 <=
// lambda1(uniform n-partition). For n = 2 also checks the rearranged test
// function against every (lattice) two-component target.
ScanReport maximizer_scan(int n, const Angle& ell, const ScanOptions& opts, const Discretization& d);

struct RearrangementCheck {
  Angle a, gap_b;
  double rayleigh_u = 0;
  double rayleigh_rearranged = 0;
  double lambda1_target = 0;
  double stiffness_defect = 0;  // |u~'Ku~ - u'Ku| / u'Ku
  double mass_defect = 0;
  bool vanishes_on_target = false;
};

// One rearrangement experiment on a uniform_rings mesh with `nodes` angular
// nodes and no grading.
RearrangementCheck check_rearrangement(const Angle& ell, const Angle& a, const Angle& gap_b, int nodes,
                                       const Discretization& d);

// --------------------------------------------------------- smearing limit

struct SmearReport {
  std::vector<ScanRecord> records;  // value lambda1(Gamma_n), baseline j01^2
  int last_valid_n = 0;
  bool stopped_early = false;
  bool strictly_increasing = true;
  bool gap_shrinking = true;
};

// lambda1 of the uniform n-partitions for the given orders (ascending);
// stops before the first n whose arcs or gaps are shorter than 4h.
SmearReport smearing_limit(const Angle& ell, const std::vector<int>& orders, const Discretization& d);

// ----------------------------------------------------- nodal-line audit

struct AuditEntry {
  Angle beta;
  std::vector<double> endpoints;
  bool closed = false;
  bool closed_after_refinement = false;  // only meaningful when closed
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  std::size_t findings() const;  // closed at h and at h/2
};

// Checks that the u2 nodal line reaches the circle for every grid value;
// closed lines are re-checked at h/2. Reuses `sweep` when given.
AuditReport nodal_line_audit(const Angle& ell, const std::vector<Angle>& grid, const Discretization& d,
                             const std::vector<SweepRecord>* sweep = nullptr);

// ---------------------------------------------------- convergence study

struct ConvergenceReport {
  std::vector<double> h;
  std::vector<std::size_t> vertices;
  std::vector<std::vector<double>> eigenvalues;  // per h
  std::vector<double> extrapolated;
  std::vector<double> order;  // observed order from the last three levels (NaN if unavailable)
  std::vector<double> reference;  // analytic values when known, else empty
};

// h_list strictly decreasing. Pure Dirichlet / pure Neumann partitions get
// Bessel references.
ConvergenceReport convergence_study(const BoundaryPartition& p, const std::vector<double>& h_list,
                                    const Discretization& d);

// -------------------------------------------------------------- output

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void write_scan_csv(const std::vector<ScanRecord>& records, std::ostream& out);
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);
void write_audit_csv(const AuditReport& report, std::ostream& out);

void write_sweep_svg(const std::vector<SweepRecord>& records, std::ostream& out);
// value and baseline against the record index label (n for smearing).
void write_scan_svg(const std::vector<ScanRecord>& records, const std::string& title, std::ostream& out);
void write_convergence_svg(const ConvergenceReport& report, std::ostream& out);
// Disk outline with Dirichlet arcs and the nodal segments.
void write_nodal_svg(const BoundaryPartition& p, const std::vector<std::array<Point, 2>>& segments,
                     std::ostream& out);

}  // namespace zaremba
