#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zaremba/analysis.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/experiments.hpp"

using namespace zaremba;

namespace {

constexpr double kPiD = std::numbers::pi;

Angle pi_frac(std::int64_t p, std::int64_t q) { return Angle::pi_times(p, q); }

Eigen::VectorXd sample(const DiskMesh& m, double (*f)(double, double)) {
  Eigen::VectorXd u(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) u[i] = f(m.vertices[i].x, m.vertices[i].y);
  return u;
}

double angular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * kPiD);
  return std::min(d, 2 * kPiD - d);
}

Discretization coarse(double h = 0.05) {
  Discretization d;
  d.h = h;
  return d;
}

}  // namespace

TEST(Nodal, SyntheticLinearFunctionOnNeumannDisk) {
  const auto m = triangulate(BoundaryPartition::all_neumann(), 0.1, 0);
  const auto rep = nodal_domains(m, sample(m, [](double, double y) { return y; }));
  EXPECT_EQ(rep.domain_count, 2);
  EXPECT_FALSE(rep.is_closed);
  ASSERT_EQ(rep.nodal_endpoints.size(), 2u);
  std::vector<double> e = rep.nodal_endpoints;
  std::sort(e.begin(), e.end());
  EXPECT_NEAR(angular_distance(e[0], 0), 0, 1e-9);
  EXPECT_NEAR(e[1], kPiD, 1e-9);
  // equal halves of the Neumann circle
  EXPECT_NEAR(rep.neumann_measure_plus, kPiD, 1e-9);
  EXPECT_NEAR(rep.neumann_measure_minus, kPiD, 1e-9);
  EXPECT_NEAR(beta_of(rep), kPiD / 2, 1e-9);
  EXPECT_EQ(symmetry_class(m, sample(m, [](double, double y) { return y; })), SymmetryClass::Antisymmetric);
  EXPECT_EQ(symmetry_class(m, sample(m, [](double x, double) { return x; })), SymmetryClass::Symmetric);
  EXPECT_EQ(symmetry_class(m, sample(m, [](double x, double y) { return x + y; })), SymmetryClass::Neither);
}

TEST(Nodal, ClosedLineIsDetected) {
  const auto m = triangulate(BoundaryPartition::all_neumann(), 0.1, 0);
  const auto rep = nodal_domains(m, sample(m, [](double x, double y) { return x * x + y * y - 0.4; }));
  EXPECT_EQ(rep.domain_count, 2);
  EXPECT_TRUE(rep.is_closed);
  EXPECT_TRUE(rep.nodal_endpoints.empty());
  EXPECT_EQ(beta_of(rep), 0.0);
  EXPECT_FALSE(rep.nodal_segments.empty());
  for (const auto& s : rep.nodal_segments) {
    for (const auto& p : s) EXPECT_NEAR(std::hypot(p.x, p.y), std::sqrt(0.4), 0.02);
  }
}

TEST(Nodal, FourDomainsAndErrors) {
  const auto m = triangulate(BoundaryPartition::all_neumann(), 0.1, 0);
  const auto rep = nodal_domains(m, sample(m, [](double x, double) { return (x - 0.51) * (x + 0.013) * (x + 0.49); }));
  EXPECT_EQ(rep.domain_count, 4);
  EXPECT_THROW(beta_of(rep), DomainError);
  EXPECT_THROW(nodal_domains(m, Eigen::VectorXd::Zero(m.vertices.size())), DomainError);
  EXPECT_THROW(nodal_domains(m, Eigen::VectorXd::Ones(3)), DomainError);
}

TEST(Nodal, FirstAndSecondEigenfunctions) {
  for (const auto& p : {make_gamma({kPi, Angle()}), make_gamma({kPi, pi_frac(1, 8)}), make_uniform(3, kPi),
                        make_two_component(pi_frac(1, 5), pi_frac(3, 8), kPi)}) {
    const Solution s = solve_partition(p, coarse(0.1));
    EXPECT_EQ(nodal_domains(s.mesh, s.vertex_values(0)).domain_count, 1);
    const auto rep = nodal_domains(s.mesh, s.vertex_values(1));
    EXPECT_EQ(rep.domain_count, 2);
    EXPECT_FALSE(rep.is_closed);
    EXPECT_GE(rep.beta_u2, 0);
    EXPECT_LE(rep.beta_u2, (kTwoPi - kPi).radians() / 4 + 2 * 0.1);
    EXPECT_LE(rep.neumann_measure_plus + rep.neumann_measure_minus, kPiD + 1e-9);
  }
}

TEST(Nodal, UniformTwoPartitionSplitsNeumannEqually) {
  const Solution s = solve_partition(make_gamma({kPi, pi_frac(1, 4)}), coarse());
  const auto rep = nodal_domains(s.mesh, s.vertex_values(1));
  EXPECT_NEAR(beta_of(rep), kPiD / 4, 1e-6);
}

TEST(Nodal, SmallBetaHasHorizontalAntisymmetricLine) {
  const Solution s = solve_partition(make_gamma({kPi, pi_frac(1, 16)}), coarse());
  EXPECT_EQ(symmetry_class(s.mesh, s.vertex_values(0)), SymmetryClass::Symmetric);
  const auto u2 = s.vertex_values(1);
  EXPECT_EQ(symmetry_class(s.mesh, u2), SymmetryClass::Antisymmetric);
  const auto rep = nodal_domains(s.mesh, u2);
  ASSERT_EQ(rep.nodal_endpoints.size(), 2u);
  std::vector<double> e = rep.nodal_endpoints;
  std::sort(e.begin(), e.end());
  EXPECT_LT(angular_distance(e[0], 0), 1e-6);
  EXPECT_NEAR(e[1], kPiD, 1e-6);
  for (const auto& seg : rep.nodal_segments) {
    EXPECT_LT(std::abs(seg[0].y), 1e-9);
    EXPECT_LT(std::abs(seg[1].y), 1e-9);
  }
  EXPECT_NEAR(rep.beta_u2, kPiD / 4, 1e-9);
}

TEST(Nodal, SymmetryFlipsNearTheCrossing) {
  // regression values for l = pi at h = 0.05: the u2 class changes between
  // 40pi/512 and 41pi/512
  const Solution lo = solve_partition(make_gamma({kPi, pi_frac(40, 512)}), coarse());
  const Solution hi = solve_partition(make_gamma({kPi, pi_frac(41, 512)}), coarse());
  EXPECT_EQ(symmetry_class(lo.mesh, lo.vertex_values(1)), SymmetryClass::Antisymmetric);
  EXPECT_EQ(symmetry_class(hi.mesh, hi.vertex_values(1)), SymmetryClass::Symmetric);
  const auto [ds, da] = symmetry_defects(hi.mesh, hi.vertex_values(1));
  EXPECT_LT(ds, kSymmetryThreshold);
  EXPECT_GT(da, 1.0);
}

TEST(Symmetry, NeedsReflectionAutomorphism) {
  const Solution s = solve_partition(make_two_component(pi_frac(1, 5), pi_frac(3, 8), kPi), coarse(0.1));
  EXPECT_THROW(symmetry_class(s.mesh, s.vertex_values(0)), PreconditionError);
}

TEST(Rearrangement, IdentityOnTheUniformPartition) {
  MeshOptions o;
  o.angular_nodes = 64;
  o.uniform_rings = true;
  const auto m = triangulate(make_gamma({kPi, pi_frac(1, 4)}), 0.1, 0, o);
  const auto pair = assemble(m);
  const auto r = solve_smallest(pair, 1, 1e-10);
  const Eigen::VectorXd u = symmetrize_dihedral(m, pair.extend(r.eigenvectors.col(0)));
  const Eigen::VectorXd ut = rearrange_test_function(m, u, make_gamma({kPi, pi_frac(1, 4)}));
  EXPECT_LE((ut - u).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Rearrangement, PreservesQuadraticFormsAndBoundsTarget) {
  Discretization d = coarse(0.1);
  for (const auto& [a, b] : std::vector<std::pair<Angle, Angle>>{
           {pi_frac(1, 2) - pi_frac(1, 8), pi_frac(1, 2)},
           {pi_frac(1, 2), pi_frac(1, 2) - pi_frac(1, 8)},
           {pi_frac(1, 2) - pi_frac(1, 16), pi_frac(1, 2) - pi_frac(1, 16)},
           {pi_frac(1, 4), pi_frac(1, 4)},
           {Angle(), Angle()}}) {
    const auto c = check_rearrangement(kPi, a, b, 64, d);
    EXPECT_LT(c.stiffness_defect, 1e-10) << a.to_string() << " " << b.to_string();
    EXPECT_LT(c.mass_defect, 1e-10);
    EXPECT_NEAR(c.rayleigh_rearranged, c.rayleigh_u, 1e-10 * c.rayleigh_u);
    EXPECT_TRUE(c.vanishes_on_target);
    EXPECT_LE(c.lambda1_target, c.rayleigh_rearranged + 1e-9);
  }
}

TEST(Rearrangement, RejectsShiftsOffTheGrid) {
  MeshOptions o;
  o.angular_nodes = 64;
  o.uniform_rings = true;
  const auto m = triangulate(make_gamma({kPi, pi_frac(1, 4)}), 0.1, 0, o);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(m.vertices.size());
  // shift alpha = pi/64 is half a grid step
  EXPECT_THROW(rearrange_test_function(m, u, pi_frac(1, 2) - pi_frac(1, 32), pi_frac(1, 2)), PreconditionError);
  // alpha, beta of different parity
  EXPECT_THROW(rearrange_test_function(m, u, pi_frac(1, 2) - pi_frac(2, 32), pi_frac(1, 2) - pi_frac(4, 32)),
               PreconditionError);
  const auto graded = triangulate(make_gamma({kPi, pi_frac(1, 4)}), 0.1, 2);
  EXPECT_THROW(rearrange_test_function(graded, Eigen::VectorXd::Ones(graded.vertices.size()), pi_frac(1, 2),
                                       pi_frac(1, 2)),
               PreconditionError);
}
