#include <gtest/gtest.h>

#include <atomic>
#include <numbers>
#include <sstream>

#include "oracle.hpp"
#include "zaremba/errors.hpp"
#include "zaremba/experiments.hpp"

using namespace zaremba;

namespace {

constexpr double kPiD = std::numbers::pi;

Angle pi_frac(std::int64_t p, std::int64_t q) { return Angle::pi_times(p, q); }

Discretization coarse(double h = 0.1) {
  Discretization d;
  d.h = h;
  return d;
}

}  // namespace

TEST(ParallelFor, RunsEveryIndexAndRethrowsLowest) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  std::atomic<int> ran{0};
  try {
    parallel_for(50, 3, [&](std::size_t i) {
      ++ran;
      if (i == 7 || i == 31) throw std::runtime_error("index " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "index 7");
  }
  EXPECT_EQ(ran.load(), 50);
}

TEST(Grid, BetaGrids) {
  const auto g = beta_grid(512, 128);
  ASSERT_EQ(g.size(), 129u);
  EXPECT_EQ(g.back(), pi_frac(1, 4));
  const auto dg = default_beta_grid(kPi, 8);
  ASSERT_EQ(dg.size(), 9u);
  EXPECT_EQ(dg[4], pi_frac(1, 8));
  EXPECT_THROW(beta_grid(0, 3), DomainError);
}

TEST(Sweep, ShapeOfTheCurvesAtCoarseResolution) {
  const auto rec = sweep_beta(kPi, beta_grid(64, 16), coarse());
  ASSERT_EQ(rec.size(), 17u);
  EXPECT_EQ(argmin_lambda2(rec), 16u);
  EXPECT_EQ(argmax_lambda1(rec), 16u);
  EXPECT_TRUE(lambda1_decreases(rec, 1e-9).empty());
  EXPECT_TRUE(continuity_jumps(rec).empty());
  for (const auto& r : rec) {
    EXPECT_EQ(r.domain_count, 2);
    EXPECT_FALSE(r.is_closed);
    EXPECT_LE(r.lambda1, r.lambda2);
    EXPECT_LE(r.lambda2, r.lambda3);
    EXPECT_NEAR(r.gap, r.lambda3 - r.lambda2, 1e-12);
  }
  // antisymmetric u2 has the x-axis as nodal line, so beta_u2 = (2pi - l)/4
  for (const auto& r : rec) {
    if (r.resolved == SymmetryClass::Antisymmetric) {
      EXPECT_NEAR(r.beta_u2, kPiD / 4, 1e-9);
    }
  }
  EXPECT_EQ(rec.front().resolved, SymmetryClass::Antisymmetric);
  EXPECT_EQ(rec.back().resolved, SymmetryClass::Symmetric);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  Discretization one = coarse(), many = coarse();
  one.threads = 1;
  many.threads = 3;
  const auto a = sweep_beta(kPi, beta_grid(32, 8), one);
  const auto b = sweep_beta(kPi, beta_grid(32, 8), many);
  std::ostringstream sa, sb;
  write_sweep_csv(a, sa);
  write_sweep_csv(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Sweep, ReportsFailingBeta) {
  EXPECT_THROW(sweep_beta(kPi, {pi_frac(1, 8), pi_frac(1, 2)}, coarse()), DomainError);
}

TEST(BetaC, BisectionFindsTheFlip) {
  const auto r = find_beta_c(kPi, Angle(), pi_frac(1, 4), 1e-2, coarse());
  EXPECT_EQ(r.class_lo, SymmetryClass::Antisymmetric);
  EXPECT_EQ(r.class_hi, SymmetryClass::Symmetric);
  EXPECT_LE((r.hi - r.lo).radians(), 1e-2);
  EXPECT_GT(r.beta_c.radians(), 0.2);
  EXPECT_LT(r.beta_c.radians(), 0.3);
  // the curves nearly meet at the flip
  EXPECT_LT(r.gap, 0.1 * std::min(r.gap_lo, r.gap_hi));
  EXPECT_THROW(find_beta_c(kPi, Angle(), pi_frac(1, 32), 1e-2, coarse()), DomainError);
}

TEST(Scans, MinimizerAndMaximizerRecords) {
  ScanOptions o;
  o.samples = 3;
  o.tol_lambda = 0.2;
  const auto mn = minimizer_scan(kPi, o, coarse(), beta_grid(16, 4));
  EXPECT_GE(mn.records.size(), 2u * 3);
  EXPECT_EQ(mn.violations(), 0u);
  const auto mx = maximizer_scan(2, kPi, o, coarse());
  EXPECT_EQ(mx.violations(), 0u);
  bool rearranged = false;
  for (const auto& r : mx.records) {
    if (r.check.find("Rayleigh") != std::string::npos) rearranged = true;
  }
  EXPECT_TRUE(rearranged);
  EXPECT_THROW(maximizer_scan(7, kPi, o, coarse()), DomainError);
}

TEST(Smearing, IncreasesTowardTheDirichletValue) {
  const auto r = smearing_limit(kPi, {1, 2, 4}, coarse());
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.strictly_increasing);
  EXPECT_TRUE(r.gap_shrinking);
  EXPECT_NEAR(r.records[0].baseline, oracle::j01_squared(), 1e-9);
  const auto stopped = smearing_limit(kPi, {1, 2, 4, 8}, coarse(0.2));
  EXPECT_TRUE(stopped.stopped_early);
  EXPECT_LT(stopped.last_valid_n, 8);
  EXPECT_THROW(smearing_limit(kPi, {2, 1}, coarse()), DomainError);
}

TEST(Convergence, DirichletStudyApproachesBessel) {
  const auto r = convergence_study(BoundaryPartition::all_dirichlet(), {0.2, 0.1, 0.05}, coarse());
  ASSERT_EQ(r.reference.size(), r.extrapolated.size());
  EXPECT_NEAR(r.reference[0], oracle::j01_squared(), 1e-9);
  EXPECT_LT(std::abs(r.extrapolated[0] - r.reference[0]), std::abs(r.eigenvalues.back()[0] - r.reference[0]));
  EXPECT_NEAR(r.order[0], 2.0, 0.3);
  EXPECT_THROW(convergence_study(BoundaryPartition::all_dirichlet(), {0.1, 0.2}, coarse()), DomainError);
}

TEST(Audit, NoClosedLinesOnCoarseSweep) {
  const auto r = nodal_line_audit(kPi, beta_grid(16, 4), coarse());
  ASSERT_EQ(r.entries.size(), 5u);
  EXPECT_EQ(r.findings(), 0u);
  for (const auto& e : r.entries) EXPECT_FALSE(e.endpoints.empty());
}

TEST(Output, CsvHeadersAndSvg) {
  const auto rec = sweep_beta(kPi, beta_grid(8, 2), coarse(0.2));
  std::ostringstream csv, svg;
  write_sweep_csv(rec, csv);
  write_sweep_svg(rec, svg);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("beta,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
}
