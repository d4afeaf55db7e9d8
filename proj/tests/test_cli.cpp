#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace zaremba::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zaremba_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int tool(const std::string& args) {
  const int status = std::system((std::string(ZAREMBA_TOOL_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
  const auto m = parse_config_text("# comment\nh = 0.1   # trailing\n\nbeta=pi/8\ncommand = sweep\n");
  EXPECT_EQ(m.at("h"), "0.1");
  EXPECT_EQ(m.at("beta"), "pi/8");
  const auto c = make_config(m);
  EXPECT_EQ(c.command, "sweep");
  EXPECT_DOUBLE_EQ(c.h, 0.1);
  EXPECT_EQ(c.beta, zaremba::Angle::pi_times(1, 8));
  EXPECT_THROW(parse_config_text("hh = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("no equals sign\n"), ConfigError);
}

TEST(Config, RejectsOutOfRangeValues) {
  EXPECT_THROW(make_config({{"h", "0"}}), ConfigError);
  EXPECT_THROW(make_config({{"h", "abc"}}), ConfigError);
  EXPECT_THROW(make_config({{"tol", "1e-3"}}), ConfigError);
  EXPECT_THROW(make_config({{"k", "0"}}), ConfigError);
  EXPECT_THROW(make_config({{"beta", "pi/2"}}), ConfigError);
  EXPECT_THROW(make_config({{"command", "dance"}}), ConfigError);
  EXPECT_THROW(make_config({{"command", "maximize"}, {"n", "7"}}), ConfigError);
  EXPECT_THROW(make_config({{"h-list", "0.1,0.2"}}), ConfigError);
  EXPECT_THROW(make_config({{"family", "arcs"}, {"arcs", "0:pi;pi/2:pi"}}), ConfigError);
  EXPECT_THROW(make_config({{"export-mesh", "maybe"}}), ConfigError);
  EXPECT_NO_THROW(make_config({{"family", "arcs"}, {"arcs", "0:pi/2; pi:pi/4"}}));
}

TEST(Config, MapRoundTrip) {
  const auto c = make_config({{"family", "two"}, {"a", "pi/3"}, {"gap-b", "pi/5"}, {"h", "0.07"}, {"seed", "5"}});
  auto m = c.to_map();
  const auto d = make_config(m);
  EXPECT_EQ(d.to_map(), m);
  EXPECT_EQ(d.partition(), c.partition());
}

TEST(Run, SolveWritesArtifactsAndManifest) {
  const auto dir = scratch("solve");
  auto c = make_config({{"h", "0.2"}, {"beta", "pi/4"}, {"export-mesh", "true"}, {"export-matrices", "true"}});
  c.output = dir.string();
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), kExitOk) << err.str();
  for (const char* f : {"manifest.txt", "eigenvalues.csv", "nodal.svg", "mesh.msh", "K.mtx", "M.mtx"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto manifest = read_config_file((dir / "manifest.txt").string());
  EXPECT_EQ(manifest.at("version"), version_string());
  EXPECT_EQ(manifest.at("beta"), "1/4pi");
  EXPECT_NE(out.str().find("lambda1"), std::string::npos);
}

TEST(Run, ExitCodes) {
  const auto dir = scratch("codes");
  std::ostringstream out, err;
  // no symmetry flip inside the bracket: error
  auto c = make_config({{"command", "beta-c"}, {"h", "0.2"}, {"bracket-hi", "pi/64"}});
  c.output = (dir / "a").string();
  EXPECT_EQ(run(c, out, err), kExitError);
  // a zero tolerance turns discretization noise into findings
  c = make_config({{"command", "maximize"}, {"n", "3"}, {"h", "0.2"}, {"samples", "1"}, {"tol-lambda", "0"}});
  c.output = (dir / "b").string();
  EXPECT_EQ(run(c, out, err), kExitFindings);
}

TEST(Binary, UsageErrorsExit64) {
  EXPECT_EQ(tool("solve --bogus 1"), 64);
  EXPECT_EQ(tool("solve --h -1"), 64);
  EXPECT_EQ(tool("frobnicate"), 64);
  EXPECT_EQ(tool(""), 64);
  EXPECT_EQ(tool("solve --help"), 0);
  EXPECT_EQ(tool("--version"), 0);
}

TEST(Binary, FlagsOverrideConfigAndRerunReproduces) {
  const auto dir = scratch("rerun");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "h = 0.3\nbeta = pi/8\noutput = " << (dir / "first").string() << "\n";
  }
  ASSERT_EQ(tool("solve --config " + (dir / "run.cfg").string() + " --h 0.2"), 0);
  const auto manifest = read_config_file((dir / "first" / "manifest.txt").string());
  EXPECT_EQ(manifest.at("h"), "0.20000000000000001");
  EXPECT_EQ(manifest.at("beta"), "1/8pi");
  ASSERT_EQ(tool("rerun " + (dir / "first" / "manifest.txt").string() + " --output " + (dir / "second").string()), 0);
  EXPECT_EQ(slurp(dir / "first" / "eigenvalues.csv"), slurp(dir / "second" / "eigenvalues.csv"));
}
