#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

using zaremba::cli::ConfigError;

struct KeyHelp {
  const char* key;
  const char* help;
  bool boolean;
};

const std::vector<KeyHelp>& key_help() {
  static const std::vector<KeyHelp> k{
      {"family", "partition family: gamma | uniform | two | dirichlet | neumann | arcs", false},
      {"ell", "total Dirichlet length, e.g. pi, 3pi/4, 1.2 (radians)", false},
      {"beta", "gamma family: half of the short Neumann gap, in [0, (2pi-ell)/4]", false},
      {"n", "uniform family: number of arcs; maximize: largest component count (1..6)", false},
      {"a", "two family: length of the first arc", false},
      {"gap-b", "two family: length of the gap preceding the first arc", false},
      {"arcs", "arcs family: 'start:length;start:length;...'", false},
      {"h", "mesh size in (0, 1]", false},
      {"grading-levels", "halvings of h toward junctions (0..12)", false},
      {"grading-ratio", "size ratio per grading level, in (0, 1)", false},
      {"angular-nodes", "boundary nodes, 0 = automatic, else multiple of 4", false},
      {"junctions-dirichlet", "arc endpoints carry the Dirichlet condition", true},
      {"k", "number of eigenpairs (1..64)", false},
      {"tol", "relative residual tolerance in [1e-12, 1e-4]", false},
      {"seed", "random seed for solver start blocks and scans", false},
      {"threads", "worker threads, 0 = number of cores", false},
      {"samples", "random partitions per scan", false},
      {"grid-den", "beta grid: beta_i = i*pi/grid-den", false},
      {"grid-max", "beta grid: largest i", false},
      {"bracket-lo", "beta-c: lower bracket end, or 'max'", false},
      {"bracket-hi", "beta-c: upper bracket end, or 'max' = (2pi-ell)/4", false},
      {"tol-beta", "beta-c: bracket width at termination (radians)", false},
      {"n-max", "smear: largest order when orders is empty", false},
      {"orders", "smear: comma-separated orders", false},
      {"h-list", "converge: comma-separated decreasing mesh sizes", false},
      {"tol-lambda", "eigenvalue comparison tolerance, negative = estimated", false},
      {"lattice-den", "scans: sampled angles are multiples of pi/lattice-den", false},
      {"rearrangement-nodes", "maximize n=2: boundary nodes of the rearrangement mesh", false},
      {"output", "output directory", false},
      {"export-mesh", "solve: also write mesh.msh", true},
      {"export-matrices", "solve: also write K.mtx and M.mtx", true},
  };
  return k;
}

const char* describe(const std::string& cmd) {
  if (cmd == "solve") return "eigenpairs of one partition";
  if (cmd == "sweep") return "lambda1..3 and u2 nodal data along the symmetric two-arc family";
  if (cmd == "beta-c") return "bisect for the switch of the u2 reflection class";
  if (cmd == "minimize") return "random two-component partitions against the family minimum of lambda2";
  if (cmd == "maximize") return "random partitions against lambda1 of the uniform n-partition";
  if (cmd == "smear") return "lambda1 of uniform n-partitions against the Dirichlet limit";
  if (cmd == "nodal-audit") return "check that u2 nodal lines reach the circle";
  return "eigenvalue convergence under mesh refinement";
}

int finish(const std::map<std::string, std::string>& values) {
  zaremba::cli::RunConfig cfg;
  try {
    cfg = zaremba::cli::make_config(values);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return zaremba::cli::kExitUsage;
  }
  return zaremba::cli::run(cfg, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed Dirichlet-Neumann Laplace eigenvalues on the unit disk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", zaremba::cli::version_string());
  app.footer(
      "Every option is also a config-file key (key = value, '#' comments). Options given on the\n"
      "command line override --config. Exit status: 0 ok, 1 findings, 2 errors, 64 usage.");

  std::map<std::string, std::string> flags;
  std::string config_path;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> opts;

  for (const auto& cmd : zaremba::cli::commands()) {
    CLI::App* sub = app.add_subcommand(cmd, describe(cmd));
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--config", config_path, "config file");
    for (const auto& kh : key_help()) {
      CLI::Option* o = kh.boolean ? sub->add_flag(std::string("--") + kh.key + "{true}", flags[kh.key], kh.help)
                                  : sub->add_option(std::string("--") + kh.key, flags[kh.key], kh.help);
      opts[cmd].emplace_back(kh.key, o);
    }
    subs[cmd] = sub;
  }

  std::string manifest;
  std::string rerun_output;
  CLI::App* rerun = app.add_subcommand("rerun", "repeat a run from its manifest.txt");
  rerun->add_option("manifest", manifest, "manifest file")->required();
  rerun->add_option("--output", rerun_output, "output directory (default: as recorded)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zaremba::cli::kExitUsage;
  }

  try {
    if (rerun->parsed()) {
      auto values = zaremba::cli::read_config_file(manifest);
      values.erase("version");
      if (!rerun_output.empty()) values["output"] = rerun_output;
      return finish(values);
    }
    for (const auto& [cmd, sub] : subs) {
      if (!sub->parsed()) continue;
      std::map<std::string, std::string> values;
      if (!config_path.empty()) values = zaremba::cli::read_config_file(config_path);
      values.erase("version");
      values["command"] = cmd;
      for (const auto& [key, o] : opts[cmd]) {
        if (o->count() > 0) values[key] = flags[key];
      }
      return finish(values);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return zaremba::cli::kExitUsage;
  }
  return zaremba::cli::kExitUsage;
}
