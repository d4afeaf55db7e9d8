#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "zaremba/angle.hpp"
#include "zaremba/geometry.hpp"

namespace zaremba::cli {

// Rejected configuration (unknown key, bad value, value out of range).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitUsage = 64;

struct RunConfig {
  std::string command = "solve";

  // partition
  std::string family = "gamma";  // gamma | uniform | two | dirichlet | neumann | arcs
  Angle ell = kPi;
  Angle beta;
  int n = 2;
  Angle a;
  Angle gap_b;
  std::string arcs;  // "start:length;start:length"

  // discretization
  double h = 0.05;
  int grading_levels = 6;
  double grading_ratio = 0.5;
  int angular_nodes = 0;
  bool junctions_dirichlet = true;
  int k = 4;
  double tol = 1e-10;
  std::uint64_t seed = 20240917;
  int threads = 0;

  // drivers
  int samples = 50;
  int grid_den = 512;
  int grid_max = 128;
  std::string bracket_lo = "0";
  std::string bracket_hi = "max";  // (2pi - l)/4
  double tol_beta = 1e-3;
  int n_max = 16;
  std::string orders;  // comma list; empty means 1..n_max
  std::string h_list = "0.2,0.1,0.05,0.025";
  double tol_lambda = -1;  // < 0: estimated
  int lattice_den = 256;
  int rearrangement_nodes = 256;

  // output
  std::string output = "results";
  bool export_mesh = false;
  bool export_matrices = false;

  BoundaryPartition partition() const;
  // Resolved key/value pairs; the text format of the config file.
  std::map<std::string, std::string> to_map() const;
};

const std::vector<std::string>& known_keys();
const std::vector<std::string>& commands();

// Flat "key = value" text, '#' starts a comment. Unknown keys throw.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

// Applies values over defaults, validating each. Throws ConfigError.
RunConfig make_config(const std::map<std::string, std::string>& values);

// Executes the command, writing CSV/SVG and manifest.txt into
// config.output. Returns an exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string version_string();

}  // namespace zaremba::cli
