#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zaremba/angle.hpp"

namespace zaremba {

// Open arc {start + t : 0 < t < length} of the unit circle.
struct Arc {
  Angle start;
  Angle length;

  Angle end() const { return start + length; }
  friend bool operator==(const Arc& a, const Arc& b) = default;
};

enum class BoundaryClass { Dirichlet, Neumann, Endpoint };

const char* to_string(BoundaryClass c);

// Dirichlet part of the unit circle as a finite union of disjoint open arcs.
// Stored canonically: touching arcs are merged, starts normalized into
// [0, 2pi) and sorted ascending. The Neumann part is the open complement.
// The empty set (pure Neumann) and the whole circle (pure Dirichlet) are
// representable for reference computations.
class BoundaryPartition {
 public:
  BoundaryPartition() = default;  // pure Neumann

  // Accepts arcs in any order and position; zero-length arcs are dropped and
  // touching arcs merged. Overlapping arcs or lengths outside [0, 2pi] throw
  // DomainError.
  static BoundaryPartition from_arcs(std::vector<Arc> arcs);
  static BoundaryPartition all_dirichlet();
  static BoundaryPartition all_neumann() { return {}; }

  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  std::size_t component_count() const noexcept { return full_ ? 1 : arcs_.size(); }
  bool is_full_circle() const noexcept { return full_; }
  bool is_empty() const noexcept { return !full_ && arcs_.empty(); }
  // Total Dirichlet length l.
  const Angle& total_length() const noexcept { return total_; }

  BoundaryClass contains(const Angle& theta) const;
  BoundaryClass contains(double theta) const { return contains(Angle::from_radians(theta)); }

  // Index of the Dirichlet arc (Dirichlet points) or Neumann gap (Neumann
  // points) containing theta; nullopt on endpoints. Gap i follows arc i.
  std::optional<std::size_t> component_at(const Angle& theta) const;

  // Arc endpoints, normalized and sorted.
  std::vector<Angle> junctions() const;
  // Neumann gaps; gap i starts where Dirichlet arc i ends.
  std::vector<Arc> neumann_gaps() const;

  BoundaryPartition rotated(const Angle& by) const;
  // Image under theta -> -theta.
  BoundaryPartition reflected() const;

  friend bool operator==(const BoundaryPartition& a, const BoundaryPartition& b);

 private:
  std::vector<Arc> arcs_;
  Angle total_;
  bool full_ = false;
};

// Member of the symmetric two-arc family: l in (0, 2pi), beta in [0, (2pi-l)/4].
struct GammaParams {
  Angle ell;
  Angle beta;

  Angle beta_max() const { return (kTwoPi - ell) / 4; }
  void validate() const;
};

// Dirichlet arcs [beta, beta + l/2] and [-beta - l/2, -beta]: Neumann gaps of
// length 2*beta around angle 0 and 2pi - l - 2*beta around pi. beta = 0 is the
// single arc centred at 0, beta = (2pi-l)/4 the uniform 2-partition with arcs
// centred at +-pi/2.
BoundaryPartition make_gamma(const GammaParams& params);

// n arcs of length l/n centred at 2*pi*k/n.
BoundaryPartition make_uniform(int n, const Angle& ell);

// Arcs of lengths a and l - a separated by gaps of lengths gap_b and
// 2pi - l - gap_b. Placement matches the angular rearrangement of the uniform
// 2-partition: the arc of length a is centred at pi/2 - ((2pi-l)/2 - gap_b)/2
// and is followed counterclockwise by the long gap.
BoundaryPartition make_two_component(const Angle& a, const Angle& gap_b, const Angle& ell);

Angle dirichlet_measure(const BoundaryPartition& p);

// Finds a rotation r with q == p.rotated(r).
std::optional<Angle> rotation_between(const BoundaryPartition& p, const BoundaryPartition& q);

// One "start length" line per arc, radians with 17 significant digits.
std::string to_text(const BoundaryPartition& p);
// Inverse of to_text; blank lines and '#' comments are ignored and values that
// round-trip a small rational multiple of pi are recovered exactly.
BoundaryPartition partition_from_text(const std::string& text);

}  // namespace zaremba
