#include "zaremba/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "zaremba/errors.hpp"

namespace zaremba {

const char* to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::Dirichlet:
      return "dirichlet";
    case BoundaryClass::Neumann:
      return "neumann";
    case BoundaryClass::Endpoint:
      return "endpoint";
  }
  return "?";
}

BoundaryPartition BoundaryPartition::all_dirichlet() {
  BoundaryPartition p;
  p.full_ = true;
  p.arcs_ = {Arc{Angle(), kTwoPi}};
  p.total_ = kTwoPi;
  return p;
}

BoundaryPartition BoundaryPartition::from_arcs(std::vector<Arc> arcs) {
  std::vector<Arc> kept;
  for (auto& a : arcs) {
    if (a.length < Angle() || a.length > kTwoPi) {
      throw DomainError("arc length " + a.length.to_string() + " outside [0, 2pi]");
    }
    if (a.length == Angle()) continue;
    if (a.length == kTwoPi) return all_dirichlet();
    kept.push_back(Arc{a.start.normalized(), a.length});
  }
  if (kept.empty()) return {};
  std::sort(kept.begin(), kept.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });

  // Linear merge, then close the cycle across 2pi.
  std::vector<Arc> merged;
  for (const auto& a : kept) {
    if (!merged.empty()) {
      Arc& last = merged.back();
      const auto c = compare(last.end(), a.start);
      if (c > 0) throw DomainError("overlapping Dirichlet arcs");
      if (c == 0) {
        last.length = last.length + a.length;
        continue;
      }
    }
    merged.push_back(a);
  }
  if (merged.size() > 1) {
    Arc& last = merged.back();
    const Angle first_start = merged.front().start + kTwoPi;
    const auto c = compare(last.end(), first_start);
    if (c > 0) throw DomainError("overlapping Dirichlet arcs");
    if (c == 0) {
      last.length = last.length + merged.front().length;
      merged.erase(merged.begin());
    }
  }
  Angle total;
  for (const auto& a : merged) total += a.length;
  if (total >= kTwoPi) return all_dirichlet();

  for (auto& a : merged) a.start = a.start.normalized();
  std::sort(merged.begin(), merged.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });

  BoundaryPartition p;
  p.arcs_ = std::move(merged);
  p.total_ = total;
  return p;
}

BoundaryClass BoundaryPartition::contains(const Angle& theta) const {
  if (full_) return BoundaryClass::Dirichlet;
  for (const auto& a : arcs_) {
    const Angle d = ccw_distance(a.start, theta);
    if (d == Angle() || d == kTwoPi || d == a.length) return BoundaryClass::Endpoint;
    if (d < a.length) return BoundaryClass::Dirichlet;
  }
  return BoundaryClass::Neumann;
}

std::optional<std::size_t> BoundaryPartition::component_at(const Angle& theta) const {
  if (full_) return 0;
  if (arcs_.empty()) return 0;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Angle d = ccw_distance(arcs_[i].start, theta);
    if (d == Angle() || d == kTwoPi || d == arcs_[i].length) return std::nullopt;
    if (d < arcs_[i].length) return i;
  }
  const auto gaps = neumann_gaps();
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const Angle d = ccw_distance(gaps[i].start, theta);
    if (d < gaps[i].length) return i;
  }
  return std::nullopt;
}

std::vector<Angle> BoundaryPartition::junctions() const {
  std::vector<Angle> out;
  if (full_) return out;
  for (const auto& a : arcs_) {
    out.push_back(a.start.normalized());
    out.push_back(a.end().normalized());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Arc> BoundaryPartition::neumann_gaps() const {
  if (full_) return {};
  if (arcs_.empty()) return {Arc{Angle(), kTwoPi}};
  std::vector<Arc> gaps;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& a = arcs_[i];
    const Arc& next = arcs_[(i + 1) % arcs_.size()];
    gaps.push_back(Arc{a.end().normalized(), ccw_distance(a.end(), next.start)});
    if (arcs_.size() == 1) gaps.back().length = kTwoPi - a.length;
  }
  return gaps;
}

BoundaryPartition BoundaryPartition::rotated(const Angle& by) const {
  if (full_ || arcs_.empty()) return *this;
  std::vector<Arc> arcs = arcs_;
  for (auto& a : arcs) a.start = a.start + by;
  return from_arcs(std::move(arcs));
}

BoundaryPartition BoundaryPartition::reflected() const {
  if (full_ || arcs_.empty()) return *this;
  std::vector<Arc> arcs;
  for (const auto& a : arcs_) arcs.push_back(Arc{-a.end(), a.length});
  return from_arcs(std::move(arcs));
}

bool operator==(const BoundaryPartition& a, const BoundaryPartition& b) {
  if (a.full_ != b.full_) return false;
  if (a.arcs_.size() != b.arcs_.size()) return false;
  for (std::size_t i = 0; i < a.arcs_.size(); ++i) {
    if (!(a.arcs_[i].start == b.arcs_[i].start) || !(a.arcs_[i].length == b.arcs_[i].length)) return false;
  }
  return true;
}

void GammaParams::validate() const {
  if (!(ell > Angle()) || !(ell < kTwoPi)) throw DomainError("l must lie in (0, 2pi), got " + ell.to_string());
  if (beta < Angle() || beta > beta_max()) {
    throw DomainError("beta = " + beta.to_string() + " outside [0, (2pi - l)/4]");
  }
}

BoundaryPartition make_gamma(const GammaParams& params) {
  params.validate();
  const Angle half = params.ell / 2;
  return BoundaryPartition::from_arcs({Arc{params.beta, half}, Arc{-params.beta - half, half}});
}

BoundaryPartition make_uniform(int n, const Angle& ell) {
  if (n < 1) throw DomainError("uniform partition needs n >= 1");
  if (!(ell > Angle()) || !(ell < kTwoPi)) throw DomainError("l must lie in (0, 2pi)");
  std::vector<Arc> arcs;
  const Angle piece = ell / n;
  for (int k = 0; k < n; ++k) {
    const Angle centre = Angle::pi_times(2 * k, n);
    arcs.push_back(Arc{centre - piece / 2, piece});
  }
  return BoundaryPartition::from_arcs(std::move(arcs));
}

BoundaryPartition make_two_component(const Angle& a, const Angle& gap_b, const Angle& ell) {
  if (!(ell > Angle()) || !(ell < kTwoPi)) throw DomainError("l must lie in (0, 2pi)");
  const Angle neumann = kTwoPi - ell;
  if (a < Angle() || a > ell / 2) throw DomainError("a = " + a.to_string() + " outside [0, l/2]");
  if (gap_b < Angle() || gap_b > neumann / 2) {
    throw DomainError("gap_b = " + gap_b.to_string() + " outside [0, (2pi - l)/2]");
  }
  const Angle shift = (neumann / 2 - gap_b) / 2;
  const Angle first_start = kPi / 2 - shift - a / 2;
  const Angle second_start = first_start + a + (neumann - gap_b);
  return BoundaryPartition::from_arcs({Arc{first_start, a}, Arc{second_start, ell - a}});
}

Angle dirichlet_measure(const BoundaryPartition& p) {
  Angle total;
  for (const auto& a : p.arcs()) total += a.length;
  return total;
}

std::optional<Angle> rotation_between(const BoundaryPartition& p, const BoundaryPartition& q) {
  if (p.is_full_circle() || p.is_empty()) {
    return p == q ? std::optional<Angle>(Angle()) : std::nullopt;
  }
  if (p.arcs().size() != q.arcs().size()) return std::nullopt;
  for (const auto& target : q.arcs()) {
    const Angle shift = (target.start - p.arcs().front().start).normalized();
    if (p.rotated(shift) == q) return shift;
  }
  return std::nullopt;
}

std::string to_text(const BoundaryPartition& p) {
  std::ostringstream out;
  out << "# dirichlet arcs: start length (radians)\n";
  for (const auto& a : p.arcs()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a.start.radians(), a.length.radians());
    out << buf;
  }
  return out.str();
}

BoundaryPartition partition_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Arc> arcs;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double start = 0, length = 0;
    if (!(fields >> start)) continue;
    if (!(fields >> length)) throw DomainError("arc line without length: '" + line + "'");
    std::string extra;
    if (fields >> extra) throw DomainError("trailing data in arc line: '" + line + "'");
    arcs.push_back(Arc{Angle::snap(start), Angle::snap(length)});
  }
  return BoundaryPartition::from_arcs(std::move(arcs));
}

}  // namespace zaremba
