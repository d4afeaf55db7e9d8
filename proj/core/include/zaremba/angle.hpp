#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace zaremba {

// Normalized fraction num/den with den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  struct Normalized {};
  constexpr Rational(std::int64_t num, std::int64_t den, Normalized) : num_(num), den_(den) {}
  friend Rational make_normalized_rational(std::int64_t num, std::int64_t den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// An angle in radians. Angles built from rational multiples of pi stay exact
// under +, -, integer scaling and normalization; anything touched by a double
// falls back to binary floating point. Comparisons between two exact angles
// are exact, otherwise they use an absolute tolerance of kTolerance radians.
class Angle {
 public:
  static constexpr double kTolerance = 1e-12;

  Angle() = default;  // exact zero

  static Angle pi_times(const Rational& r);
  static Angle pi_times(std::int64_t num, std::int64_t den = 1) { return pi_times(Rational(num, den)); }
  static Angle from_radians(double radians);
  // Recovers an exact multiple p/q*pi (q <= max_den) when `radians` is the
  // closest double to one; otherwise returns an inexact angle.
  static Angle snap(double radians, std::int64_t max_den = 4096);

  bool is_exact() const noexcept { return exact_.has_value(); }
  const std::optional<Rational>& pi_multiple() const noexcept { return exact_; }
  double radians() const noexcept { return value_; }

  // Representative in [0, 2pi).
  Angle normalized() const;

  Angle operator-() const;
  friend Angle operator+(const Angle& a, const Angle& b);
  friend Angle operator-(const Angle& a, const Angle& b);
  friend Angle operator*(const Angle& a, std::int64_t k);
  friend Angle operator*(std::int64_t k, const Angle& a) { return a * k; }
  friend Angle operator/(const Angle& a, std::int64_t k);
  friend Angle operator*(const Angle& a, const Rational& r);
  Angle& operator+=(const Angle& o) { return *this = *this + o; }
  Angle& operator-=(const Angle& o) { return *this = *this - o; }

  // -1, 0, +1 (tolerant unless both exact).
  friend int compare(const Angle& a, const Angle& b);
  friend bool operator==(const Angle& a, const Angle& b) { return compare(a, b) == 0; }
  friend std::weak_ordering operator<=>(const Angle& a, const Angle& b) {
    const int c = compare(a, b);
    return c < 0 ? std::weak_ordering::less : (c > 0 ? std::weak_ordering::greater : std::weak_ordering::equivalent);
  }

  // "3/4pi" for exact angles, 17 significant digits otherwise.
  std::string to_string() const;

 private:
  std::optional<Rational> exact_ = Rational(0);
  double value_ = 0.0;
};

inline const Angle kPi = Angle::pi_times(1);
inline const Angle kTwoPi = Angle::pi_times(2);

// Parses "pi", "0.25pi", "3/4pi", "3pi/4", "pi/4", "-pi/8" or a plain decimal
// (radians). Integer fractions of pi are kept exact. Throws DomainError.
Angle parse_angle(std::string_view text);

// Smallest nonnegative representative difference (b - a) mod 2pi.
Angle ccw_distance(const Angle& from, const Angle& to);

}  // namespace zaremba
