#include "zaremba/angle.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "zaremba/errors.hpp"

namespace zaremba {

Rational make_normalized_rational(std::int64_t num, std::int64_t den) {
  return Rational(num, den, Rational::Normalized{});
}

namespace {

using i128 = __int128;

Rational make_checked(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || num < -lim || den > lim) throw std::overflow_error("rational overflow");
  return make_normalized_rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

double pi_value(const Rational& r) {
  return std::numbers::pi * static_cast<double>(r.num()) / static_cast<double>(r.den());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

// Exact rational from "12", "-3", "0.25", "1/3", "1.5/4".
std::optional<Rational> parse_rational(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = parse_rational(s.substr(0, slash));
    auto den = parse_rational(s.substr(slash + 1));
    if (!num || !den || den->num() == 0) return std::nullopt;
    return *num / *den;
  }
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string digits(s.substr(0, dot));
  std::int64_t den = 1;
  if (dot != std::string_view::npos) {
    const auto frac = s.substr(dot + 1);
    if (frac.size() > 15) return std::nullopt;
    digits += frac;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  }
  if (digits.empty() || digits.size() > 17) return std::nullopt;
  std::int64_t num = 0;
  if (!parse_int(digits, num) || digits.front() == '-' || digits.front() == '+') return std::nullopt;
  return Rational(negative ? -num : num, den);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = make_checked(num, den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_checked(static_cast<i128>(a.num()) * b.den() + static_cast<i128>(b.num()) * a.den(),
                      static_cast<i128>(a.den()) * b.den());
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_checked(static_cast<i128>(a.num()) * b.num(), static_cast<i128>(a.den()) * b.den());
}

Rational operator/(const Rational& a, const Rational& b) {
  return make_checked(static_cast<i128>(a.num()) * b.den(), static_cast<i128>(a.den()) * b.num());
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 l = static_cast<i128>(a.num()) * b.den();
  const i128 r = static_cast<i128>(b.num()) * a.den();
  return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Angle Angle::pi_times(const Rational& r) {
  Angle a;
  a.exact_ = r;
  a.value_ = pi_value(r);
  return a;
}

Angle Angle::from_radians(double radians) {
  Angle a;
  a.exact_.reset();
  a.value_ = radians;
  return a;
}

Angle Angle::snap(double radians, std::int64_t max_den) {
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(radians));
  for (std::int64_t q = 1; q <= max_den; ++q) {
    const double p = std::round(radians * static_cast<double>(q) / std::numbers::pi);
    if (std::abs(p) > 1e15) break;
    const Rational r(static_cast<std::int64_t>(p), q);
    if (std::abs(pi_value(r) - radians) <= tol) return pi_times(r);
  }
  return from_radians(radians);
}

Angle Angle::normalized() const {
  if (exact_) {
    // reduce num/den modulo 2
    const std::int64_t period = 2 * exact_->den();
    std::int64_t n = exact_->num() % period;
    if (n < 0) n += period;
    return pi_times(Rational(n, exact_->den()));
  }
  double v = std::fmod(value_, 2.0 * std::numbers::pi);
  if (v < 0) v += 2.0 * std::numbers::pi;
  if (v >= 2.0 * std::numbers::pi) v = 0.0;
  return from_radians(v);
}

Angle Angle::operator-() const {
  if (exact_) return pi_times(-*exact_);
  return from_radians(-value_);
}

Angle operator+(const Angle& a, const Angle& b) {
  if (a.exact_ && b.exact_) {
    try {
      return Angle::pi_times(*a.exact_ + *b.exact_);
    } catch (const std::overflow_error&) {
    }
  }
  return Angle::from_radians(a.value_ + b.value_);
}

Angle operator-(const Angle& a, const Angle& b) { return a + (-b); }

Angle operator*(const Angle& a, std::int64_t k) { return a * Rational(k); }

Angle operator/(const Angle& a, std::int64_t k) { return a * Rational(1, k); }

Angle operator*(const Angle& a, const Rational& r) {
  if (a.exact_) {
    try {
      return Angle::pi_times(*a.exact_ * r);
    } catch (const std::overflow_error&) {
    }
  }
  return Angle::from_radians(a.value_ * r.to_double());
}

int compare(const Angle& a, const Angle& b) {
  if (a.exact_ && b.exact_) {
    const auto c = *a.exact_ <=> *b.exact_;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  const double d = a.value_ - b.value_;
  if (std::abs(d) <= Angle::kTolerance) return 0;
  return d < 0 ? -1 : 1;
}

std::string Angle::to_string() const {
  if (exact_) {
    if (exact_->num() == 0) return "0";
    if (exact_->den() == 1) return std::to_string(exact_->num()) + "pi";
    return std::to_string(exact_->num()) + "/" + std::to_string(exact_->den()) + "pi";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

Angle parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const auto fail = [&]() -> Angle { throw DomainError("cannot parse angle '" + std::string(text) + "'"); };
  if (s.empty()) return fail();
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) {
    // plain decimal radians
    if (auto r = parse_rational(s); r && r->num() == 0) return Angle();
    double v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) return fail();
    return Angle::from_radians(v);
  }
  std::string_view left = trim(s.substr(0, pos));
  std::string_view right = trim(s.substr(pos + 2));
  Rational coef(1);
  if (left == "-") {
    coef = Rational(-1);
  } else if (!left.empty() && left != "+") {
    auto r = parse_rational(left);
    if (!r) return fail();
    coef = *r;
  }
  if (!right.empty()) {
    if (right.front() != '/') return fail();
    auto d = parse_rational(right.substr(1));
    if (!d || d->num() == 0) return fail();
    coef = coef / *d;
  }
  return Angle::pi_times(coef);
}

Angle ccw_distance(const Angle& from, const Angle& to) { return (to - from).normalized(); }

}  // namespace zaremba
