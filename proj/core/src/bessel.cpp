#include "zaremba/bessel.hpp"

#include <cmath>
#include <functional>

#include "zaremba/errors.hpp"

namespace zaremba {

namespace {

double kth_root(const std::function<double(double)>& f, int k, double start) {
  if (k < 1) throw DomainError("zero index must be >= 1");
  const double step = 0.05;
  double a = start;
  double fa = f(a);
  int found = 0;
  for (int guard = 0; guard < 1'000'000; ++guard) {
    const double b = a + step;
    const double fb = f(b);
    if (fa == 0.0 || fa * fb < 0.0) {
      if (++found == k) {
        double lo = a, hi = b, flo = fa;
        if (fa == 0.0) return a;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  throw ConvergenceError("Bessel zero search did not terminate", {});
}

}  // namespace

double bessel_zero(double nu, int k) {
  if (nu < 0) throw DomainError("order must be nonnegative");
  return kth_root([nu](double x) { return std::cyl_bessel_j(nu, x); }, k, 1e-3);
}

double bessel_derivative_zero(double nu, int k) {
  if (nu < 0) throw DomainError("order must be nonnegative");
  auto df = [nu](double x) {
    if (nu == 0.0) return -std::cyl_bessel_j(1.0, x);
    return 0.5 * (std::cyl_bessel_j(nu - 1.0, x) - std::cyl_bessel_j(nu + 1.0, x));
  };
  return kth_root(df, k, 1e-3);
}

double dirichlet_disk_eigenvalue_1() {
  const double j = bessel_zero(0.0, 1);
  return j * j;
}

double dirichlet_disk_eigenvalue_2() {
  const double j = bessel_zero(1.0, 1);
  return j * j;
}

double neumann_disk_first_nonzero_eigenvalue() {
  const double j = bessel_derivative_zero(1.0, 1);
  return j * j;
}

}  // namespace zaremba
