#include "henon/numerics/roots.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "henon/errors.hpp"

namespace henon::numerics {

RootResult find_root(const std::function<double(double)>& f, double a, double b, double x_tol,
                     int max_iter) {
  return find_root(f, a, f(a), b, f(b), x_tol, max_iter);
}

RootResult find_root(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double x_tol, int max_iter) {
  if (fa == 0.0) return {a, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0};
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0)) {
    std::ostringstream os;
    os.precision(10);
    os << "find_root: no sign change on [" << a << ", " << b << "]: f(a)=" << fa
       << ", f(b)=" << fb;
    throw NumericalError(os.str());
  }
  const double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 1; it <= max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, it};
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb)) {
      std::ostringstream os;
      os << "find_root: non-finite function value at x=" << b;
      throw NumericalError(os.str());
    }
  }
  std::ostringstream os;
  os << "find_root: no convergence after " << max_iter << " iterations near x=" << b;
  throw NumericalError(os.str());
}

}  // namespace henon::numerics
