#pragma once

#include <functional>
#include <vector>

#include "henon/numerics/tolerances.hpp"

namespace henon::numerics {

struct QuadratureResult {
  double value;
  double error_estimate;
  int evaluations;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Points in
/// `breakpoints` inside (a, b) split the range before adaptation, which keeps
/// kinks of the integrand (e.g. at nodes of |u|^{p-2}) off the quadrature
/// nodes. Throws NumericalError, naming the worst subinterval, if the
/// requested accuracy is not reached within max_intervals.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol,
                           const std::vector<double>& breakpoints = {},
                           int max_intervals = 20000);

/// integrate() with graded panels at singular_points (and the ends a, b when
/// listed): each panel touching one is integrated in x = s + d u^4, so
/// algebraic singularities |x - s|^beta with beta > -1 are resolved without
/// bisecting onto s itself. Plain breakpoints split the range only.
QuadratureResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol,
                                  const std::vector<double>& singular_points,
                                  const std::vector<double>& breakpoints = {},
                                  int max_intervals = 20000);

/// integrate_graded() with absolute/relative targets taken from tol.
inline double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                            const std::vector<double>& singular_points, const Tolerances& tol) {
  return integrate_graded(f, a, b, tol.abs_tol, tol.rel_tol, singular_points).value;
}

/// Composite trapezoid rule on samples y at uniform spacing h.
double trapezoid(const std::vector<double>& y, double h);

/// Composite Simpson rule on samples y at uniform spacing h; an odd number of
/// intervals closes with a three-eighths panel.
double simpson(const std::vector<double>& y, double h);

}  // namespace henon::numerics
