#pragma once

#include <functional>

namespace henon::numerics {

struct RootResult {
  double x;
  double fx;
  int iterations;
};

/// Brent's method on a sign-changing bracket [a, b]. Throws NumericalError
/// naming both endpoint values when f(a) and f(b) share a sign.
RootResult find_root(const std::function<double(double)>& f, double a, double b, double x_tol,
                     int max_iter = 200);

/// Variant taking already computed endpoint values.
RootResult find_root(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double x_tol, int max_iter = 200);

}  // namespace henon::numerics
