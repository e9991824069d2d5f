#pragma once

namespace henon::numerics {

struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double root_tol = 1e-12;
  double eig_tol = 1e-9;

  /// Throws ValidationError unless all entries are positive and abs_tol <= 1e-6.
  void validate() const;

  /// Integration settings a factor tighter (floored near double precision).
  Tolerances tightened(double factor) const;
  /// Tighter settings used where downstream finite differences amplify solver noise.
  static Tolerances precise() { return {1e-13, 1e-11, 1e-13, 1e-11}; }
};

}  // namespace henon::numerics
