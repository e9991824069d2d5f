#include "henon/numerics/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "henon/errors.hpp"

namespace henon::numerics {

void Tolerances::validate() const {
  auto check = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "tolerance " << name << " must be positive and finite, got " << v;
      throw ValidationError(os.str());
    }
  };
  check("abs_tol", abs_tol);
  check("rel_tol", rel_tol);
  check("root_tol", root_tol);
  check("eig_tol", eig_tol);
  if (abs_tol > 1e-6) {
    std::ostringstream os;
    os << "abs_tol must not exceed 1e-6, got " << abs_tol;
    throw ValidationError(os.str());
  }
}

Tolerances Tolerances::tightened(double factor) const {
  Tolerances t = *this;
  t.abs_tol = std::max(abs_tol * factor, 1e-16);
  t.rel_tol = std::max(rel_tol * factor, 2e-14);
  return t;
}

}  // namespace henon::numerics
