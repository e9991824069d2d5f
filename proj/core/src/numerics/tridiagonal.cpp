#include "henon/numerics/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "henon/errors.hpp"

namespace henon::numerics {

void TridiagonalSystem::validate() const {
  if (diag.empty()) throw ValidationError("TridiagonalSystem: empty diagonal");
  if (off.size() + 1 != diag.size()) {
    throw ValidationError("TridiagonalSystem: off-diagonal length must be n-1");
  }
  if (!mass.empty()) {
    if (mass.size() != diag.size()) throw ValidationError("TridiagonalSystem: mass length must be n");
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if (!(mass[i] > 0.0)) {
        std::ostringstream os;
        os << "TridiagonalSystem: mass entry " << i << " is not positive (" << mass[i] << ")";
        throw ValidationError(os.str());
      }
    }
  }
}

TridiagonalSystem TridiagonalSystem::symmetrized() const {
  validate();
  if (mass.empty()) return *this;
  TridiagonalSystem s;
  const std::size_t n = size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = 1.0 / std::sqrt(mass[i]);
  s.diag.resize(n);
  s.off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) s.diag[i] = diag[i] * r[i] * r[i];
  for (std::size_t i = 0; i + 1 < n; ++i) s.off[i] = off[i] * r[i] * r[i + 1];
  return s;
}

std::size_t tridiag_count_below(const TridiagonalSystem& sys, double x) {
  const TridiagonalSystem m = sys.mass.empty() ? sys : sys.symmetrized();
  const std::size_t n = m.size();
  std::size_t count = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : m.off[i - 1] * m.off[i - 1];
    d = (m.diag[i] - x) - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace {

void gershgorin(const TridiagonalSystem& m, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(m.off[i - 1]);
    if (i + 1 < n) r += std::abs(m.off[i]);
    lo = std::min(lo, m.diag[i] - r);
    hi = std::max(hi, m.diag[i] + r);
  }
}

}  // namespace

std::vector<double> tridiag_smallest(const TridiagonalSystem& sys, std::size_t k, double tol) {
  if (k == 0) return {};
  const TridiagonalSystem m = sys.symmetrized();
  if (k > m.size()) throw ValidationError("tridiag_smallest: k exceeds the matrix size");
  double glo, ghi;
  gershgorin(m, glo, ghi);
  std::vector<double> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    // j-th eigenvalue: smallest x with count_below(x) >= j+1.
    double lo = glo - 1.0, hi = ghi + 1.0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (tridiag_count_below(m, mid) >= j + 1)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<double> tridiag_solve(const TridiagonalSystem& m, double shift,
                                  const std::vector<double>& rhs) {
  const std::size_t n = m.size();
  std::vector<double> c(n), d(n), x(n);
  double piv = m.diag[0] - shift;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) piv = (m.diag[i] - shift) - m.off[i - 1] * c[i - 1];
    if (piv == 0.0) {
      std::ostringstream os;
      os << "tridiag_solve: zero pivot at row " << i;
      throw NumericalError(os.str());
    }
    c[i] = i + 1 < n ? m.off[i] / piv : 0.0;
    d[i] = (rhs[i] - (i > 0 ? m.off[i - 1] * d[i - 1] : 0.0)) / piv;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

std::vector<double> tridiag_eigenvector(const TridiagonalSystem& m, double lambda) {
  const std::size_t n = m.size();
  const double scale = std::max(1.0, std::abs(lambda));
  const double shift = lambda + 1e-10 * scale;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (int it = 0; it < 4; ++it) {
    v = tridiag_solve(m, shift, v);
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("tridiag_eigenvector: breakdown");
    for (double& x : v) x /= nrm;
  }
  return v;
}

}  // namespace henon::numerics
