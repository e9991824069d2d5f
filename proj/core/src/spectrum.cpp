#include "henon/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <mutex>
#include <sstream>

#include "henon/errors.hpp"
#include "henon/numerics/ode.hpp"
#include "henon/numerics/quadrature.hpp"
#include "henon/numerics/roots.hpp"
#include "henon/numerics/tridiagonal.hpp"

namespace henon {

using numerics::integrate_ivp;
using numerics::IvpOptions;

namespace {

constexpr double kPi = std::numbers::pi;
// Pruefer angles are integrated at this fraction of the requested tolerance.
constexpr double kPrueferTightening = 1e-2;

double far_exponent(double gamma, double nu) {
  return 0.5 * gamma - std::sqrt(0.25 * gamma * gamma - nu);
}

// Q(t) = (p-1) e^{(gamma-1)t}|U|^{p-2}, the potential of the rewritten operator.
struct Potential {
  const HalflineProfile& U;
  double gamma;
  double operator()(double t) const {
    return (U.p - 1.0) * std::exp((gamma - 1.0) * t) * std::pow(std::abs(U.U(t)), U.p - 2.0);
  }
};

double match_point(const Potential& Q, double nu, double T) {
  const double lo = std::min(1.0, 0.25 * T), hi = T - 1.0;
  // Outer turning point: the largest grid t with Q(t) >= -nu.
  const auto& g = Q.U.U;
  for (std::size_t i = g.size(); i-- > 0;) {
    const double t = g.node(i);
    if (t > T) continue;
    if (Q(t) + nu >= 0.0) return std::clamp(t, lo, hi);
  }
  return std::clamp(std::min(0.5 * T, 5.0), lo, hi);
}

struct Pruefer {
  Potential Q;
  double nu;
  // theta' = cos^2 - gamma sin cos + (Q + nu) sin^2 ; (ln rho)' = sin cos (1 - Q - nu) + gamma cos^2
  std::array<double, 2> operator()(double t, const std::array<double, 2>& y) const {
    const double s = std::sin(y[0]), c = std::cos(y[0]);
    const double q = Q(t) + nu;
    return {c * c - Q.gamma * s * c + q * s * s, s * c * (1.0 - q) + Q.gamma * c * c};
  }
};

struct AngleOnly {
  Potential Q;
  double nu;
  std::array<double, 1> operator()(double t, const std::array<double, 1>& y) const {
    const double s = std::sin(y[0]), c = std::cos(y[0]);
    return {c * c - Q.gamma * s * c + (Q(t) + nu) * s * s};
  }
};

IvpOptions quiet_options() {
  IvpOptions io;
  io.detect_events = false;
  io.max_step = 0.5;
  return io;
}

int left_zero_count(double theta) { return static_cast<int>(std::floor(theta / kPi)); }

int right_zero_count(double theta) {
  // Multiples of pi crossed while moving from theta_right(T) < pi down to theta.
  return theta < 0.0 ? static_cast<int>(std::floor(-theta / kPi)) + 1 : 0;
}

void check_profile(double gamma, const HalflineProfile& U, double T) {
  if (std::abs(U.gamma - gamma) > 1e-14 * std::max(1.0, gamma)) {
    std::ostringstream os;
    os << "profile gamma " << U.gamma << " does not match requested gamma " << gamma;
    throw ValidationError(os.str());
  }
  if (!(T > 2.0) || T > U.U.t_end() + 1e-12) {
    std::ostringstream os;
    os << "truncation T=" << T << " must lie in (2, " << U.U.t_end() << "]";
    throw ValidationError(os.str());
  }
}

double simpson_sq(const std::vector<double>& v, double h) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  return numerics::simpson(sq, h);
}

}  // namespace

std::vector<double> SpectrumResult::nus() const {
  std::vector<double> out;
  for (const auto& e : pairs) out.push_back(e.nu);
  return out;
}

ShootResult shoot_mismatch(double gamma, double nu, const HalflineProfile& U, double T,
                           const Tolerances& tol) {
  check_profile(gamma, U, T);
  if (!(nu <= 0.0)) throw ValidationError("shoot_mismatch: nu must be <= 0");
  const Potential Q{U, gamma};
  const double tm = match_point(Q, nu, T);
  const auto ptol = tol.tightened(kPrueferTightening);
  const AngleOnly f{Q, nu};
  const auto left = integrate_ivp<1>(f, 0.0, {0.0}, tm, ptol, quiet_options());
  const double thR0 = std::atan2(1.0, far_exponent(gamma, nu));
  const auto right = integrate_ivp<1>(f, T, {thR0}, tm, ptol, quiet_options());
  const double thL = left.states().back()[0], thR = right.states().back()[0];
  ShootResult r;
  r.delta = thL - thR;
  r.mismatch = std::sin(r.delta);
  r.interior_zero_count = left_zero_count(thL) + right_zero_count(thR);
  r.t_match = tm;
  return r;
}

double spectral_lower_bound(const HalflineProfile& U) {
  double sup = 0.0;
  const auto& g = U.U;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.node(i);
    sup = std::max(sup, std::exp(-(1.0 - U.gamma) * t) *
                            std::pow(std::abs(g.values()[i]), U.p - 2.0));
  }
  return -(U.p - 1.0) * sup - 1.0;
}

double weighted_inner(const GridFunction& a, const GridFunction& b, double gamma) {
  if (a.size() != b.size() || a.step() != b.step()) {
    throw ValidationError("weighted_inner: grids differ");
  }
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    prod[i] = std::exp(-gamma * a.node(i)) * a.values()[i] * b.values()[i];
  }
  return numerics::simpson(prod, a.step());
}

namespace {

EigenPair build_pair(double gamma, int j, double nu, const HalflineProfile& U, double T,
                     const Tolerances& tol) {
  const Potential Q{U, gamma};
  const double tm = match_point(Q, nu, T);
  const auto ptol = tol.tightened(kPrueferTightening);
  const Pruefer f{Q, nu};
  const auto left = integrate_ivp<2>(f, 0.0, {0.0, 0.0}, tm, ptol, quiet_options());
  const double thR0 = std::atan2(1.0, far_exponent(gamma, nu));
  const auto right = integrate_ivp<2>(f, T, {thR0, 0.0}, tm, ptol, quiet_options());
  const auto yl = left.states().back(), yr = right.states().back();
  const double sigma = std::cos(yl[0] - yr[0]) >= 0.0 ? 1.0 : -1.0;
  const double shift = yl[1] - yr[1];

  const double h = U.U.step();
  const auto n = static_cast<std::size_t>(std::llround(T / h));
  std::vector<double> v(n + 1), d(n + 1);
  // Normalize amplitudes relative to the largest log-amplitude to avoid overflow.
  std::vector<double> th(n + 1), lr(n + 1);
  double lr_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = std::min(static_cast<double>(i) * h, T);
    std::array<double, 2> y;
    if (t <= tm) {
      y = left.eval(t);
    } else {
      y = right.eval(t);
      y[1] += shift;
    }
    th[i] = y[0];
    lr[i] = y[1];
    lr_max = std::max(lr_max, y[1]);
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * h;
    const double rho = std::exp(lr[i] - lr_max);
    const double sgn = t <= tm ? 1.0 : sigma;
    v[i] = sgn * rho * std::sin(th[i]);
    d[i] = sgn * rho * std::cos(th[i]);
  }
  v[0] = 0.0;
  const double nrm = std::sqrt(simpson_sq(v, h));
  for (std::size_t i = 0; i <= n; ++i) {
    v[i] /= nrm;
    d[i] /= nrm;
  }
  EigenPair e;
  e.gamma = gamma;
  e.j = j;
  e.nu = nu;
  e.psi = GridFunction(0.0, h, std::move(v), std::move(d));
  e.norm_error = std::abs(simpson_sq(e.psi.values(), h) - 1.0);
  e.zero_count = static_cast<int>(grid_sign_changes(e.psi).size());
  return e;
}

}  // namespace

SpectrumResult negative_spectrum(double gamma, const HalflineProfile& U, int K,
                                 const Tolerances& tol) {
  tol.validate();
  const double T = U.T();
  check_profile(gamma, U, T);
  const double nu_lo = spectral_lower_bound(U);
  const double nu_hi = 0.0;
  auto delta = [&](double nu) { return shoot_mismatch(gamma, nu, U, T, tol).delta; };
  const double d_lo = delta(nu_lo), d_hi = delta(nu_hi);
  const int below_zero = d_hi > 0.0 ? static_cast<int>(std::ceil(d_hi / kPi)) : 0;
  if (d_lo >= 0.0 || below_zero != K) {
    std::ostringstream os;
    os << "spectral count mismatch: expected " << K << " negative eigenvalues at gamma="
       << gamma << ", angle count gives " << below_zero << " (delta(0)=" << d_hi
       << ", delta(nu_min=" << nu_lo << ")=" << d_lo << ")";
    throw NumericalError(os.str());
  }
  SpectrumResult res;
  res.gamma = gamma;
  for (int j = 1; j <= K; ++j) {
    const double target = (j - 1) * kPi;
    auto f = [&](double nu) { return delta(nu) - target; };
    const double x_tol = tol.eig_tol * 1e-2;
    const auto root =
        numerics::find_root(f, nu_lo, d_lo - target, nu_hi, d_hi - target, x_tol);
    EigenPair e = build_pair(gamma, j, root.x, U, T, tol);
    if (e.zero_count != j - 1) {
      std::ostringstream os;
      os << "spectral count mismatch: eigenfunction " << j << " has " << e.zero_count
         << " interior zeros";
      throw NumericalError(os.str());
    }
    res.pairs.push_back(std::move(e));
  }
  return res;
}

std::vector<double> discretized_spectrum(double gamma, const HalflineProfile& U, double T,
                                         double h, int k, double eig_tol) {
  if (!(h > 0.0) || h > 1e-2) throw ValidationError("discretized_spectrum: need 0 < h <= 1e-2");
  if (k < 0) throw ValidationError("discretized_spectrum: k must be nonnegative");
  check_profile(gamma, U, T);
  const auto n = static_cast<std::size_t>(std::llround(T / h));
  const double hh = T / static_cast<double>(n);
  numerics::TridiagonalSystem sys;
  const std::size_t m = n - 1;  // interior nodes
  sys.diag.resize(m);
  sys.off.resize(m - 1);
  sys.mass.resize(m);
  const double ih2 = 1.0 / (hh * hh);
  for (std::size_t i = 1; i <= m; ++i) {
    const double t = static_cast<double>(i) * hh;
    const double wl = std::exp(-gamma * (t - 0.5 * hh)), wr = std::exp(-gamma * (t + 0.5 * hh));
    const double q = (U.p - 1.0) * std::exp(-t) * std::pow(std::abs(U.U(t)), U.p - 2.0);
    sys.diag[i - 1] = (wl + wr) * ih2 - q;
    if (i < m) sys.off[i - 1] = -wr * ih2;
    sys.mass[i - 1] = std::exp(-gamma * t);
  }
  auto ev = numerics::tridiag_smallest(sys, static_cast<std::size_t>(k), eig_tol);

  // Bisection on the Sturm count resolves eigenvalues only to about
  // eps * 4/h^2. The Rayleigh quotient written with differences
  // v_{i+1} - v_i avoids that cancellation, and its error is quadratic in the
  // eigenvector error.
  const auto sym = sys.symmetrized();
  for (double& lam : ev) {
    const auto y = numerics::tridiag_eigenvector(sym, lam);
    double num = 0.0, den = 0.0, prev = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      const double t = (static_cast<double>(i) + 0.5) * hh;
      const double v = i < m ? y[i] / std::sqrt(sys.mass[i]) : 0.0;
      num += std::exp(-gamma * t) * (v - prev) * (v - prev) * ih2;
      if (i < m) {
        const double ti = static_cast<double>(i + 1) * hh;
        num -= (U.p - 1.0) * std::exp(-ti) * std::pow(std::abs(U.U(ti)), U.p - 2.0) * v * v;
        den += sys.mass[i] * v * v;
      }
      prev = v;
    }
    const double rq = num / den;
    if (std::abs(rq - lam) < 1e-6 * std::max(1.0, std::abs(lam))) lam = rq;
  }
  return ev;
}

std::vector<double> mu_of_alpha(const ProblemParams& params, const SpectrumResult& result) {
  const double s = (params.N + params.alpha) * (params.N + params.alpha);
  std::vector<double> mu;
  for (const auto& e : result.pairs) mu.push_back(s * e.nu);
  return mu;
}

void attach_oracle(SpectrumResult& result, const HalflineProfile& U, double h) {
  const auto fd = discretized_spectrum(result.gamma, U, U.T(), h,
                                       static_cast<int>(result.pairs.size()));
  result.oracle_deltas.clear();
  for (std::size_t j = 0; j < result.pairs.size(); ++j) {
    result.oracle_deltas.push_back(std::abs(result.pairs[j].nu - fd[j]) / std::abs(fd[j]));
  }
}

SpectrumResult spectrum_at_alpha(const ProblemParams& params, const SpectrumSettings& s) {
  params.validate();
  const double gamma = params.gamma();
  const auto U = solve_halfline(gamma, params.p, params.K, s.T, s.h, s.tol);
  SpectrumResult res = negative_spectrum(gamma, U, params.K, s.tol);
  res.alpha = params.alpha;
  res.N = params.N;
  res.mu = mu_of_alpha(params, res);
  if (s.oracle) attach_oracle(res, U, s.h);
  return res;
}

SpectrumCache::SpectrumCache(Family fam, SpectrumSettings settings)
    : fam_(fam), settings_(std::move(settings)) {}

void SpectrumCache::set_backing(Loader load, Storer store) {
  load_ = std::move(load);
  store_ = std::move(store);
}

std::shared_ptr<const SpectrumResult> SpectrumCache::at(double alpha) {
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(alpha);
    if (it != entries_.end()) return it->second;
  }
  std::optional<SpectrumResult> stored;
  if (load_) stored = load_(alpha);
  const bool fresh = !stored.has_value();
  auto res = std::make_shared<const SpectrumResult>(
      fresh ? spectrum_at_alpha({fam_.N, fam_.p, fam_.K, alpha}, settings_) : std::move(*stored));
  if (fresh && store_) store_(alpha, *res);
  std::unique_lock lock(mutex_);
  return entries_.emplace(alpha, std::move(res)).first->second;
}

std::size_t SpectrumCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace henon
