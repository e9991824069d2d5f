#include "henon/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "henon/errors.hpp"
#include "henon/numerics/ode.hpp"

namespace henon {

using numerics::integrate_ivp;
using numerics::IntegrationError;
using numerics::IvpOptions;

double alpha_p(int N, double p) { return std::max(((N - 2) * p - 2.0 * N) / 2.0, 0.0); }

double alpha_of_gamma(int N, double gamma) { return (N - 2.0) / gamma - N; }

void ProblemParams::validate() const {
  std::ostringstream os;
  if (N < 3) {
    os << "N must be >= 3, got " << N;
    throw ValidationError(os.str());
  }
  if (!(p > 2.0) || !std::isfinite(p)) {
    os << "p must be > 2, got " << p;
    throw ValidationError(os.str());
  }
  if (K < 1) {
    os << "K must be >= 1, got " << K;
    throw ValidationError(os.str());
  }
  const double ap = alpha_p(N, p);
  if (!(alpha > ap) || !std::isfinite(alpha)) {
    os << "alpha must exceed alpha_p = " << ap << " (N=" << N << ", p=" << p << "), got "
       << alpha;
    throw ValidationError(os.str());
  }
}

double HalflineProfile::potential(double t) const {
  return (p - 1.0) * std::exp((gamma - 1.0) * t) * std::pow(std::abs(U(t)), p - 2.0);
}

namespace {

using State2 = std::array<double, 2>;

// Profiles are integrated this much tighter than requested so that the
// independently evaluated residual lands below the requested tolerance.
constexpr double kProfileTightening = 1e-3;

double signed_pow(double u, double p) { return std::pow(std::abs(u), p - 2.0) * u; }

}  // namespace

RadialSolution solve_radial(const ProblemParams& params, const Tolerances& tol,
                            const RadialOptions& opt) {
  params.validate();
  tol.validate();
  if (!(opt.initial_value > 0.0) || !(opt.h > 0.0) || !(opt.h0 > 0.0) || !(opt.r_max > opt.h0)) {
    throw ValidationError("solve_radial: initial_value, h, h0 must be positive and r_max > h0");
  }
  const int N = params.N;
  const double p = params.p, a = params.alpha, c = opt.initial_value;
  const double cp = std::pow(c, p - 1.0);

  auto taylor = [&](double r) -> State2 {
    const double ra = std::pow(r, 1.0 + a);
    return {c - cp * ra * r / ((2.0 + a) * (N + a)), -cp * ra / (N + a)};
  };
  auto rhs = [&](double r, const State2& y) -> State2 {
    return {y[1], -(N - 1.0) / r * y[1] - std::pow(r, a) * signed_pow(y[0], p)};
  };

  IvpOptions io;
  io.terminal_event_count = static_cast<std::size_t>(params.K);
  numerics::Trajectory<2> traj;
  try {
    traj = integrate_ivp<2>(rhs, opt.h0, taylor(opt.h0), opt.r_max,
                            tol.tightened(kProfileTightening), io);
  } catch (const IntegrationError& e) {
    std::ostringstream os;
    os << "insufficient oscillation: integration stopped at r=" << e.last_time() << " ("
       << e.what() << ")";
    throw NumericalError(os.str());
  }
  const auto events = traj.events();
  if (events.size() < static_cast<std::size_t>(params.K)) {
    std::ostringstream os;
    os << "insufficient oscillation: found " << events.size() << " of " << params.K
       << " zeros before r_max=" << opt.r_max;
    throw NumericalError(os.str());
  }
  const double RK = events[params.K - 1].time;
  const double beta = (2.0 + a) / (p - 2.0);
  const double S = std::pow(RK, beta);

  const double hs_target = std::min(opt.h, 1.0 / (200.0 * (N + a)));
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / hs_target));
  const double hs = 1.0 / static_cast<double>(n);
  std::vector<double> vals(n + 1), ders(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = static_cast<double>(i) * hs;
    const double s = std::min(r * RK, RK);
    const State2 y = s < opt.h0 ? taylor(s) : traj.eval(s);
    vals[i] = S * y[0];
    ders[i] = S * RK * y[1];
  }
  vals[n] = 0.0;

  RadialSolution sol;
  sol.params = params;
  sol.profile = GridFunction(0.0, hs, std::move(vals), std::move(ders));
  for (int k = 0; k + 1 < params.K; ++k) sol.zeros.push_back(events[k].time / RK);
  sol.center_value = S * c;
  sol.residual_sup = profile_residual(sol);
  return sol;
}

HalflineProfile solve_halfline(double gamma, double p, int K, double T, double h,
                               const Tolerances& tol, double seed_L) {
  tol.validate();
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    std::ostringstream os;
    os << "solve_halfline: gamma must lie in [0,1), got " << gamma;
    throw ValidationError(os.str());
  }
  if (!(p > 2.0) || K < 1 || !(T > 0.0) || !(h > 0.0) || h > T || !(seed_L > 0.0)) {
    throw ValidationError("solve_halfline: need p > 2, K >= 1, 0 < h <= T, seed_L > 0");
  }
  const double decay = 1.0 - gamma;
  const double T_far = std::max(T, 40.0 / decay) + 1.0;
  const double t_min = -25.0;

  auto rhs = [&](double t, const State2& y) -> State2 {
    return {y[1], gamma * y[1] - std::exp(-decay * t) * signed_pow(y[0], p)};
  };
  auto far_field = [&](double L) -> State2 {
    const double e = std::pow(L, p - 1.0) * std::exp(-decay * T_far);
    return {L - e / decay, e};
  };

  IvpOptions io;
  io.terminal_event_count = static_cast<std::size_t>(K);
  io.max_steps = 400'000;

  double L = seed_L;
  numerics::Trajectory<2> traj;
  double tK = 0.0;
  bool found = false;
  int retries = 0;
  for (int pass = 0; pass < 8; ++pass) {
    bool ok = false;
    try {
      traj = integrate_ivp<2>(rhs, T_far, far_field(L), t_min, tol.tightened(kProfileTightening),
                              io);
      ok = traj.events().size() == static_cast<std::size_t>(K);
    } catch (const IntegrationError&) {
      ok = false;
    }
    if (!ok) {
      // Zeros too far toward -infinity: a larger limit value moves them right.
      if (++retries > 6) break;
      L *= 8.0;
      continue;
    }
    tK = traj.events()[K - 1].time;
    found = true;
    if (std::abs(tK) < 1e-10) break;
    L *= std::exp(-decay * tK / (p - 2.0));
  }
  if (!found) {
    std::ostringstream os;
    os << "solve_halfline: " << K << "-th zero not found above t=" << t_min
       << " after enlarging the limit value to " << L;
    throw NumericalError(os.str());
  }
  // Exact symmetry of the equation moves the K-th zero to t = 0.
  const double kappa = std::exp(-decay * tK / (p - 2.0));

  const auto n = static_cast<std::size_t>(std::llround(T / h));
  const double hs = T / static_cast<double>(n);
  std::vector<double> vals(n + 1), ders(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = std::min(static_cast<double>(i) * hs + tK, T_far);
    const State2 y = traj.eval(std::max(t, tK));
    vals[i] = kappa * y[0];
    ders[i] = kappa * y[1];
  }
  vals[0] = 0.0;

  HalflineProfile prof;
  prof.gamma = gamma;
  prof.p = p;
  prof.K = K;
  prof.limit_L = kappa * L;
  prof.truncation_T = T;
  prof.U = GridFunction(0.0, hs, std::move(vals), std::move(ders));
  const auto ev = traj.events();
  for (int k = K - 2; k >= 0; --k) {
    const double z = ev[k].time - tK;
    if (!(z > 0.0 && z < T)) {
      std::ostringstream os;
      os << "solve_halfline: interior zero at t=" << z << " outside (0, " << T
         << "); increase T";
      throw NumericalError(os.str());
    }
    prof.zeros.push_back(z);
  }
  prof.residual_sup = profile_residual(prof);
  return prof;
}

HalflineProfile to_halfline(const RadialSolution& sol, double T, const Tolerances& tol,
                            double h) {
  const auto& P = sol.params;
  const double L0 = std::pow(P.N + P.alpha, -2.0 / (P.p - 2.0)) * sol.center_value;
  return solve_halfline(P.gamma(), P.p, P.K, T, h, tol, L0);
}

HalflineProfile limit_profile(double p, int K, double T, const Tolerances& tol, double h,
                              double seed_L) {
  return solve_halfline(0.0, p, K, T, h, tol, seed_L);
}

HalflineProfile u_infinity(const HalflineProfile& U0) {
  if (U0.K % 2 == 1) return U0;
  HalflineProfile out = U0;
  std::vector<double> v = U0.U.values(), d = U0.U.derivs();
  for (double& x : v) x = -x;
  for (double& x : d) x = -x;
  out.U = GridFunction(U0.U.t0(), U0.U.step(), std::move(v), std::move(d));
  out.limit_L = -U0.limit_L;
  return out;
}

namespace {

double v_forcing(const HalflineProfile& U0, VForcing forcing, double t) {
  if (forcing == VForcing::Zero) return 0.0;
  const double u = U0.U(t);
  return -U0.U.derivative(t) + t * std::exp(-t) * signed_pow(u, U0.p);
}

double v_potential(const HalflineProfile& U0, double t) {
  return (U0.p - 1.0) * std::exp(-t) * std::pow(std::abs(U0.U(t)), U0.p - 2.0);
}

}  // namespace

VProfile solve_V(const HalflineProfile& U0, const Tolerances& tol, VForcing forcing) {
  tol.validate();
  if (U0.gamma != 0.0) throw ValidationError("solve_V: profile must be the gamma = 0 member");
  const double T = U0.T();
  using State4 = std::array<double, 4>;
  // Particular solution (V(0)=V'(0)=0) and homogeneous solution (V(0)=0, V'(0)=1).
  auto rhs = [&](double t, const State4& y) -> State4 {
    const double q = v_potential(U0, t);
    return {y[1], -q * y[0] - v_forcing(U0, forcing, t), y[3], -q * y[2]};
  };
  IvpOptions io;
  io.detect_events = false;
  io.max_step = 0.25;
  const auto traj = integrate_ivp<4>(rhs, 0.0, State4{0.0, 0.0, 0.0, 1.0}, T,
                                     tol.tightened(kProfileTightening), io);
  const State4 yT = traj.states().back();
  const double scale = std::max({1.0, std::abs(yT[2]), std::abs(yT[0])});
  if (std::abs(yT[3]) < 1e-12 * scale) {
    std::ostringstream os;
    os << "solve_V: singular closure, homogeneous slope at T=" << T << " is " << yT[3];
    throw NumericalError(os.str());
  }
  const double c = -yT[1] / yT[3];

  const std::size_t n = U0.U.size();
  std::vector<double> vals(n), ders(n);
  for (std::size_t i = 0; i < n; ++i) {
    const State4 y = traj.eval(std::min(U0.U.node(i), T));
    vals[i] = y[0] + c * y[2];
    ders[i] = y[1] + c * y[3];
  }
  VProfile out;
  out.truncation_T = T;
  out.V = GridFunction(0.0, U0.U.step(), std::move(vals), std::move(ders));
  out.residual_sup = profile_residual(out, U0, forcing);
  return out;
}

double divergence_residual(const GridFunction& y, const std::function<double(double)>& w,
                           const std::function<double(double, double)>& g, double t_end) {
  // 3-point Gauss-Legendre on [0,1].
  static constexpr double gx[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
  static constexpr double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  auto gauss = [&](double a, double b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double t = a + (b - a) * gx[k];
      s += gw[k] * g(t, y(t));
    }
    return s * (b - a);
  };
  const double t0 = y.t0();
  const double flux0 = w(t0) * y.derivative(t0);
  double integral = 0.0, sup_res = 0.0, sup_flux = std::abs(flux0);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double a = y.node(i);
    if (a >= t_end) break;
    const double b = std::min(y.node(i + 1), t_end);
    const double m = 0.5 * (a + b);
    const double half = integral + gauss(a, m);
    const double fm = w(m) * y.derivative(m);
    sup_res = std::max(sup_res, std::abs(fm - flux0 + half));
    integral = half + gauss(m, b);
    const double fb = w(b) * y.derivative(b);
    sup_res = std::max(sup_res, std::abs(fb - flux0 + integral));
    sup_flux = std::max({sup_flux, std::abs(fm), std::abs(fb)});
  }
  return sup_res / std::max(1.0, sup_flux);
}

double profile_residual(const RadialSolution& sol) {
  const auto& P = sol.params;
  const double N = P.N, a = P.alpha, p = P.p;
  return divergence_residual(
      sol.profile, [&](double r) { return std::pow(r, N - 1.0); },
      [&](double r, double u) { return std::pow(r, N - 1.0 + a) * signed_pow(u, p); },
      sol.profile.t_end());
}

double profile_residual(const HalflineProfile& prof) {
  const double g = prof.gamma, p = prof.p;
  return divergence_residual(
      prof.U, [&](double t) { return std::exp(-g * t); },
      [&](double t, double u) { return std::exp(-t) * signed_pow(u, p); }, prof.U.t_end());
}

double profile_residual(const VProfile& v, const HalflineProfile& U0, VForcing forcing) {
  return divergence_residual(
      v.V, [](double) { return 1.0; },
      [&](double t, double x) { return v_potential(U0, t) * x + v_forcing(U0, forcing, t); },
      v.V.t_end());
}

std::vector<double> grid_sign_changes(const GridFunction& f) {
  std::vector<double> out;
  const auto& v = f.values();
  int last = 0;
  std::size_t last_i = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int s = v[i] > 0.0 ? 1 : (v[i] < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) {
      const double a = f.node(last_i), b = f.node(i);
      const double fa = v[last_i], fb = v[i];
      out.push_back(a - fa * (b - a) / (fb - fa));
    }
    last = s;
    last_i = i;
  }
  return out;
}

std::vector<double> auxiliary_zeros(const HalflineProfile& U0) {
  std::vector<double> w(U0.U.size()), dw(U0.U.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = U0.U.derivs()[i] - U0.U.values()[i] / (U0.p - 2.0);
  }
  return grid_sign_changes(GridFunction(U0.U.t0(), U0.U.step(), std::move(w), std::move(dw)));
}

}  // namespace henon
