#pragma once

// Dormand-Prince 5(4) integrator with continuous extension and detection of
// sign changes of the first state component.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include "henon/errors.hpp"
#include "henon/numerics/tolerances.hpp"

namespace henon::numerics {

enum class EventKind { SignChangeComponent0 };

struct Event {
  double time;
  EventKind kind;
};

/// Raised when the step size collapses; carries the last time that was reached.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double last_time)
      : NumericalError(what), last_time_(last_time) {}
  double last_time() const { return last_time_; }

 private:
  double last_time_;
};

template <std::size_t Dim>
class Trajectory {
 public:
  using State = std::array<double, Dim>;

  bool forward() const { return nodes_.size() < 2 || nodes_.back() > nodes_.front(); }
  double start() const { return nodes_.front(); }
  double end() const { return nodes_.back(); }
  std::size_t steps() const { return dense_.size(); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const State> states() const { return states_; }
  std::span<const Event> events() const { return events_; }

  /// Dense-output evaluation; t must lie within [start, end] (either orientation).
  State eval(double t) const {
    const std::size_t k = locate(t);
    if (k == dense_.size()) return states_.back();
    const double theta = (t - nodes_[k]) / step_len_[k];
    return dense_eval(dense_[k], theta);
  }

  /// Extend the trajectory by one accepted step (used by the integrator).
  void append_step(double t1, const State& y1, const std::array<State, 5>& coeffs) {
    step_len_.push_back(t1 - nodes_.back());
    nodes_.push_back(t1);
    states_.push_back(y1);
    dense_.push_back(coeffs);
  }
  void set_initial(double t0, const State& y0) {
    nodes_.assign(1, t0);
    states_.assign(1, y0);
    dense_.clear();
    step_len_.clear();
    events_.clear();
  }
  void add_event(Event e) { events_.push_back(e); }

  /// Cut the trajectory at time t inside the last step (terminal events). The
  /// continuous extension keeps its original parametrization.
  void truncate_last_step(double t, const State& y) {
    nodes_.back() = t;
    states_.back() = y;
  }

  static State dense_eval(const std::array<State, 5>& c, double theta) {
    State y{};
    const double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < Dim; ++i) {
      y[i] = c[0][i] + theta * (c[1][i] + th1 * (c[2][i] + theta * (c[3][i] + th1 * c[4][i])));
    }
    return y;
  }

 private:
  std::size_t locate(double t) const {
    const bool fwd = forward();
    const double lo = fwd ? nodes_.front() : nodes_.back();
    const double hi = fwd ? nodes_.back() : nodes_.front();
    const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
    if (!(t >= lo - slack && t <= hi + slack)) {
      std::ostringstream os;
      os << "trajectory evaluation at t=" << t << " outside [" << lo << ", " << hi << "]";
      throw NumericalError(os.str());
    }
    if (dense_.empty()) return 0;
    std::size_t k;
    if (fwd) {
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - nodes_.begin() - 1, 0));
    } else {
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t, std::greater<double>());
      k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - nodes_.begin() - 1, 0));
    }
    return std::min(k, dense_.size() - 1);
  }

  std::vector<double> nodes_;
  std::vector<State> states_;
  std::vector<std::array<State, 5>> dense_;
  std::vector<double> step_len_;
  std::vector<Event> events_;
};

struct IvpOptions {
  std::size_t max_steps = 2'000'000;
  /// Stop at the n-th detected sign change of component 0 (0: never).
  std::size_t terminal_event_count = 0;
  double initial_step = 0.0;
  double max_step = std::numeric_limits<double>::infinity();
  bool detect_events = true;
};

namespace detail {

template <std::size_t Dim>
double error_norm(const std::array<double, Dim>& err, const std::array<double, Dim>& y0,
                  const std::array<double, Dim>& y1, const Tolerances& tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < Dim; ++i) {
    const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(Dim));
}

inline int strict_sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace detail

/// Integrate y' = rhs(t, y) from t0 to t1 (t1 < t0 allowed).
template <std::size_t Dim, class Rhs>
Trajectory<Dim> integrate_ivp(Rhs&& rhs, double t0, const std::array<double, Dim>& y0, double t1,
                              const Tolerances& tol, const IvpOptions& opt = {}) {
  using State = std::array<double, Dim>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Trajectory<Dim> traj;
  traj.set_initial(t0, y0);
  if (t1 == t0) return traj;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  State y = y0;
  double t = t0;
  State k1 = rhs(t, y);

  // Initial step from the first-derivative scale.
  double h = opt.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sc = tol.abs_tol + tol.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      dd += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / Dim);
    dd = std::sqrt(dd / Dim);
    h = (d0 < 1e-5 || dd < 1e-5) ? 1e-6 : 0.01 * d0 / dd;
    h = std::min({h, span, opt.max_step});
  }
  h = std::min(h, opt.max_step);

  int last_sign = detail::strict_sign(y[0]);
  std::size_t n_events = 0;
  std::size_t n_steps = 0;
  const double h_min_rel = 64.0 * std::numeric_limits<double>::epsilon();

  while (dir * (t1 - t) > 0.0) {
    if (++n_steps > opt.max_steps) {
      throw IntegrationError("integrate_ivp: step limit exceeded", t);
    }
    if (h < h_min_rel * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "integrate_ivp: step-size underflow at t=" << t;
      throw IntegrationError(os.str(), t);
    }
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;

    State tmp{}, k2, k3, k4, k5, k6, k7, y1, err{};
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    k2 = rhs(t + c2 * hs, tmp);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * hs, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * hs, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * hs, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = last ? t1 : t + hs;
    k6 = rhs(t + hs, tmp);
    for (std::size_t i = 0; i < Dim; ++i)
      y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(t_new, y1);
    for (std::size_t i = 0; i < Dim; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    double en = detail::error_norm(err, y, y1, tol);
    if (!std::isfinite(en)) en = 1e10;
    if (en > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    std::array<State, 5> dense{};
    for (std::size_t i = 0; i < Dim; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = hs * k1[i] - ydiff;
      dense[0][i] = y[i];
      dense[1][i] = ydiff;
      dense[2][i] = bspl;
      dense[3][i] = ydiff - hs * k7[i] - bspl;
      dense[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                          d7 * k7[i]);
    }
    traj.append_step(t_new, y1, dense);

    if (opt.detect_events) {
      // Probe the continuous extension so that two zeros inside one step are not missed.
      constexpr std::size_t probes = 4;
      double th_prev = 0.0;
      for (std::size_t q = 1; q <= probes; ++q) {
        const double th = static_cast<double>(q) / probes;
        const double v = q == probes ? y1[0] : Trajectory<Dim>::dense_eval(dense, th)[0];
        const int s = detail::strict_sign(v);
        if (s != 0 && last_sign != 0 && s != last_sign) {
          // Bracketed root of component 0 in theta in (th_prev, th]; bisection then secant.
          double lo = th_prev, hi = th;
          double flo = Trajectory<Dim>::dense_eval(dense, lo)[0];
          double fhi = v;
          const double scale = std::max(1.0, std::abs(t));
          const double tol_theta = tol.root_tol * scale / std::abs(hs);
          for (int it = 0; it < 200 && (hi - lo) > tol_theta; ++it) {
            double mid = 0.5 * (lo + hi);
            if (it % 2 == 1 && fhi != flo) {
              const double sec = hi - fhi * (hi - lo) / (fhi - flo);
              if (sec > lo && sec < hi) mid = sec;
            }
            const double fm = Trajectory<Dim>::dense_eval(dense, mid)[0];
            if (fm == 0.0) {
              lo = hi = mid;
              break;
            }
            if (detail::strict_sign(fm) == detail::strict_sign(flo)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
              fhi = fm;
            }
          }
          const double th_root = 0.5 * (lo + hi);
          traj.add_event({t + th_root * hs, EventKind::SignChangeComponent0});
          ++n_events;
          if (opt.terminal_event_count != 0 && n_events == opt.terminal_event_count) {
            const double te = t + th_root * hs;
            State ye = Trajectory<Dim>::dense_eval(dense, th_root);
            traj.truncate_last_step(te, ye);
            return traj;
          }
        }
        if (s != 0) last_sign = s;
        th_prev = th;
      }
    }

    t = t_new;
    y = y1;
    k1 = k7;
    const double fac = en > 0.0 ? std::min(10.0, 0.9 * std::pow(en, -0.2)) : 10.0;
    h = std::min(h * fac, opt.max_step);
  }
  return traj;
}

}  // namespace henon::numerics
