#include "henon/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "henon/errors.hpp"

namespace henon::numerics {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  int segment;
  bool operator<(const Panel& o) const { return error < o.error; }
};

/// Interval [s, s + d] (d of either sign) integrated in the local variable u
/// in [0,1]. Graded segments use x = s + d u^4, which turns |x - s|^beta into
/// u^{4 beta + 3}: smooth for beta = -1/2 and never worse than u^{-1+}.
struct Segment {
  double s, d;
  bool graded;

  double operator()(const std::function<double(double)>& f, double u) const {
    if (!graded) return f(s + d * u) * std::abs(d);
    const double u2 = u * u;
    return f(s + d * u2 * u2) * 4.0 * std::abs(d) * u2 * u;
  }
};

Panel gk15(const std::function<double(double)>& f, const std::vector<Segment>& segs, int seg,
           double a, double b, int& evals) {
  const Segment& sg = segs[seg];
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  const double fc = sg(f, c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const double s = sg(f, c - dx) + sg(f, c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  evals += 15;
  return {a, b, rk * hl, std::abs((rk - rg) * hl), seg};
}

QuadratureResult integrate_impl(const std::function<double(double)>& f, double a, double b,
                                double abs_tol, double rel_tol,
                                const std::vector<double>& singular,
                                const std::vector<double>& breakpoints, int max_intervals) {
  if (a == b) return {0.0, 0.0, 0};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  for (double x : singular)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto is_singular = [&](double x) {
    return std::find(singular.begin(), singular.end(), x) != singular.end();
  };

  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], r = cuts[i + 1];
    const bool sl = is_singular(l), sr = is_singular(r);
    if (sl && sr) {
      const double m = 0.5 * (l + r);
      segs.push_back({l, m - l, true});
      segs.push_back({r, m - r, true});
    } else if (sl) {
      segs.push_back({l, r - l, true});
    } else if (sr) {
      segs.push_back({r, l - r, true});
    } else {
      segs.push_back({l, r - l, false});
    }
  }

  int evals = 0;
  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  for (int k = 0; k < static_cast<int>(segs.size()); ++k) {
    Panel p = gk15(f, segs, k, 0.0, 1.0, evals);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  auto where = [&](const Panel& p, double u) {
    const Segment& sg = segs[p.segment];
    return sg.graded ? sg.s + sg.d * u * u * u * u : sg.s + sg.d * u;
  };
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      const Panel& w = heap.top();
      const double x0 = where(w, w.a), x1 = where(w, w.b);
      std::ostringstream os;
      os << "integrate: accuracy not reached on [" << a << ", " << b << "]; worst subinterval ["
         << std::min(x0, x1) << ", " << std::max(x0, x1) << "] with error estimate " << w.error;
      throw NumericalError(os.str());
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      std::ostringstream os;
      os << "integrate: subinterval near x = " << where(p, p.a) << " cannot be bisected further";
      throw NumericalError(os.str());
    }
    Panel l = gk15(f, segs, p.segment, p.a, m, evals), r = gk15(f, segs, p.segment, m, p.b, evals);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  if (!std::isfinite(total)) throw NumericalError("integrate: non-finite integrand");
  return {sign * total, err, evals};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, const std::vector<double>& breakpoints,
                           int max_intervals) {
  return integrate_impl(f, a, b, abs_tol, rel_tol, {}, breakpoints, max_intervals);
}

QuadratureResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol,
                                  const std::vector<double>& singular_points,
                                  const std::vector<double>& breakpoints, int max_intervals) {
  return integrate_impl(f, a, b, abs_tol, rel_tol, singular_points, breakpoints, max_intervals);
}

double trapezoid(const std::vector<double>& y, double h) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  std::size_t m = n - 1;  // intervals
  double tail = 0.0;
  if (m % 2 == 1) {
    tail = 3.0 * h / 8.0 * (y[m - 3] + 3.0 * y[m - 2] + 3.0 * y[m - 1] + y[m]);
    m -= 3;
  }
  double s = 0.0;
  if (m > 0) {
    s = y[0] + y[m];
    for (std::size_t i = 1; i < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
    s *= h / 3.0;
  }
  return s + tail;
}

}  // namespace henon::numerics
