#include "henon/asymptotics.hpp"

#include <cmath>
#include <future>
#include <sstream>

#include "henon/errors.hpp"
#include "henon/numerics/quadrature.hpp"

namespace henon {

SpectrumResult limit_spectrum(const HalflineProfile& U0, int K, const Tolerances& tol) {
  if (U0.gamma != 0.0) throw ValidationError("limit_spectrum: profile must be the gamma = 0 member");
  return negative_spectrum(0.0, U0, K, tol);
}

HPrimeTerms h_prime_terms(const HalflineProfile& U0, const VProfile& V, const EigenPair& pair,
                          double p, const Tolerances& tol) {
  const double T = std::min({U0.T(), V.V.t_end(), pair.psi.t_end()});
  // |U_0|^{p-3} is unbounded at the zeros of U_0 when p < 3, so those are
  // graded; panels of width 1/10 keep the adaptive estimate local elsewhere.
  std::vector<double> singular(U0.zeros), cuts;
  singular.push_back(0.0);
  for (double t = 0.1; t < T; t += 0.1) cuts.push_back(t);

  auto weight = [&](double t) {
    const double u = U0.U(t), psi = pair.psi(t);
    return t * std::exp(-t) * std::pow(std::abs(u), p - 2.0) * psi * psi;
  };
  auto shape = [&](double t) {
    const double u = U0.U(t);
    if (u == 0.0) return 0.0;
    const double psi = pair.psi(t);
    return (p - 2.0) * std::exp(-t) * std::pow(std::abs(u), p - 3.0) * (u > 0 ? 1.0 : -1.0) *
           V.V(t) * psi * psi;
  };
  const double abs_tol = std::min(tol.abs_tol, 1e-11), rel_tol = std::min(tol.rel_tol, 1e-10);
  HPrimeTerms out;
  try {
    out.weight_term =
        numerics::integrate_graded(weight, 0.0, T, abs_tol, rel_tol, singular, cuts, 200000).value;
    out.shape_term =
        numerics::integrate_graded(shape, 0.0, T, abs_tol, rel_tol, singular, cuts, 200000).value;
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "h_prime_zero: quadrature failed (" << e.what() << "); zeros of U_0 at";
    for (double z : U0.zeros) os << ' ' << z;
    throw NumericalError(os.str());
  }
  return out;
}

double h_prime_zero(int j, const HalflineProfile& U0, const VProfile& V, const EigenPair& pair,
                    double p, const Tolerances& tol) {
  if (pair.j != j) {
    std::ostringstream os;
    os << "h_prime_zero: eigenpair index " << pair.j << " does not match j=" << j;
    throw ValidationError(os.str());
  }
  const auto terms = h_prime_terms(U0, V, pair, p, tol);
  return -(p - 1.0) * (terms.weight_term + terms.shape_term);
}

double c_star(int /*j*/, double nu_star, double h_prime0, int N) {
  return 2.0 * N * nu_star + (N - 2.0) * h_prime0;
}

double c_star_grouped(double nu_star, double h_prime0, int N) {
  return (2.0 * N * nu_star + N - 2.0) * h_prime0;
}

double mu_prime_chain(double alpha, double nu_j, double dnu_dgamma, int N) {
  return 2.0 * (N + alpha) * nu_j - (N - 2.0) * dnu_dgamma;
}

LimitData compute_limit_data(const Family& fam, const SpectrumSettings& s) {
  LimitData d;
  d.U0 = limit_profile(fam.p, fam.K, s.T, s.tol, s.h);
  d.V = solve_V(d.U0, s.tol);
  d.spectrum = limit_spectrum(d.U0, fam.K, s.tol);
  for (const auto& e : d.spectrum.pairs) {
    const double hp = h_prime_zero(e.j, d.U0, d.V, e, fam.p, s.tol);
    d.nu_star.push_back(e.nu);
    d.h_prime0.push_back(hp);
    d.c_star.push_back(c_star(e.j, e.nu, hp, fam.N));
    d.c_star_grouped.push_back(c_star_grouped(e.nu, hp, fam.N));
  }
  return d;
}

namespace {

constexpr double kStencilTightening = 1e-2;

double nu_at_gamma(const Family& fam, int j, double gamma, const SpectrumSettings& s) {
  const auto U = solve_halfline(gamma, fam.p, fam.K, s.T, s.h, s.tol);
  return negative_spectrum(gamma, U, fam.K, s.tol).pairs.at(j - 1).nu;
}

}  // namespace

double dnu_dgamma(const Family& fam, int j, double gamma, double dg, const SpectrumSettings& s) {
  if (!(dg > 0.0) || !(gamma - dg >= 0.0)) {
    throw ValidationError("dnu_dgamma: need 0 < dg <= gamma");
  }
  return (nu_at_gamma(fam, j, gamma + dg, s) - nu_at_gamma(fam, j, gamma - dg, s)) / (2.0 * dg);
}

OneSidedDerivative dnu_dgamma_at_zero(const Family& fam, int j, const std::vector<double>& steps,
                                      const SpectrumSettings& s, double nu0) {
  OneSidedDerivative out;
  out.steps = steps;
  for (double g : steps) out.quotients.push_back((nu_at_gamma(fam, j, g, s) - nu0) / g);
  if (steps.size() == 2 && std::abs(steps[0] - 2.0 * steps[1]) < 1e-12 * steps[0]) {
    out.richardson = 2.0 * out.quotients[1] - out.quotients[0];
  } else if (steps.size() == 2 && std::abs(steps[1] - 2.0 * steps[0]) < 1e-12 * steps[1]) {
    out.richardson = 2.0 * out.quotients[0] - out.quotients[1];
  } else if (!steps.empty()) {
    out.richardson = out.quotients.back();
  }
  return out;
}

std::vector<ExpansionReport> expansion_check_all(const Family& fam,
                                                 const std::vector<double>& alpha_grid,
                                                 const SpectrumSettings& s,
                                                 const LimitData* limit,
                                                 SpectrumCache* cache) {
  if (alpha_grid.empty()) return {};
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    if (alpha_grid[k] < 10.0 || (k > 0 && !(alpha_grid[k] > alpha_grid[k - 1]))) {
      throw ValidationError("expansion_check: alpha grid must be increasing with minimum >= 10");
    }
  }
  LimitData local;
  if (limit == nullptr) {
    local = compute_limit_data(fam, s);
    limit = &local;
  }

  struct Point {
    std::vector<double> mu, mu_prime;
  };
  auto evaluate = [&](double a) {
    auto mu_at = [&](double x) {
      if (cache != nullptr) return cache->mu(x);
      return spectrum_at_alpha({fam.N, fam.p, fam.K, x}, s).mu;
    };
    // The quotient divides solver noise by 2 da, which is about 1e-2 of mu's
    // scale at large alpha, so the stencil points are solved a factor tighter.
    auto stencil_at = [&](double x) {
      SpectrumSettings fine = s;
      fine.tol = s.tol.tightened(kStencilTightening);
      return spectrum_at_alpha({fam.N, fam.p, fam.K, x}, fine).mu;
    };
    const double da = 1e-2 * a;
    Point pt;
    pt.mu = mu_at(a);
    const auto up = stencil_at(a + da), dn = stencil_at(a - da);
    for (int j = 0; j < fam.K; ++j) pt.mu_prime.push_back((up[j] - dn[j]) / (2.0 * da));
    return pt;
  };
  std::vector<std::future<Point>> jobs;
  for (double a : alpha_grid) jobs.push_back(std::async(std::launch::async, evaluate, a));
  std::vector<Point> pts;
  for (auto& f : jobs) pts.push_back(f.get());

  std::vector<ExpansionReport> reports;
  for (int j = 1; j <= fam.K; ++j) {
    ExpansionReport r;
    r.j = j;
    r.nu_star = limit->nu_star[j - 1];
    r.h_prime0 = limit->h_prime0[j - 1];
    r.c_star = limit->c_star[j - 1];
    r.c_star_grouped = limit->c_star_grouped[j - 1];
    for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
      const double a = alpha_grid[k];
      ExpansionSample smp;
      smp.alpha = a;
      smp.mu = pts[k].mu[j - 1];
      smp.mu_prime_fd = pts[k].mu_prime[j - 1];
      smp.value_error = std::abs(smp.mu - r.nu_star * a * a - r.c_star * a) / a;
      smp.derivative_error = std::abs(smp.mu_prime_fd - 2.0 * r.nu_star * a - r.c_star);
      r.samples.push_back(smp);
    }
    r.strictly_decreasing = true;
    r.errors_decreasing = true;
    for (std::size_t k = 1; k < r.samples.size(); ++k) {
      const auto &prev = r.samples[k - 1], &cur = r.samples[k];
      if (!(cur.mu < prev.mu)) r.strictly_decreasing = false;
      if (!(cur.value_error < prev.value_error) || !(cur.derivative_error < prev.derivative_error)) {
        r.errors_decreasing = false;
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

ExpansionReport expansion_check(const Family& fam, int j, const std::vector<double>& alpha_grid,
                                const SpectrumSettings& s, const LimitData* limit) {
  if (j < 1 || j > fam.K) {
    std::ostringstream os;
    os << "expansion_check: j must lie in [1, " << fam.K << "], got " << j;
    throw ValidationError(os.str());
  }
  auto all = expansion_check_all(fam, alpha_grid, s, limit);
  if (all.empty()) {
    ExpansionReport r;
    r.j = j;
    return r;
  }
  return all[j - 1];
}

double fitted_linear_coefficient(const std::vector<double>& alphas, const std::vector<double>& mus,
                                 double nu_star) {
  const std::size_t n = alphas.size();
  if (n < 2 || mus.size() != n) throw ValidationError("fitted_linear_coefficient: need >= 2 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = alphas[k], y = mus[k] - nu_star * x * x;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / den;
}

}  // namespace henon
