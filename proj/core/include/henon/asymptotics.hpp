#pragma once

#include <vector>

#include "henon/spectrum.hpp"

namespace henon {

/// The K negative eigenvalues nu*_j of the gamma = 0 problem.
SpectrumResult limit_spectrum(const HalflineProfile& U0, int K, const Tolerances& tol = {});

/// Integrand pieces of h_j'(0) before the factor -(p-1).
struct HPrimeTerms {
  double weight_term = 0.0;  // int t e^{-t}|U_0|^{p-2} Psi^2
  double shape_term = 0.0;   // int (p-2) e^{-t}|U_0|^{p-4}U_0 V Psi^2
};

HPrimeTerms h_prime_terms(const HalflineProfile& U0, const VProfile& V, const EigenPair& pair,
                          double p, const Tolerances& tol = {});

/// h_j'(0) = -(p-1)(weight_term + shape_term): the gamma-derivative of nu_j at 0.
double h_prime_zero(int j, const HalflineProfile& U0, const VProfile& V, const EigenPair& pair,
                    double p, const Tolerances& tol = {});

/// c*_j = 2N nu*_j + (N-2) h_j'(0).
double c_star(int j, double nu_star, double h_prime0, int N);
/// Alternative grouping (2N nu*_j + N - 2) h_j'(0), kept for comparison.
double c_star_grouped(double nu_star, double h_prime0, int N);

/// mu_j'(alpha) = 2(N+alpha) nu_j - (N-2) d nu_j / d gamma.
double mu_prime_chain(double alpha, double nu_j, double dnu_dgamma, int N);

/// Everything derived from the gamma = 0 problem for one family.
struct LimitData {
  HalflineProfile U0;
  VProfile V;
  SpectrumResult spectrum;
  std::vector<double> nu_star;
  std::vector<double> h_prime0;
  std::vector<double> c_star;
  std::vector<double> c_star_grouped;
};

LimitData compute_limit_data(const Family& fam, const SpectrumSettings& s);

/// d nu_j / d gamma at gamma > 0 by central differences of step dg.
double dnu_dgamma(const Family& fam, int j, double gamma, double dg, const SpectrumSettings& s);

/// One-sided difference quotients (nu_j(g) - nu_j(0))/g for each g in steps,
/// and their Richardson combination (valid for two steps with ratio 2).
struct OneSidedDerivative {
  std::vector<double> steps;
  std::vector<double> quotients;
  double richardson = 0.0;
};
OneSidedDerivative dnu_dgamma_at_zero(const Family& fam, int j, const std::vector<double>& steps,
                                      const SpectrumSettings& s, double nu0);

struct ExpansionSample {
  double alpha = 0.0;
  double mu = 0.0;
  double mu_prime_fd = 0.0;
  double value_error = 0.0;       // |mu - nu* a^2 - c* a| / a
  double derivative_error = 0.0;  // |mu'_fd - 2 nu* a - c*|
};

struct ExpansionReport {
  int j = 1;
  double nu_star = 0.0;
  double h_prime0 = 0.0;
  double c_star = 0.0;
  double c_star_grouped = 0.0;
  std::vector<ExpansionSample> samples;
  bool strictly_decreasing = false;  // mu_j along the grid
  bool errors_decreasing = false;    // both fit-error sequences
};

/// mu_j on alpha_grid (increasing, min >= 10) with central differences of
/// relative step 1e-2; the stencil points use tolerances tightened by 1e-2.
/// limit may be passed to reuse gamma = 0 data.
ExpansionReport expansion_check(const Family& fam, int j, const std::vector<double>& alpha_grid,
                                const SpectrumSettings& s, const LimitData* limit = nullptr);

/// Reports for j = 1..K sharing the spectral solves.
std::vector<ExpansionReport> expansion_check_all(const Family& fam,
                                                 const std::vector<double>& alpha_grid,
                                                 const SpectrumSettings& s,
                                                 const LimitData* limit = nullptr,
                                                 SpectrumCache* cache = nullptr);

/// Least-squares slope (with intercept) of mu_j(a) - nu* a^2 against a.
double fitted_linear_coefficient(const std::vector<double>& alphas, const std::vector<double>& mus,
                                 double nu_star);

}  // namespace henon
