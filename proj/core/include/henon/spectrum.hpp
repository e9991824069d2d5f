#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "henon/profiles.hpp"

namespace henon {

/// Negative eigenvalue nu of
///   -(e^{-gamma t}Psi')' - (p-1)e^{-t}|U|^{p-2}Psi = nu e^{-gamma t} Psi,  Psi(0) = 0,
/// with eigenfunction normalized to int_0^T Psi^2 = 1 and Psi'(0) > 0.
struct EigenPair {
  double gamma = 0.0;
  int j = 1;
  double nu = 0.0;
  GridFunction psi;
  int zero_count = 0;
  double norm_error = 0.0;  // |int Psi^2 - 1| after normalization
};

struct SpectrumResult {
  double gamma = 0.0;
  std::optional<double> alpha;
  int N = 3;
  std::vector<EigenPair> pairs;
  std::vector<double> mu;             // (N+alpha)^2 nu_j, when alpha is set
  std::vector<double> oracle_deltas;  // relative gap to discretized_spectrum, when requested

  std::vector<double> nus() const;
};

/// Result of one shot at a trial nu. The left solution starts at t = 0 with
/// Psi(0) = 0, Psi'(0) = 1, the right one is the decaying solution started at
/// T on the far-field exponent m- = gamma/2 - sqrt(gamma^2/4 - nu). Both are
/// carried in Pruefer form (angle and log-amplitude), so no overflow occurs.
struct ShootResult {
  /// Normalized Wronskian sin(delta) of left and right solutions at t_match.
  double mismatch = 0.0;
  /// Zeros of the matched function in (0,T).
  int interior_zero_count = 0;
  /// theta_left(t_match) - theta_right(t_match); increasing in nu and equal
  /// to (j-1)pi exactly at the j-th eigenvalue.
  double delta = 0.0;
  double t_match = 0.0;
};

ShootResult shoot_mismatch(double gamma, double nu, const HalflineProfile& U, double T,
                           const Tolerances& tol = {});

/// Exactly K negative eigenpairs at gamma for the profile U (U.gamma must equal gamma).
/// Throws NumericalError("spectral count mismatch ...") otherwise.
SpectrumResult negative_spectrum(double gamma, const HalflineProfile& U, int K,
                                 const Tolerances& tol = {});

/// k smallest eigenvalues of the finite-difference discretization on [0,T]
/// with step h and Dirichlet ends (generalized tridiagonal problem).
std::vector<double> discretized_spectrum(double gamma, const HalflineProfile& U, double T,
                                         double h, int k, double eig_tol = 1e-12);

/// mu_j = (N+alpha)^2 nu_j.
std::vector<double> mu_of_alpha(const ProblemParams& params, const SpectrumResult& result);

/// Fill oracle_deltas with |nu_shoot - nu_fd| / |nu_fd| at step h.
void attach_oracle(SpectrumResult& result, const HalflineProfile& U, double h);

struct SpectrumSettings {
  double T = 40.0;
  double h = 1e-3;
  Tolerances tol{};
  bool oracle = false;
};

/// Half-line profile at gamma(alpha) followed by negative_spectrum; mu filled in.
SpectrumResult spectrum_at_alpha(const ProblemParams& params, const SpectrumSettings& s);

/// Lower bound for nu_1: -(p-1) sup e^{-(1-gamma)t}|U|^{p-2} - 1.
double spectral_lower_bound(const HalflineProfile& U);

/// int_0^T e^{-gamma t} a b, by composite Simpson on the common grid.
double weighted_inner(const GridFunction& a, const GridFunction& b, double gamma);

/// Memoized mu_1..mu_K as a function of alpha; concurrent readers, exclusive insertion.
class SpectrumCache {
 public:
  using Loader = std::function<std::optional<SpectrumResult>(double alpha)>;
  using Storer = std::function<void(double alpha, const SpectrumResult&)>;

  SpectrumCache(Family fam, SpectrumSettings settings);
  /// Optional persistent layer consulted on a miss and fed after a fresh solve.
  void set_backing(Loader load, Storer store);

  const Family& family() const { return fam_; }
  const SpectrumSettings& settings() const { return settings_; }

  /// Full spectral result with mu filled in.
  std::shared_ptr<const SpectrumResult> at(double alpha);
  std::vector<double> mu(double alpha) { return at(alpha)->mu; }
  std::size_t size() const;

 private:
  Family fam_;
  SpectrumSettings settings_;
  mutable std::shared_mutex mutex_;
  std::map<double, std::shared_ptr<const SpectrumResult>> entries_;
  Loader load_;
  Storer store_;
};

}  // namespace henon
