#pragma once

#include <utility>
#include <vector>

#include "henon/asymptotics.hpp"

namespace henon {

/// Dimension of the spherical harmonics of degree ell on S^{N-1}.
long long dim_sph(int N, int ell);
/// Laplace-Beltrami eigenvalue ell(ell + N - 2).
double lambda_ell(int N, int ell);

struct NegativePair {
  int i = 1;
  int ell = 0;
  double value = 0.0;  // mu_i + lambda_ell
};

struct MorseReport {
  double alpha = 0.0;
  long long m = 0;
  std::vector<NegativePair> E_minus;
  int ell_max_scanned = 0;
  double margin = 0.0;  // min over scanned pairs of |mu_i + lambda_ell|
  bool near_degenerate = false;
  long long radial_count = 0;  // pairs with ell = 0
};

/// Relative distance |mu + lambda| / max(1, lambda) used for degeneracy tests.
double degeneracy_gap(double mu, double lambda);

/// Morse index from mu_1..mu_K (spectrum.mu). Scans ell while lambda_ell < |mu_1|.
MorseReport morse_index(const ProblemParams& params, const SpectrumResult& spectrum,
                        double degeneracy_tol = 1e-6);

struct Nondegeneracy {
  bool nondegenerate = true;
  int i = 1;
  int ell = 0;
  double gap = 0.0;  // relative gap of the closest pair
};

Nondegeneracy nondegenerate(const ProblemParams& params, const SpectrumResult& spectrum,
                            double tol = 1e-6);

struct ResonantPair {
  int j = 1;
  int ell = 0;
  double gap = 0.0;
};

struct BifurcationPoint {
  int i = 1;
  int ell = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  double residual = 0.0;  // mu_i(alpha) + lambda_ell
  double seed = 0.0;      // expansion-based initial guess (0 if none)
  long long morse_below = 0;
  long long morse_above = 0;
  long long morse_jump = 0;
  double eps = 0.0;  // half-width used for the side Morse indices
  std::vector<ResonantPair> resonant_set;
  long long resonant_dimension = 0;  // sum of d_ell over the resonant set
};

struct BifurcationSearch {
  std::vector<BifurcationPoint> points;
  int ell_min_admissible = 0;  // least ell >= 1 with mu_i(alpha_lo) + lambda_ell > 0
  bool monotone_window = true; // mu_i sampled strictly decreasing on the window
  std::vector<int> skipped_ells;  // requested ell without a crossing in the window
  std::vector<std::pair<double, double>> samples;  // (alpha, mu_i)
};

struct BifurcationOptions {
  int samples = 24;
  double degeneracy_tol = 1e-6;
  /// Expansion data for root seeding (optional).
  const LimitData* limit = nullptr;
};

/// Roots of alpha -> mu_i(alpha) + lambda_ell inside the window for every ell
/// in ell_range (ell = 0 is never a candidate).
BifurcationSearch find_bifurcations(SpectrumCache& cache, int i, const std::vector<int>& ell_range,
                                    std::pair<double, double> alpha_window,
                                    const BifurcationOptions& opt = {});

/// Positive root of nu* a^2 + c* a + lambda = 0 (0 if none).
double expansion_seed(double nu_star, double c_star, double lambda);

}  // namespace henon
