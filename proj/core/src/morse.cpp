#include "henon/morse.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <sstream>

#include "henon/errors.hpp"
#include "henon/numerics/roots.hpp"

namespace henon {

namespace {

long long binom(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

void require_mu(const SpectrumResult& s) {
  if (s.mu.empty()) throw ValidationError("morse: spectrum carries no mu values (alpha unset)");
}

}  // namespace

long long dim_sph(int N, int ell) {
  if (N < 3 || ell < 0) throw ValidationError("dim_sph: need N >= 3 and ell >= 0");
  return binom(N + ell - 1, N - 1) - binom(N + ell - 3, N - 1);
}

double lambda_ell(int N, int ell) { return static_cast<double>(ell) * (ell + N - 2.0); }

double degeneracy_gap(double mu, double lambda) {
  return std::abs(mu + lambda) / std::max(1.0, lambda);
}

MorseReport morse_index(const ProblemParams& params, const SpectrumResult& spectrum,
                        double degeneracy_tol) {
  require_mu(spectrum);
  MorseReport r;
  r.alpha = spectrum.alpha.value_or(params.alpha);
  const double bound = std::abs(spectrum.mu.front());
  r.margin = std::numeric_limits<double>::infinity();
  int ell = 0;
  for (;; ++ell) {
    const double lam = lambda_ell(params.N, ell);
    for (std::size_t i = 0; i < spectrum.mu.size(); ++i) {
      const double v = spectrum.mu[i] + lam;
      r.margin = std::min(r.margin, std::abs(v));
      if (degeneracy_gap(spectrum.mu[i], lam) < degeneracy_tol) r.near_degenerate = true;
      if (v < 0.0) {
        r.E_minus.push_back({static_cast<int>(i) + 1, ell, v});
        r.m += dim_sph(params.N, ell);
        if (ell == 0) ++r.radial_count;
      }
    }
    // Pairs beyond this ell satisfy mu_i + lambda > lambda - |mu_1| >= 0.
    if (lam >= bound) break;
  }
  r.ell_max_scanned = ell;
  return r;
}

Nondegeneracy nondegenerate(const ProblemParams& params, const SpectrumResult& spectrum,
                            double tol) {
  require_mu(spectrum);
  Nondegeneracy out;
  out.gap = std::numeric_limits<double>::infinity();
  const double bound = std::abs(spectrum.mu.front());
  for (int ell = 0;; ++ell) {
    const double lam = lambda_ell(params.N, ell);
    for (std::size_t i = 0; i < spectrum.mu.size(); ++i) {
      const double g = degeneracy_gap(spectrum.mu[i], lam);
      if (g < out.gap) {
        out.gap = g;
        out.i = static_cast<int>(i) + 1;
        out.ell = ell;
      }
    }
    if (lam >= bound) break;
  }
  out.nondegenerate = out.gap > tol;
  return out;
}

double expansion_seed(double nu_star, double c_star, double lambda) {
  if (!(nu_star < 0.0)) return 0.0;
  const double disc = c_star * c_star - 4.0 * nu_star * lambda;
  if (disc < 0.0) return 0.0;
  const double a = (-c_star - std::sqrt(disc)) / (2.0 * nu_star);
  return a > 0.0 ? a : 0.0;
}

namespace {

long long morse_at(SpectrumCache& cache, double alpha, double tol) {
  const auto& f = cache.family();
  return morse_index({f.N, f.p, f.K, alpha}, *cache.at(alpha), tol).m;
}

BifurcationPoint refine_point(SpectrumCache& cache, int i, int ell, double a, double fa, double b,
                              double fb, double seed, const BifurcationOptions& opt) {
  const auto& fam = cache.family();
  const double lam = lambda_ell(fam.N, ell);
  auto f = [&](double x) { return cache.mu(x)[i - 1] + lam; };
  if (seed > a && seed < b) {
    const double fs = f(seed);
    if ((fs > 0.0) == (fa > 0.0)) {
      a = seed;
      fa = fs;
    } else {
      b = seed;
      fb = fs;
    }
  }
  const auto root = numerics::find_root(f, a, fa, b, fb, 1e-13 * b);
  BifurcationPoint pt;
  pt.i = i;
  pt.ell = ell;
  pt.alpha = root.x;
  pt.lambda = lam;
  pt.residual = f(root.x);
  pt.seed = seed;

  const auto spec = cache.at(root.x);
  const double bound = std::abs(spec->mu.front()) + 1.0;
  for (int l = 1;; ++l) {
    const double lj = lambda_ell(fam.N, l);
    for (std::size_t j = 0; j < spec->mu.size(); ++j) {
      const double g = degeneracy_gap(spec->mu[j], lj);
      if (g <= opt.degeneracy_tol) {
        pt.resonant_set.push_back({static_cast<int>(j) + 1, l, g});
        pt.resonant_dimension += dim_sph(fam.N, l);
      }
    }
    if (lj > bound) break;
  }

  // Side Morse indices with eps halved until two consecutive widths agree.
  const double a_min = alpha_p(fam.N, fam.p);
  double eps = 1e-2 * root.x;
  long long lo = 0, hi = 0;
  bool have = false;
  for (int it = 0; it < 10; ++it) {
    if (root.x - eps <= a_min) {
      eps *= 0.5;
      continue;
    }
    const long long l2 = morse_at(cache, root.x - eps, opt.degeneracy_tol);
    const long long h2 = morse_at(cache, root.x + eps, opt.degeneracy_tol);
    if (have && l2 == lo && h2 == hi) break;
    lo = l2;
    hi = h2;
    have = true;
    eps *= 0.5;
  }
  pt.eps = have ? 2.0 * eps : eps;
  pt.morse_below = lo;
  pt.morse_above = hi;
  pt.morse_jump = hi - lo;
  return pt;
}

}  // namespace

BifurcationSearch find_bifurcations(SpectrumCache& cache, int i, const std::vector<int>& ell_range,
                                    std::pair<double, double> alpha_window,
                                    const BifurcationOptions& opt) {
  const auto& fam = cache.family();
  const auto [a_lo, a_hi] = alpha_window;
  const double ap = alpha_p(fam.N, fam.p);
  if (!(a_lo > ap) || !(a_hi > a_lo)) {
    std::ostringstream os;
    os << "find_bifurcations: window must satisfy alpha_p=" << ap << " < alpha_lo < alpha_hi, got ("
       << a_lo << ", " << a_hi << ")";
    throw ValidationError(os.str());
  }
  if (i < 1 || i > fam.K) {
    std::ostringstream os;
    os << "find_bifurcations: i must lie in [1, " << fam.K << "], got " << i;
    throw ValidationError(os.str());
  }
  if (opt.samples < 2) throw ValidationError("find_bifurcations: need at least 2 samples");

  BifurcationSearch out;
  std::vector<double> grid(opt.samples);
  for (int k = 0; k < opt.samples; ++k) {
    grid[k] = a_lo * std::pow(a_hi / a_lo, static_cast<double>(k) / (opt.samples - 1));
  }
  grid.back() = a_hi;
  {
    std::vector<std::future<double>> jobs;
    for (double a : grid) {
      jobs.push_back(std::async(std::launch::async, [&cache, a, i] { return cache.mu(a)[i - 1]; }));
    }
    for (std::size_t k = 0; k < grid.size(); ++k) out.samples.emplace_back(grid[k], jobs[k].get());
  }
  for (std::size_t k = 1; k < out.samples.size(); ++k) {
    if (!(out.samples[k].second < out.samples[k - 1].second)) out.monotone_window = false;
  }
  for (int ell = 1;; ++ell) {
    if (out.samples.front().second + lambda_ell(fam.N, ell) > 0.0) {
      out.ell_min_admissible = ell;
      break;
    }
  }

  struct Task {
    int ell;
    double a, fa, b, fb, seed;
  };
  std::vector<Task> tasks;
  for (int ell : ell_range) {
    if (ell <= 0) {
      out.skipped_ells.push_back(ell);
      continue;
    }
    const double lam = lambda_ell(fam.N, ell);
    double seed = 0.0;
    if (opt.limit != nullptr && i <= static_cast<int>(opt.limit->nu_star.size())) {
      seed = expansion_seed(opt.limit->nu_star[i - 1], opt.limit->c_star[i - 1], lam);
    }
    bool any = false;
    for (std::size_t k = 1; k < out.samples.size(); ++k) {
      const double f0 = out.samples[k - 1].second + lam, f1 = out.samples[k].second + lam;
      if ((f0 > 0.0) != (f1 > 0.0)) {
        tasks.push_back({ell, out.samples[k - 1].first, f0, out.samples[k].first, f1, seed});
        any = true;
      }
    }
    if (!any) out.skipped_ells.push_back(ell);
  }

  std::vector<std::future<BifurcationPoint>> jobs;
  for (const auto& t : tasks) {
    jobs.push_back(std::async(std::launch::async, [&cache, i, t, &opt] {
      return refine_point(cache, i, t.ell, t.a, t.fa, t.b, t.fb, t.seed, opt);
    }));
  }
  for (auto& j : jobs) out.points.push_back(j.get());
  std::sort(out.points.begin(), out.points.end(), [](const auto& x, const auto& y) {
    return x.ell != y.ell ? x.ell < y.ell : x.alpha < y.alpha;
  });
  return out;
}

}  // namespace henon
