#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "henon/asymptotics.hpp"
#include "henon/errors.hpp"
#include "henon/numerics/quadrature.hpp"
#include "henon/spectrum.hpp"

using namespace henon;

namespace {

HalflineProfile zero_profile(double gamma, double T, double h) {
  HalflineProfile U;
  U.gamma = gamma;
  U.p = 4.0;
  U.K = 1;
  const auto n = static_cast<std::size_t>(std::llround(T / h)) + 1;
  U.U = GridFunction(0.0, h, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
  U.truncation_T = T;
  U.limit_L = 0.0;
  return U;
}

struct Case {
  int K;
  double alpha;
};

}  // namespace

TEST(Shooting, NoNegativeSpectrumWithoutPotential) {
  for (double g : {0.0, 0.1}) {
    const auto U = zero_profile(g, 40.0, 1e-3);
    for (double nu = -5.0; nu < 0.0; nu += 0.05) {
      const auto r = shoot_mismatch(g, nu, U, 40.0);
      EXPECT_EQ(r.interior_zero_count, 0);
      EXPECT_LT(r.delta, 0.0) << "nu=" << nu;
      EXPECT_LT(r.mismatch, 0.0) << "nu=" << nu;
    }
  }
}

TEST(Discretized, DirichletSpectrumWithoutPotential) {
  // Psi = e^{gamma t/2} phi turns the operator into -phi'' + gamma^2/4 phi.
  const double T = 40.0, h = 1e-3;
  for (double g : {0.0, 0.2}) {
    const auto ev = discretized_spectrum(g, zero_profile(g, T, h), T, h, 3);
    for (int k = 1; k <= 3; ++k) {
      const double exact = g * g / 4.0 + std::pow(k * std::numbers::pi / T, 2);
      EXPECT_NEAR(ev[k - 1], exact, 1e-6 * exact + 1e-9) << "gamma=" << g << " k=" << k;
    }
  }
}

TEST(Shooting, ZeroCountIsMonotoneInNu) {
  const auto U = solve_halfline(0.05, 4.0, 3, 40.0, 1e-3, Tolerances{});
  int prev = -1;
  double prev_delta = -1e300;
  for (double nu = -20.0; nu < 0.0; nu += 0.1) {
    const auto r = shoot_mismatch(0.05, nu, U, 40.0);
    EXPECT_GE(r.interior_zero_count, prev) << "nu=" << nu;
    EXPECT_GT(r.delta, prev_delta) << "nu=" << nu;
    prev = r.interior_zero_count;
    prev_delta = r.delta;
  }
}

TEST(Spectrum, CountOrderingAndNodalStructure) {
  for (int K : {1, 2, 3}) {
    for (double a : {2.0, 5.0, 10.0}) {
      const ProblemParams params{3, 4.0, K, a};
      const auto U = solve_halfline(params.gamma(), 4.0, K, 40.0, 1e-3, Tolerances{});
      const auto res = negative_spectrum(params.gamma(), U, K);
      ASSERT_EQ(static_cast<int>(res.pairs.size()), K);
      for (int j = 1; j <= K; ++j) {
        const auto& e = res.pairs[j - 1];
        EXPECT_LT(e.nu, 0.0);
        if (j > 1) {
          EXPECT_LT(res.pairs[j - 2].nu, e.nu);
        }
        EXPECT_EQ(e.zero_count, j - 1);
        EXPECT_EQ(static_cast<int>(grid_sign_changes(e.psi).size()), j - 1);
        EXPECT_LT(e.norm_error, 1e-10);
        EXPECT_GT(e.psi.derivative(0.0), 0.0);
        EXPECT_GT(e.nu, spectral_lower_bound(U));
        const auto shot = shoot_mismatch(params.gamma(), e.nu, U, 40.0);
        EXPECT_LT(std::abs(shot.mismatch), 1e-8);
        EXPECT_EQ(shot.interior_zero_count, j - 1);
      }
    }
  }
}

TEST(Spectrum, WeightedOrthogonality) {
  for (int K : {2, 3}) {
    const double g = ProblemParams{3, 4.0, K, 5.0}.gamma();
    const auto U = solve_halfline(g, 4.0, K, 40.0, 1e-3, Tolerances{});
    const auto res = negative_spectrum(g, U, K);
    for (int i = 0; i < K; ++i) {
      for (int j = i + 1; j < K; ++j) {
        EXPECT_LT(std::abs(weighted_inner(res.pairs[i].psi, res.pairs[j].psi, g)), 1e-6);
      }
    }
  }
}

TEST(Spectrum, IntegralIdentity) {
  // e^{-gamma t}Psi'(t) = int_t^T (nu e^{-gamma s} + (p-1)e^{-s}|U|^{p-2}) Psi ds
  const int K = 2;
  const double g = ProblemParams{3, 4.0, K, 5.0}.gamma(), T = 40.0;
  const auto U = solve_halfline(g, 4.0, K, T, 1e-3, Tolerances{});
  const auto res = negative_spectrum(g, U, K);
  for (const auto& e : res.pairs) {
    auto f = [&](double s) {
      return (e.nu * std::exp(-g * s) + 3.0 * std::exp(-s) * std::pow(U.U(s), 2)) * e.psi(s);
    };
    for (double t = 0.0; t <= T - 5.0; t += 0.5) {
      const double rhs = numerics::integrate(f, t, T, 1e-12, 1e-10, U.zeros).value;
      EXPECT_NEAR(std::exp(-g * t) * e.psi.derivative(t), rhs, 1e-6) << "j=" << e.j << " t=" << t;
    }
  }
}

TEST(Spectrum, OracleAgreementAndSecondOrderRefinement) {
  for (int K : {1, 2, 3}) {
    const double g = ProblemParams{3, 4.0, K, 5.0}.gamma();
    const auto U = solve_halfline(g, 4.0, K, 40.0, 1e-3, Tolerances{});
    const auto res = negative_spectrum(g, U, K);
    const auto fd1 = discretized_spectrum(g, U, 40.0, 1e-3, K);
    const auto fd2 = discretized_spectrum(g, U, 40.0, 5e-4, K);
    const auto fd0 = discretized_spectrum(g, U, 40.0, 2e-3, K);
    for (int j = 0; j < K; ++j) {
      const double nu = res.pairs[j].nu;
      const double gap1 = std::abs(nu - fd1[j]), gap2 = std::abs(nu - fd2[j]);
      EXPECT_LT(gap1 / std::abs(fd1[j]), 1e-4);
      EXPECT_NEAR(gap1 / gap2, 4.0, 0.4) << "K=" << K << " j=" << j + 1;
      // Drift between successive steps shrinks with h^2.
      EXPECT_NEAR(std::abs(fd0[j] - fd1[j]) / std::abs(fd1[j] - fd2[j]), 4.0, 0.4);
      EXPECT_LT(fd1[j], 0.0);
    }
    // Exactly K negative entries in the discretized spectrum.
    EXPECT_GT(discretized_spectrum(g, U, 40.0, 1e-3, K + 1)[K], 0.0);
  }
}

TEST(Spectrum, LimitMatchesDirectCall) {
  const auto U0 = limit_profile(4.0, 2, 40.0, Tolerances{});
  const auto a = limit_spectrum(U0, 2);
  const auto b = negative_spectrum(0.0, U0, 2);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(a.pairs[j].nu, b.pairs[j].nu, 1e-8);
}

TEST(Spectrum, WrongNodalCountIsReported) {
  const auto U = solve_halfline(0.1, 4.0, 2, 40.0, 1e-3, Tolerances{});
  try {
    negative_spectrum(0.1, U, 1);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("spectral count mismatch"), std::string::npos);
  }
}

TEST(Spectrum, BoundForNonTopEigenvalues) {
  for (int K : {2, 3}) {
    for (double a : {2.0, 5.0, 10.0, 20.0, 40.0}) {
      const auto res = spectrum_at_alpha({3, 4.0, K, a}, SpectrumSettings{});
      for (int i = 0; i < K - 1; ++i) {
        EXPECT_LT(res.mu[i], -(a + 2.0) * (a + 2.0 * 2.0) / 4.0) << "K=" << K << " alpha=" << a;
      }
    }
  }
}

TEST(Spectrum, AuxiliaryFunctionHasAtLeastKZeros) {
  for (int K : {1, 2, 3}) {
    const auto U0 = limit_profile(4.0, K, 40.0, Tolerances{});
    EXPECT_GE(static_cast<int>(auxiliary_zeros(U0).size()), K);
  }
}

TEST(Spectrum, ContinuityInGamma) {
  const int K = 2;
  std::vector<std::vector<double>> nus;
  std::vector<double> gammas;
  for (double g = 0.0; g <= 0.2 + 1e-12; g += 0.02) {
    gammas.push_back(g);
    nus.push_back(negative_spectrum(g, solve_halfline(g, 4.0, K, 40.0, 1e-3, Tolerances{}), K).nus());
  }
  for (int j = 0; j < K; ++j) {
    for (std::size_t k = 1; k + 2 < gammas.size(); ++k) {
      const double step = std::abs(nus[k + 1][j] - nus[k][j]);
      const double around = std::max(std::abs(nus[k][j] - nus[k - 1][j]), std::abs(nus[k + 2][j] - nus[k + 1][j]));
      EXPECT_LE(step, 10.0 * around) << "j=" << j + 1 << " gamma=" << gammas[k];
    }
  }
}

TEST(MuOfAlpha, Examples) {
  SpectrumResult r;
  r.pairs.resize(2);
  r.pairs[0].nu = -0.5;
  r.pairs[1].nu = 0.0;
  const auto mu = mu_of_alpha({3, 4.0, 2, 7.0}, r);
  EXPECT_DOUBLE_EQ(mu[0], -50.0);
  EXPECT_DOUBLE_EQ(mu[1], 0.0);
  const double nu = -0.123456789;
  r.pairs[0].nu = nu;
  EXPECT_NEAR(mu_of_alpha({3, 4.0, 2, 13.7}, r)[0] / std::pow(16.7, 2), nu, 1e-16);
}

TEST(SpectrumCache, MemoizesAndAgreesWithDirectSolve) {
  SpectrumCache cache({3, 4.0, 2}, SpectrumSettings{});
  const auto a = cache.at(5.0);
  const auto b = cache.at(5.0);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(cache.size(), 1u);
  const auto direct = spectrum_at_alpha({3, 4.0, 2, 5.0}, SpectrumSettings{});
  for (int j = 0; j < 2; ++j) EXPECT_EQ(a->mu[j], direct.mu[j]);
}
