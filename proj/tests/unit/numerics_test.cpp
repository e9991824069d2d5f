#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "henon/errors.hpp"
#include "henon/numerics/grid_function.hpp"
#include "henon/numerics/ode.hpp"
#include "henon/numerics/quadrature.hpp"
#include "henon/numerics/roots.hpp"
#include "henon/numerics/tolerances.hpp"
#include "henon/numerics/tridiagonal.hpp"

using namespace henon;
using namespace henon::numerics;
using std::numbers::pi;

namespace {

using S1 = std::array<double, 1>;
using S2 = std::array<double, 2>;

}  // namespace

TEST(Ode, ExponentialGrowthMatchesClosedForm) {
  const Tolerances tol{1e-12, 1e-10, 1e-12, 1e-10};
  auto traj = integrate_ivp<1>([](double, const S1& y) { return S1{y[0]}; }, 0.0, S1{1.0}, 1.0, tol);
  EXPECT_NEAR(traj.states().back()[0], std::exp(1.0), 1e-9);
  // Dense output between nodes.
  for (double t : {0.1234, 0.5, 0.987}) EXPECT_NEAR(traj.eval(t)[0], std::exp(t), 1e-8);
}

TEST(Ode, BackwardIntegrationOfLinearDecay) {
  const Tolerances tol{1e-12, 1e-10, 1e-12, 1e-10};
  auto traj = integrate_ivp<1>([](double, const S1& y) { return S1{-2.0 * y[0]}; }, 3.0,
                               S1{std::exp(-6.0)}, 0.0, tol);
  EXPECT_FALSE(traj.forward());
  EXPECT_NEAR(traj.states().back()[0], 1.0, 1e-8);
}

TEST(Ode, SineZerosAreDetectedAsEvents) {
  const Tolerances tol{1e-12, 1e-10, 1e-12, 1e-10};
  auto rhs = [](double, const S2& y) { return S2{y[1], -y[0]}; };
  auto traj = integrate_ivp<2>(rhs, 0.0, S2{0.0, 1.0}, 10.0, tol);
  ASSERT_EQ(traj.events().size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(traj.events()[k].time, (k + 1) * pi, 1e-9);
}

TEST(Ode, TerminalEventStopsAtTheRequestedZero) {
  const Tolerances tol{1e-12, 1e-10, 1e-12, 1e-10};
  IvpOptions opt;
  opt.terminal_event_count = 2;
  auto traj = integrate_ivp<2>([](double, const S2& y) { return S2{y[1], -y[0]}; }, 0.0,
                               S2{0.0, 1.0}, 100.0, tol, opt);
  EXPECT_NEAR(traj.end(), 2.0 * pi, 1e-9);
  EXPECT_NEAR(traj.states().back()[0], 0.0, 1e-9);
}

TEST(Ode, BlowUpReportsLastTime) {
  try {
    integrate_ivp<1>([](double, const S1& y) { return S1{y[0] * y[0]}; }, 0.0, S1{1.0}, 2.0,
                     Tolerances{});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.last_time(), 0.9);
    EXPECT_LT(e.last_time(), 1.0 + 1e-6);
  }
}

TEST(Roots, BrentFindsFixedPointOfCosine) {
  auto r = find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14);
  EXPECT_NEAR(r.x, 0.7390851332151607, 1e-13);
}

TEST(Roots, CubeRootOfTwo) {
  auto r = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, 1e-14);
  EXPECT_NEAR(r.x, std::cbrt(2.0), 1e-13);
}

TEST(Roots, NonBracketingIntervalNamesEndpoints) {
  try {
    find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(Quadrature, IntegrableEndpointSingularity) {
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, FirstMomentOfExponentialOnTruncatedHalfLine) {
  auto r = integrate([](double t) { return t * std::exp(-t); }, 0.0, 40.0, 1e-13, 1e-12);
  EXPECT_NEAR(r.value, 1.0 - 41.0 * std::exp(-40.0), 1e-12);
}

TEST(Quadrature, BreakpointsAtKinks) {
  auto r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-13, 1e-13, {0.3});
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-13);
}

TEST(Quadrature, CompositeRulesOnPolynomials) {
  std::vector<double> lin, cub;
  const double h = 0.1;
  for (int i = 0; i <= 7; ++i) {
    const double x = i * h;
    lin.push_back(2.0 * x + 1.0);
    cub.push_back(x * x * x);
  }
  EXPECT_NEAR(trapezoid(lin, h), 0.49 + 0.7, 1e-14);
  // Seven intervals: Simpson panels closed by a three-eighths panel, exact for cubics.
  EXPECT_NEAR(simpson(cub, h), std::pow(0.7, 4) / 4.0, 1e-14);
}

TEST(Tridiagonal, TwoByTwo) {
  TridiagonalSystem m{{2.0, 2.0}, {-1.0}, {}};
  const auto ev = tridiag_smallest(m, 2, 1e-14);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 1.0, 1e-13);
  EXPECT_NEAR(ev[1], 3.0, 1e-13);
  EXPECT_EQ(tridiag_count_below(m, 2.0), 1u);
}

TEST(Tridiagonal, DirichletLaplacianCountAndEigenvalues) {
  const int n = 999;
  const double h = 1.0 / (n + 1);
  TridiagonalSystem m{std::vector<double>(n, 2.0 / (h * h)), std::vector<double>(n - 1, -1.0 / (h * h)),
                      {}};
  EXPECT_EQ(tridiag_count_below(m, 50.0), 2u);
  const auto ev = tridiag_smallest(m, 3, 1e-10);
  for (int k = 1; k <= 3; ++k) {
    const double exact = 4.0 / (h * h) * std::pow(std::sin(k * pi * h / 2.0), 2);
    EXPECT_NEAR(ev[k - 1], exact, 1e-8 * exact);
  }
}

TEST(Tridiagonal, MassMatrixMatchesSymmetrizedProblem) {
  TridiagonalSystem m{{4.0, 5.0, 6.0}, {1.0, -2.0}, {1.0, 2.0, 4.0}};
  const auto a = tridiag_smallest(m, 3, 1e-13);
  const auto b = tridiag_smallest(m.symmetrized(), 3, 1e-13);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
}

TEST(Tridiagonal, EigenvectorAndSolve) {
  TridiagonalSystem m{{2.0, 2.0, 2.0}, {-1.0, -1.0}, {}};
  const double lam = 2.0 - std::sqrt(2.0);
  const auto v = tridiag_eigenvector(m, lam);
  EXPECT_NEAR(std::abs(v[0]), 0.5, 1e-10);
  EXPECT_NEAR(std::abs(v[1]), std::sqrt(0.5), 1e-10);
  const auto x = tridiag_solve(m, 0.0, {1.0, 0.0, 1.0});
  for (double xi : x) EXPECT_NEAR(xi, 1.0, 1e-14);
}

TEST(Tridiagonal, RejectsInconsistentInput) {
  TridiagonalSystem m{{1.0, 2.0}, {}, {}};
  EXPECT_THROW(m.validate(), ValidationError);
  TridiagonalSystem neg{{1.0}, {}, {-1.0}};
  EXPECT_THROW(neg.validate(), ValidationError);
  EXPECT_THROW(tridiag_smallest(TridiagonalSystem{{1.0}, {}, {}}, 2, 1e-12), ValidationError);
}

TEST(GridFunction, HermiteInterpolationIsExactForCubics) {
  std::vector<double> v, d;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.5 + 0.2 * i;
    v.push_back(t * t * t - t);
    d.push_back(3 * t * t - 1);
  }
  GridFunction g(0.5, 0.2, v, d);
  for (double t : {0.5, 0.61, 1.333, 2.5}) {
    EXPECT_NEAR(g(t), t * t * t - t, 1e-13);
    EXPECT_NEAR(g.derivative(t), 3 * t * t - 1, 1e-12);
  }
  EXPECT_THROW(g(2.6), NumericalError);
}

TEST(Tolerances, ValidationAndTightening) {
  EXPECT_NO_THROW(Tolerances{}.validate());
  EXPECT_THROW((Tolerances{1e-3, 1e-8, 1e-12, 1e-9}).validate(), ValidationError);
  EXPECT_THROW((Tolerances{1e-10, -1.0, 1e-12, 1e-9}).validate(), ValidationError);
  const auto t = Tolerances{}.tightened(1e-3);
  EXPECT_DOUBLE_EQ(t.rel_tol, 1e-11);
  EXPECT_GE(Tolerances::precise().tightened(1e-6).rel_tol, 2e-14);
}

TEST(Ode, DecayToInverseE) {
  auto traj = integrate_ivp<1>([](double, const S1& y) { return S1{-y[0]}; }, 0.0, S1{1.0}, 1.0,
                               Tolerances{1e-12, 1e-11, 1e-12, 1e-10});
  EXPECT_NEAR(traj.states().back()[0], std::exp(-1.0), 1e-9);
}

TEST(Ode, LinearFunctionHasNoEvents) {
  auto traj = integrate_ivp<2>([](double, const S2& y) { return S2{y[1], 0.0}; }, 0.0,
                               S2{0.0, 1.0}, 1.0, Tolerances{});
  EXPECT_TRUE(traj.events().empty());
}

TEST(Ode, EventsAreOrderedAndBracketedByNodes) {
  auto rhs = [](double, const S2& y) { return S2{y[1], -4.0 * y[0]}; };
  for (double t1 : {12.0, -12.0}) {
    auto traj = integrate_ivp<2>(rhs, 0.0, S2{0.3, 1.0}, t1, Tolerances{});
    const auto ev = traj.events();
    ASSERT_GT(ev.size(), 5u);
    const double dir = t1 > 0 ? 1.0 : -1.0;
    for (std::size_t k = 1; k < ev.size(); ++k) EXPECT_GT(dir * (ev[k].time - ev[k - 1].time), 0.0);
    const auto nodes = traj.nodes();
    const auto states = traj.states();
    for (const auto& e : ev) {
      std::size_t k = 0;
      while (k + 1 < nodes.size() && dir * (nodes[k + 1] - e.time) < 0.0) ++k;
      ASSERT_LT(k + 1, nodes.size());
      EXPECT_LE(states[k][0] * states[k + 1][0], 0.0) << "event at " << e.time;
    }
  }
}

TEST(Roots, SqrtTwo) {
  EXPECT_NEAR(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-14).x, std::sqrt(2.0),
              1e-12);
}

TEST(Roots, OddFunctionRootAtOrigin) {
  EXPECT_NEAR(find_root([](double x) { return x; }, -1.0, 1.0, 1e-14).x, 0.0, 1e-13);
}

TEST(Roots, CosineOnOneTwo) {
  EXPECT_NEAR(find_root([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-14).x, pi / 2.0, 1e-12);
}

TEST(Quadrature, Constant) {
  EXPECT_NEAR(quad_adaptive([](double) { return 1.0; }, 0.0, 1.0, {}, Tolerances{}), 1.0, 1e-14);
}

TEST(Quadrature, NonnegativeAndAdditiveAcrossSingularPoint) {
  const Tolerances tol{1e-10, 1e-10, 1e-12, 1e-9};
  auto f = [](double x) { return std::pow(std::abs(x - 0.4), -0.5); };
  const double whole = quad_adaptive(f, 0.0, 1.0, {0.4}, tol);
  const double left = quad_adaptive(f, 0.0, 0.4, {0.4}, tol);
  const double right = quad_adaptive(f, 0.4, 1.0, {0.4}, tol);
  EXPECT_GE(whole, 0.0);
  EXPECT_NEAR(whole, left + right, 2e-9);
  EXPECT_NEAR(whole, 2.0 * (std::sqrt(0.4) + std::sqrt(0.6)), 1e-8);
}

TEST(Tridiagonal, CountBelowSmallExamples) {
  TridiagonalSystem m{{2.0, 2.0}, {-1.0}, {}};
  EXPECT_EQ(tridiag_count_below(m, 0.0), 0u);
  EXPECT_EQ(tridiag_count_below(m, 4.0), 2u);
  EXPECT_TRUE(tridiag_smallest(m, 0, 1e-12).empty());
}

TEST(Tridiagonal, LaplacianGroundStateConvergesAtSecondOrder) {
  auto lowest = [](int n) {
    const double h = 1.0 / (n + 1);
    TridiagonalSystem m{std::vector<double>(n, 2.0 / (h * h)),
                        std::vector<double>(n - 1, -1.0 / (h * h)), {}};
    return tridiag_smallest(m, 1, 1e-12).front();
  };
  const double e1 = std::abs(lowest(99) - pi * pi), e2 = std::abs(lowest(199) - pi * pi);
  EXPECT_LT(e1, 1e-2);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

TEST(Tridiagonal, CountJumpsAtComputedEigenvalues) {
  TridiagonalSystem m{{1.0, 3.0, -2.0, 5.0, 0.5}, {0.7, -1.1, 0.4, 2.0}, {1.0, 0.5, 2.0, 1.5, 1.0}};
  const double tol = 1e-11;
  const auto ev = tridiag_smallest(m, 5, tol);
  std::size_t prev = 0;
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const auto c = tridiag_count_below(m, x);
    EXPECT_GE(c, prev);
    prev = c;
  }
  for (std::size_t k = 0; k < ev.size(); ++k) {
    EXPECT_EQ(tridiag_count_below(m, ev[k] - 10 * tol), k);
    EXPECT_EQ(tridiag_count_below(m, ev[k] + 10 * tol), k + 1);
  }
}
