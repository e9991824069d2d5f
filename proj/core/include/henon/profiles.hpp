#pragma once

#include <functional>
#include <vector>

#include "henon/numerics/grid_function.hpp"
#include "henon/numerics/tolerances.hpp"

namespace henon {

using numerics::GridFunction;
using numerics::Tolerances;

/// Smallest admissible weight exponent: max{((N-2)p - 2N)/2, 0}.
double alpha_p(int N, double p);

struct ProblemParams {
  int N = 3;
  double p = 4.0;
  int K = 1;
  double alpha = 1.0;

  /// Throws ValidationError unless N >= 3, p > 2, K >= 1 and alpha > alpha_p.
  void validate() const;
  /// gamma = (N-2)/(N+alpha).
  double gamma() const { return (N - 2.0) / (N + alpha); }
};

/// Parameters fixed along an alpha-family of radial solutions.
struct Family {
  int N = 3;
  double p = 4.0;
  int K = 1;
};

/// Exponent relating alpha and gamma: alpha = (N-2)/gamma - N.
double alpha_of_gamma(int N, double gamma);

struct RadialOptions {
  /// Value u(0) of the unnormalized initial value problem.
  double initial_value = 1.0;
  /// Give up if the K-th zero is not reached before this radius.
  double r_max = 1e3;
  /// Upper bound for the storage step on [0,1]; refined for large alpha.
  double h = 1e-3;
  /// End of the Taylor start at the origin.
  double h0 = 1e-4;
};

/// The K-nodal radial solution u_alpha on [0,1] with u(0) > 0 and u(1) = 0.
struct RadialSolution {
  ProblemParams params;
  GridFunction profile;       // u and u_r on r in [0,1]
  std::vector<double> zeros;  // interior zeros r_1 < ... < r_{K-1}
  double center_value = 0.0;
  double residual_sup = 0.0;
};

/// Bounded solution of -(e^{-gamma t}U')' = e^{-t}|U|^{p-2}U on [0,T] with
/// U(0)=0, K-1 interior zeros and positive limit at infinity.
struct HalflineProfile {
  double gamma = 0.0;
  double p = 4.0;
  int K = 1;
  GridFunction U;             // U and U' on [0,T]
  std::vector<double> zeros;  // interior zeros in (0,T)
  double limit_L = 0.0;       // value at infinity
  double truncation_T = 40.0;
  double residual_sup = 0.0;

  double T() const { return truncation_T; }
  /// (p-1) e^{(gamma-1)t}|U(t)|^{p-2}
  double potential(double t) const;
};

/// Solution of the linear problem satisfied by the gamma-derivative of U_gamma at gamma = 0.
struct VProfile {
  GridFunction V;  // V and V' on [0,T]
  double residual_sup = 0.0;
  double truncation_T = 40.0;
};

/// Integrate the radial ODE from the origin, stop at the K-th zero and rescale
/// so that the K-th zero sits at r = 1.
RadialSolution solve_radial(const ProblemParams& params, const Tolerances& tol,
                            const RadialOptions& opt = {});

/// Half-line transform of u_alpha on [0,T] with grid step h. The profile is
/// rebuilt from the far field with the limit value taken from u_alpha(0).
HalflineProfile to_halfline(const RadialSolution& sol, double T, const Tolerances& tol,
                            double h = 1e-3);

/// Direct half-line construction for a given gamma >= 0 by integration from
/// the far field and normalization of the K-th zero to t = 0.
/// seed_L is the starting guess for the limit value (any positive number).
HalflineProfile solve_halfline(double gamma, double p, int K, double T, double h,
                               const Tolerances& tol, double seed_L = 1.0);

/// The gamma = 0 member U_0 (positive limit orientation).
HalflineProfile limit_profile(double p, int K, double T, const Tolerances& tol, double h = 1e-3,
                              double seed_L = 1.0);

/// U_infinity: the orientation with U'(0) > 0 (sign flip of U_0 when K is even).
HalflineProfile u_infinity(const HalflineProfile& U0);

enum class VForcing {
  /// -U_0' + t e^{-t}|U_0|^{p-2}U_0, obtained by differentiating the U_gamma equation in gamma.
  Standard,
  /// Homogeneous right-hand side (uniqueness check).
  Zero,
};

/// Solve -V'' - (p-1)e^{-t}|U_0|^{p-2}V = f on [0,T] with V(0) = 0, V'(T) = 0.
VProfile solve_V(const HalflineProfile& U0, const Tolerances& tol,
                 VForcing forcing = VForcing::Standard);

/// Sup-norm residual of the divergence-form equation -(w y')' = g for a
/// gridded y, integrated on Gauss points of every cell:
///   R(t) = w(t)y'(t) - w(t0)y'(t0) + int_{t0}^t g.
/// Returned relative to max(1, sup |w y'|). g receives (t, y(t)).
double divergence_residual(const GridFunction& y, const std::function<double(double)>& w,
                           const std::function<double(double, double)>& g, double t_end);

double profile_residual(const RadialSolution& sol);
double profile_residual(const HalflineProfile& prof);
double profile_residual(const VProfile& v, const HalflineProfile& U0,
                        VForcing forcing = VForcing::Standard);

/// Zeros of w = U_0' - U_0/(p-2) in (0,T).
std::vector<double> auxiliary_zeros(const HalflineProfile& U0);

/// Sign changes of gridded values in (t0, t_end), located by linear interpolation.
std::vector<double> grid_sign_changes(const GridFunction& f);

}  // namespace henon
