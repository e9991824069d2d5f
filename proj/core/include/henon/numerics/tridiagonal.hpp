#pragma once

#include <cstddef>
#include <vector>

namespace henon::numerics {

/// Generalized symmetric tridiagonal problem A v = x M v: diag[i] on the
/// diagonal of A, off[i] between rows i and i+1 (off.size() == diag.size() - 1),
/// and a positive diagonal mass M (empty means the identity).
struct TridiagonalSystem {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> mass;

  std::size_t size() const { return diag.size(); }
  /// Throws ValidationError on inconsistent lengths or nonpositive mass.
  void validate() const;
  /// The similar standard problem M^{-1/2} A M^{-1/2} (identity mass).
  TridiagonalSystem symmetrized() const;
};

/// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
std::size_t tridiag_count_below(const TridiagonalSystem& m, double x);

/// The k smallest eigenvalues (ascending) by bisection on the Sturm count,
/// each to absolute accuracy tol.
std::vector<double> tridiag_smallest(const TridiagonalSystem& m, std::size_t k, double tol);

/// Eigenvector of the standard problem (mass ignored) for a simple
/// eigenvalue by inverse iteration, unit 2-norm.
std::vector<double> tridiag_eigenvector(const TridiagonalSystem& m, double lambda);

/// Solve (A - shift I) x = rhs (mass ignored) with the Thomas algorithm; throws on a zero pivot.
std::vector<double> tridiag_solve(const TridiagonalSystem& m, double shift,
                                  const std::vector<double>& rhs);

}  // namespace henon::numerics
