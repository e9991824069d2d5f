#pragma once

#include <cstddef>
#include <vector>

namespace henon::numerics {

/// Values and first derivatives on a uniform grid t_i = t0 + i h, evaluated
/// between nodes by cubic Hermite interpolation.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double t0, double h, std::vector<double> values, std::vector<double> derivs);

  double t0() const { return t0_; }
  double step() const { return h_; }
  double t_end() const { return t0_ + h_ * static_cast<double>(values_.size() - 1); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double node(std::size_t i) const { return t0_ + h_ * static_cast<double>(i); }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& derivs() const { return derivs_; }

  /// Interpolated value; throws NumericalError outside [t0, t_end].
  double operator()(double t) const;
  double derivative(double t) const;

 private:
  std::size_t cell(double t, double& s) const;

  double t0_ = 0.0;
  double h_ = 1.0;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

}  // namespace henon::numerics
