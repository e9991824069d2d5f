#include "henon/numerics/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "henon/errors.hpp"

namespace henon::numerics {

GridFunction::GridFunction(double t0, double h, std::vector<double> values,
                           std::vector<double> derivs)
    : t0_(t0), h_(h), values_(std::move(values)), derivs_(std::move(derivs)) {
  if (values_.size() < 2 || values_.size() != derivs_.size() || !(h_ > 0.0)) {
    throw ValidationError("GridFunction: need >= 2 nodes, matching derivative count, h > 0");
  }
}

std::size_t GridFunction::cell(double t, double& s) const {
  const double te = t_end();
  const double slack = 1e-9 * h_;
  if (!(t >= t0_ - slack && t <= te + slack)) {
    std::ostringstream os;
    os << "GridFunction: t=" << t << " outside [" << t0_ << ", " << te << "]";
    throw NumericalError(os.str());
  }
  const double x = (t - t0_) / h_;
  std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0,
                                                       static_cast<double>(values_.size() - 2)));
  s = x - static_cast<double>(i);
  return i;
}

double GridFunction::operator()(double t) const {
  double s;
  const std::size_t i = cell(t, s);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * values_[i] + h10 * h_ * derivs_[i] + h01 * values_[i + 1] +
         h11 * h_ * derivs_[i + 1];
}

double GridFunction::derivative(double t) const {
  double s;
  const std::size_t i = cell(t, s);
  const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
  return (d00 * values_[i] + d01 * values_[i + 1]) / h_ + d10 * derivs_[i] + d11 * derivs_[i + 1];
}

}  // namespace henon::numerics
