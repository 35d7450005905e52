#include "dimred/grid.hpp"

#include <algorithm>
#include <cmath>

#include "dimred/errors.hpp"

namespace dimred {

GridFunction::GridFunction(double start_, double step_, Eigen::VectorXd values_)
    : start(start_), step(step_), values(std::move(values_)) {}

GridFunction GridFunction::zeros(Interval range, std::size_t n) {
  if (n < 2) throw ValidationError("grid needs at least two nodes");
  if (!(range.hi > range.lo)) throw ValidationError("grid range must satisfy lo < hi");
  const double h = range.length() / static_cast<double>(n - 1);
  return {range.lo, h, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
}

double GridFunction::interpolate(double at) const {
  const Eigen::Index n = size();
  if (n < 4) throw DomainError("cubic interpolation needs at least four nodes");
  const double s = (at - start) / step;
  if (s < -1e-9 || s > static_cast<double>(n - 1) + 1e-9) throw DomainError("interpolation point outside grid");
  const auto i0 = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(s)) - 1, 0, n - 4);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < 4; ++j) {
    double w = 1.0;
    for (Eigen::Index l = 0; l < 4; ++l) {
      if (l == j) continue;
      w *= (s - static_cast<double>(i0 + l)) / static_cast<double>(j - l);
    }
    sum += w * values(i0 + j);
  }
  return sum;
}

void GridFunction::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid step must be positive and finite");
  if (!values.allFinite()) throw ValidationError("grid function has non-finite values");
}

}  // namespace dimred
