#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace dimred {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

// Uniformly sampled real function: values(i) = f(start + i * step).
struct GridFunction {
  double start = 0.0;
  double step = 1.0;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(double start_, double step_, Eigen::VectorXd values_);

  // n uniformly spaced nodes covering [range.lo, range.hi] inclusive.
  static GridFunction zeros(Interval range, std::size_t n);

  Eigen::Index size() const { return values.size(); }
  double x(Eigen::Index i) const { return start + static_cast<double>(i) * step; }
  double end() const { return x(size() - 1); }
  Interval domain() const { return {start, end()}; }
  double operator[](Eigen::Index i) const { return values(i); }
  double& operator[](Eigen::Index i) { return values(i); }

  // Cubic Lagrange interpolation on the four nearest nodes.
  double interpolate(double at) const;

  // Throws ValidationError if step <= 0 or any value is non-finite.
  void validate() const;
};

}  // namespace dimred
