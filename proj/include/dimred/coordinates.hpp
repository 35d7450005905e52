#pragma once

#include <cstddef>
#include <vector>

#include "dimred/geometry.hpp"

namespace dimred {

struct UMapOptions {
  double tol = 1e-10;         // absolute quadrature error budget for u over the range
  double u_origin_z = 0.0;    // u(u_origin_z) = 0
  double rho_min = 1e-6;      // truncation level for degenerating profiles
  std::size_t max_panels = 2'000'000;
};

// Tabulated monotone map z <-> u with du/dz = rho_d / (rho_1 ... rho_{d-1}).
// Between nodes u(z) is the cubic Hermite interpolant of (u_i, du/dz_i).
class UMap {
 public:
  UMap(std::vector<double> z, std::vector<double> u, std::vector<double> dudz, Interval requested,
       bool truncated, double estimated_error);

  double u_of_z(double z) const;  // throws DomainError outside the tabulated range
  double z_of_u(double u) const;  // throws DomainError outside the tabulated range

  const std::vector<double>& z_grid() const { return z_; }
  const std::vector<double>& u_grid() const { return u_; }
  const std::vector<double>& dudz_grid() const { return dudz_; }
  Interval z_domain() const { return {z_.front(), z_.back()}; }
  Interval u_domain() const { return {u_.front(), u_.back()}; }
  Interval requested_range() const { return requested_; }
  std::size_t panels() const { return z_.size() - 1; }

  // True when the domain was shrunk because some rho fell below rho_min.
  bool truncated() const { return truncated_; }
  double estimated_error() const { return estimated_error_; }

 private:
  std::size_t panel_of_z(double z) const;
  std::size_t panel_of_u(double u) const;
  double hermite(std::size_t i, double z) const;
  double hermite_slope(std::size_t i, double z) const;

  std::vector<double> z_, u_, dudz_;
  Interval requested_;
  bool truncated_;
  double estimated_error_;
};

// du/dz = rho_d / prod rho_a at z (integrand of the change of variable).
double dudz(const Geometry& geom, double z);

// Adaptive Simpson panels with Richardson correction; throws DomainError when
// a non-degenerating profile vanishes in range, SolverError when the panel
// budget is exhausted.
UMap build_u_map(const Geometry& geom, Interval z_range, const UMapOptions& options = {});

inline UMap build_u_map(const Geometry& geom, Interval z_range, double tol, double u_origin_z = 0.0) {
  UMapOptions o;
  o.tol = tol;
  o.u_origin_z = u_origin_z;
  return build_u_map(geom, z_range, o);
}

// varrho_a(u) = rho_a(z(u)) with exact chain-rule u-derivatives.
Jet<double> varrho(const UMap& map, const Geometry& geom, int alpha, double u);
std::vector<Jet<double>> varrho_all(const UMap& map, const Geometry& geom, double u);

// Same quantities at a known z (skips the inversion).
std::vector<Jet<double>> varrho_at_z(const Geometry& geom, double z);

}  // namespace dimred
