#include "dimred/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace dimred {

std::string_view coupling_name(Coupling c) { return c == Coupling::minimal ? "minimal" : "conformal"; }

void ModeSpec::validate(int d) const {
  if (static_cast<int>(m.size()) != d - 1)
    throw ValidationError("mode needs " + std::to_string(d - 1) + " angular numbers, got " + std::to_string(m.size()));
  if (!std::isfinite(omega) || !std::isfinite(mass)) throw ValidationError("mode parameters must be finite");
  if (mass < 0.0) throw ValidationError("mass must be non-negative");
  if (coupling == Coupling::conformal && mass != 0.0) throw ValidationError("conformal coupling requires mass = 0");
}

namespace {

double centrifugal_sum(std::span<const Jet<double>> rho, const ModeSpec& mode) {
  double s = 0.0;
  for (std::size_t a = 0; a < rho.size(); ++a) {
    const double m = mode.m[a];
    s += m * m / (rho[a].value * rho[a].value);
  }
  return s;
}

double product_sq(std::span<const Jet<double>> rho) {
  double p = 1.0;
  for (const auto& r : rho) p *= r.value * r.value;
  return p;
}

void require_minimal(const ModeSpec& mode) {
  if (mode.coupling != Coupling::minimal) throw ValidationError("minimal-coupling quantity requested for a conformal mode");
}

}  // namespace

ZCoefficients z_equation_coeffs(const Geometry& geom, const ModeSpec& mode, double z) {
  mode.validate(geom.dim());
  require_minimal(mode);
  require_nondegenerate(geom, z);
  const auto jets = geom.jets(z);
  double prod = 1.0, zz = 1.0;
  for (const auto& j : jets) {
    prod *= j.value;
    zz += j.d1 * j.d1;
  }
  return {prod / std::sqrt(zz), mode.omega * mode.omega - mode.mass * mode.mass - centrifugal_sum(jets, mode)};
}

double potential_from_varrho(std::span<const Jet<double>> varrho, const ModeSpec& mode) {
  return product_sq(varrho) * ((mode.mass * mode.mass - mode.omega * mode.omega) + centrifugal_sum(varrho, mode));
}

double conformal_potential_from_varrho(std::span<const Jet<double>> varrho, const ModeSpec& mode, int d) {
  const double R = scalar_curvature_u(varrho);
  return (R / conformal_weight(d) - mode.omega * mode.omega + centrifugal_sum(varrho, mode)) * product_sq(varrho);
}

double potential(const Geometry& geom, const UMap& map, const ModeSpec& mode, double u) {
  mode.validate(geom.dim());
  require_minimal(mode);
  return potential_from_varrho(varrho_all(map, geom, u), mode);
}

double conformal_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode, double u) {
  mode.validate(geom.dim());
  if (mode.coupling != Coupling::conformal) throw ValidationError("conformal potential requires a conformal mode");
  return conformal_potential_from_varrho(varrho_all(map, geom, u), mode, geom.dim());
}

double conformal_weight(int d) {
  if (d < 2) throw ValidationError("conformal weight needs d >= 2");
  // 4 / (1 - 1/d), written so that integer d gives exactly rounded values.
  return 4.0 * d / static_cast<double>(d - 1);
}

double threshold(const Geometry& geom, const ModeSpec& mode, double z_asymptote) {
  mode.validate(geom.dim());
  return mode.mass * mode.mass + centrifugal_sum(geom.jets(z_asymptote), mode);
}

namespace {

// Uniform u nodes with the last node pinned to the range end.
template <typename F>
GridFunction sample_uniform(Interval range, std::size_t n, const F& f) {
  GridFunction out = GridFunction::zeros(range, n);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double u = i == out.size() - 1 ? range.hi : std::min(out.x(i), range.hi);
    out[i] = f(u);
  }
  return out;
}

Interval resolve_range(const UMap& map, const Interval* u_range) {
  const Interval full = map.u_domain();
  if (!u_range) return full;
  if (u_range->lo < full.lo || u_range->hi > full.hi) throw DomainError("requested u range exceeds the u-map");
  return *u_range;
}

}  // namespace

PotentialTable tabulate_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode, std::size_t n,
                                  const Interval* u_range) {
  mode.validate(geom.dim());
  const Interval range = resolve_range(map, u_range);
  const bool conformal = mode.coupling == Coupling::conformal;
  PotentialTable t;
  t.mode = mode;
  t.provenance = conformal ? PotentialKind::conformal : PotentialKind::minimal;
  t.V = sample_uniform(range, n, [&](double u) {
    const auto rho = varrho_all(map, geom, u);
    return conformal ? conformal_potential_from_varrho(rho, mode, geom.dim()) : potential_from_varrho(rho, mode);
  });
  t.V.validate();
  return t;
}

GridFunction SpectralPotential::at(double omega_sq) const {
  return {base.start, base.step, base.values - omega_sq * weight.values};
}

PotentialTable SpectralPotential::table(double omega_sq) const {
  ModeSpec m = mode;
  m.omega = std::sqrt(std::max(omega_sq, 0.0));
  return {at(omega_sq), m, mode.coupling == Coupling::conformal ? PotentialKind::conformal : PotentialKind::minimal};
}

SpectralPotential tabulate_spectral_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode,
                                              std::size_t n, const Interval* u_range) {
  mode.validate(geom.dim());
  const Interval range = resolve_range(map, u_range);
  ModeSpec still = mode;
  still.omega = 0.0;
  SpectralPotential sp;
  sp.mode = mode;
  sp.base = GridFunction::zeros(range, n);
  sp.weight = sp.base;
  for (Eigen::Index i = 0; i < sp.base.size(); ++i) {
    const double u = i == sp.base.size() - 1 ? range.hi : std::min(sp.base.x(i), range.hi);
    const auto rho = varrho_all(map, geom, u);
    sp.base[i] = mode.coupling == Coupling::conformal ? conformal_potential_from_varrho(rho, still, geom.dim())
                                                       : potential_from_varrho(rho, still);
    sp.weight[i] = product_sq(rho);
  }
  return sp;
}

}  // namespace dimred
