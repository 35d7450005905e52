#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dimred/coordinates.hpp"
#include "dimred/grid.hpp"

namespace dimred {

enum class Coupling { minimal, conformal };

std::string_view coupling_name(Coupling c);

// Separated mode e^{-i omega t} prod_a e^{i m_a phi_a} Z(z).
struct ModeSpec {
  double omega = 0.0;
  double mass = 0.0;
  std::vector<int> m;
  Coupling coupling = Coupling::minimal;

  // m.size() == d-1, mass >= 0, conformal coupling requires mass == 0.
  void validate(int d) const;
  bool operator==(const ModeSpec&) const = default;
};

// Energy of the Schroedinger-like equation psi'' + (E - V) psi = 0; the
// spectral parameter is omega^2 instead.
inline constexpr double kSchrodingerEnergy = 0.0;

// The z-equation reads (1 / prod rho_a^2) p (p Z')' + w Z = 0.
struct ZCoefficients {
  double p = 0.0;  // prod rho_a / rho_d
  double w = 0.0;  // omega^2 - M^2 - sum m_a^2 / rho_a^2
};

ZCoefficients z_equation_coeffs(const Geometry& geom, const ModeSpec& mode, double z);

// V(u) = prod varrho_a^2 [ (M^2 - omega^2) + sum m_a^2 / varrho_a^2 ].
double potential(const Geometry& geom, const UMap& map, const ModeSpec& mode, double u);

// V_c(u) = ( R / n_d - omega^2 + sum m_a^2 / varrho_a^2 ) prod varrho_a^2.
double conformal_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode, double u);

// n_d = 4 / (1 - 1/d).
double conformal_weight(int d);

// omega^2 above which the asymptotic potential at z_asymptote is negative.
double threshold(const Geometry& geom, const ModeSpec& mode, double z_asymptote);

// Pointwise evaluation from already computed varrho jets at one u.
double potential_from_varrho(std::span<const Jet<double>> varrho, const ModeSpec& mode);
double conformal_potential_from_varrho(std::span<const Jet<double>> varrho, const ModeSpec& mode, int d);

enum class PotentialKind { minimal, conformal };

struct PotentialTable {
  GridFunction V;
  ModeSpec mode;
  PotentialKind provenance = PotentialKind::minimal;
};

// V on n uniform nodes of u_range (defaults to the whole map), using the
// mode's coupling to select V or V_c.
PotentialTable tabulate_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode,
                                  std::size_t n, const Interval* u_range = nullptr);

// V(u; omega^2) = base(u) - omega^2 weight(u), weight = prod varrho_a^2.
// Valid for both couplings (the curvature term sits in `base`).
struct SpectralPotential {
  GridFunction base;
  GridFunction weight;
  ModeSpec mode;

  GridFunction at(double omega_sq) const;
  PotentialTable table(double omega_sq) const;
};

SpectralPotential tabulate_spectral_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode,
                                              std::size_t n, const Interval* u_range = nullptr);

}  // namespace dimred
