#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dimred/reduction.hpp"

namespace dimred {

enum class Direction { forward, backward };

// Numerov propagation of psi'' = (V - E) psi with E = 0. The true solution
// is psi.values * exp(log_scale); renormalizations counts rescalings applied
// to keep the amplitude representable.
struct NumerovSolution {
  GridFunction psi;
  double log_scale = 0.0;
  int renormalizations = 0;
};

// forward: psi0, psi1 are the values at nodes 0 and 1.
// backward: psi0, psi1 are the values at the last and second-to-last node.
NumerovSolution numerov_integrate(const GridFunction& V, double psi0, double psi1,
                                  Direction direction = Direction::forward);
inline NumerovSolution numerov_integrate(const PotentialTable& V, double psi0, double psi1,
                                         Direction direction = Direction::forward) {
  return numerov_integrate(V.V, psi0, psi1, direction);
}

// Second starting value for Numerov from psi(u0) and psi'(u0), by RK4
// substeps of psi'' = V psi with V evaluated off-grid.
double numerov_start(const std::function<double(double)>& V, double u0, double h, double psi0, double dpsi0);

struct ZSolution {
  GridFunction Z;
  GridFunction flux;      // p Z'
  double residual = 0.0;  // max |(1/P^2) p (p Z')' + w Z| / max |Z|, centered differences
};

// RK4 integration of the self-adjoint z-equation on a uniform grid.
ZSolution solve_z_equation_ivp(const Geometry& geom, const ModeSpec& mode, Interval z_range, std::size_t n,
                               double Z0, double dZ0);

// Same, matching Z at the first two grid nodes.
ZSolution solve_z_equation(const Geometry& geom, const ModeSpec& mode, Interval z_range, std::size_t n,
                           double Z0, double Z1);

struct SpectrumResult {
  std::vector<double> eigen_omega_sq;
  std::vector<int> node_counts;
  std::vector<double> residuals;
  std::vector<GridFunction> wavefunctions;  // unit max-norm
};

struct BoundModeOptions {
  std::size_t n_grid = 20001;   // uniform u nodes over the map's u-domain
  std::size_t k_max = 32;
  double rel_tol = 1e-12;
  double wkb_suppression = 20.0;  // required integral of sqrt(V) beyond the turning points
};

// Two-sided shooting in omega^2 for psi'' = V(u; omega^2) psi with psi = 0
// at both ends of the u-domain. Throws SolverError when V is not confining
// at omega_sq_range.hi or more than k_max modes lie in range.
SpectrumResult bound_modes(const Geometry& geom, const UMap& map, const ModeSpec& mode_template,
                           Interval omega_sq_range, const BoundModeOptions& options = {});
SpectrumResult bound_modes(const SpectralPotential& V, Interval omega_sq_range,
                           const BoundModeOptions& options = {});

struct ConfinementReport {
  bool confining = false;
  double wkb_left = 0.0;
  double wkb_right = 0.0;
};

ConfinementReport check_confinement(const GridFunction& V, double wkb_suppression);

// omega^2 -> potential table on n_grid uniform nodes.
using PotentialBuilder = std::function<GridFunction(double omega_sq, std::size_t n_grid)>;

// Brute-force oracle: Sturm counts of the tridiagonal matrix -D2 + V(omega^2)
// (Dirichlet ends) bracket every omega^2 at which an eigenvalue crosses zero;
// eigenvectors by inverse iteration give the node counts.
SpectrumResult fd_eigen_oracle(const PotentialBuilder& builder, Interval omega_sq_range, std::size_t n_grid,
                               double rel_tol = 1e-13);

// Number of eigenvalues of -D2 + V (interior nodes, Dirichlet) below `shift`.
std::size_t sturm_count(const GridFunction& V, double shift = 0.0);

enum class Side { left, right };

struct ScatterResult {
  double omega = 0.0;
  double transmission = 0.0;
  double reflection = 0.0;
  bool channel_open = false;  // outgoing channel propagates
};

struct ScatterOptions {
  std::size_t n_grid = 8001;
  Side incoming = Side::left;
  double asymptotic_tol = 1e-6;  // max |dV/du| allowed at the ends
};

// Numerov solution matched to discrete plane waves at both ends.
ScatterResult transmission(const Geometry& geom, const UMap& map, const ModeSpec& mode,
                           const ScatterOptions& options = {});
ScatterResult transmission(const GridFunction& V, double omega, const ScatterOptions& options = {});

// Independent oracle: piecewise-constant slabs (V sampled at slab midpoints)
// with exact 2x2 propagators and continuum plane waves at the ends.
ScatterResult transfer_matrix_transmission(const std::function<double(double)>& V, Interval u_range,
                                           std::size_t n_slabs, double omega, Side incoming = Side::left);

// Count of sign changes, ignoring exact zeros.
int count_nodes(const Eigen::VectorXd& values);

}  // namespace dimred
