#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "dimred/profiles.hpp"

namespace dimred {

// Spatial dimension d >= 2 with d-1 compactification radii rho_1..rho_{d-1}.
// The z-direction scale factor rho_d = sqrt(1 + sum rho_a'^2) is derived.
class Geometry {
 public:
  Geometry(int d, std::vector<RadiusProfile> profiles);

  int dim() const { return d_; }
  int torus_dim() const { return d_ - 1; }
  const RadiusProfile& profile(int alpha) const { return profiles_[static_cast<std::size_t>(alpha)]; }
  std::span<const RadiusProfile> profiles() const { return profiles_; }

  template <typename Scalar = double>
  std::vector<Jet<Scalar>> jets(Scalar z) const {
    std::vector<Jet<Scalar>> out;
    out.reserve(profiles_.size());
    for (const auto& p : profiles_) out.push_back(p.template eval<Scalar>(z));
    return out;
  }

  // Smallest characteristic scale among the profiles, 1 when all are constant.
  double characteristic_scale() const;

  bool operator==(const Geometry&) const = default;

 private:
  int d_;
  std::vector<RadiusProfile> profiles_;
};

// Throws DomainError when some rho_a(z) <= 0.
void require_nondegenerate(const Geometry& geom, double z);

// Diagonal of the spatial metric (rho_1^2, ..., rho_{d-1}^2, rho_d^2).
struct MetricSample {
  Eigen::VectorXd diag;
  double sqrt_det = 0.0;
};

MetricSample spatial_metric(const Geometry& geom, double z);

// Diagonal (1, -rho_1^2, ..., -rho_{d-1}^2, -rho_d^2), coordinates (t, phi_1.., z).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> spacetime_metric_diag(const Geometry& geom, Scalar z);

extern template Eigen::VectorXd spacetime_metric_diag<double>(const Geometry&, double);
extern template Eigen::Matrix<long double, Eigen::Dynamic, 1> spacetime_metric_diag<long double>(
    const Geometry&, long double);

inline Eigen::VectorXd spacetime_metric(const Geometry& geom, double z) {
  return spacetime_metric_diag<double>(geom, z);
}

// Orthonormal frame: frame(a, mu) = e^{(a)}_mu, diagonal (1, rho_1, ..., rho_d).
struct Tetrad {
  Eigen::MatrixXd frame;

  // e^T eta e with eta = diag(+1, -1, ..., -1).
  Eigen::MatrixXd metric() const;
};

Tetrad tetrad(const Geometry& geom, double z);

// Closed-form d = 3 scalar curvature in z, sign convention of the space-time
// metric of signature (+,-,-,-) (positive for shapes of negative Gaussian
// curvature of the profile surface).
double scalar_curvature_closed_3d(const Geometry& geom, double z);

// Scalar curvature from the u-space radii varrho_a(u) and their u-derivatives:
//   2 [ sum_a (varrho_a'/varrho_a)' - sum_{a<b} (varrho_a'/varrho_a)(varrho_b'/varrho_b) ]
//     / prod_a varrho_a^2
double scalar_curvature_u(std::span<const Jet<double>> varrho);

struct CurvatureReport {
  double scalar = 0.0;            // spatial slice, as embedded (metric -dl^2)
  double spacetime_scalar = 0.0;  // full (1+d) metric
  Eigen::MatrixXd ricci;          // spatial Ricci tensor, coordinate basis
  double weyl_norm = 0.0;         // spatial Weyl tensor, orthonormal-frame Frobenius norm
  double taub_norm = 0.0;         // spatial Taub (Cotton) tensor
  double spacetime_weyl_norm = 0.0;
};

// Finite-difference Riemann machinery on the diagonal metric components
// (five-point stencils of step h). Independent of the closed forms above.
CurvatureReport curvature_oracle(const Geometry& geom, double z, double h);

// h = 1e-3 times the geometry's characteristic scale.
double default_oracle_step(const Geometry& geom);

// Point in R^{2d}: (t, rho_1 cos phi_1, rho_1 sin phi_1, ..., rho_{d-1} sin phi_{d-1}, z).
Eigen::VectorXd embed_point(const Geometry& geom, double t, std::span<const double> angles, double z);

struct InducedMetric {
  Eigen::MatrixXd spacetime;  // (1+d) x (1+d) pullback of the ambient flat metric
  Eigen::MatrixXd spatial;    // minus the spatial block
  MetricSample sample;        // diagonal of `spatial`
  double max_offdiag = 0.0;   // largest |off-diagonal| entry of `spacetime`
};

// Pullback through five-point central-difference Jacobians of embed_point.
// Empty `angles` means all angles zero.
InducedMetric induced_metric_oracle(const Geometry& geom, double z, double h,
                                    std::span<const double> angles = {});

}  // namespace dimred
