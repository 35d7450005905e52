#include "dimred/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimred/tensor.hpp"

namespace dimred {

Geometry::Geometry(int d, std::vector<RadiusProfile> profiles) : d_(d), profiles_(std::move(profiles)) {
  if (d_ < 2) throw ValidationError("spatial dimension d must be at least 2, got " + std::to_string(d_));
  if (static_cast<int>(profiles_.size()) != d_ - 1) {
    throw ValidationError("d = " + std::to_string(d_) + " requires exactly " + std::to_string(d_ - 1) +
                          " radius profiles, got " + std::to_string(profiles_.size()));
  }
}

double Geometry::characteristic_scale() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& p : profiles_) s = std::min(s, p.characteristic_scale());
  return std::isfinite(s) ? s : 1.0;
}

void require_nondegenerate(const Geometry& geom, double z) {
  for (int a = 0; a < geom.torus_dim(); ++a) {
    const double r = geom.profile(a).eval(z).value;
    if (!(r > 0.0)) {
      throw DomainError("degenerate point: rho_" + std::to_string(a + 1) + "(" + std::to_string(z) +
                        ") = " + std::to_string(r));
    }
  }
}

MetricSample spatial_metric(const Geometry& geom, double z) {
  require_nondegenerate(geom, z);
  const int d = geom.dim();
  MetricSample m;
  m.diag.resize(d);
  double zz = 1.0;
  double root = 1.0;
  const auto jets = geom.jets(z);
  for (int a = 0; a < d - 1; ++a) {
    m.diag(a) = jets[a].value * jets[a].value;
    zz += jets[a].d1 * jets[a].d1;
    root *= jets[a].value;
  }
  m.diag(d - 1) = zz;
  m.sqrt_det = root * std::sqrt(zz);
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> spacetime_metric_diag(const Geometry& geom, Scalar z) {
  const int d = geom.dim();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(d + 1);
  g(0) = Scalar(1);
  Scalar zz = Scalar(1);
  const auto jets = geom.template jets<Scalar>(z);
  for (int a = 0; a < d - 1; ++a) {
    if (!(jets[a].value > Scalar(0))) {
      throw DomainError("degenerate point: rho_" + std::to_string(a + 1) + "(" +
                        std::to_string(static_cast<double>(z)) + ") <= 0");
    }
    g(a + 1) = -jets[a].value * jets[a].value;
    zz += jets[a].d1 * jets[a].d1;
  }
  g(d) = -zz;
  return g;
}

template Eigen::VectorXd spacetime_metric_diag<double>(const Geometry&, double);
template Eigen::Matrix<long double, Eigen::Dynamic, 1> spacetime_metric_diag<long double>(const Geometry&,
                                                                                        long double);

Eigen::MatrixXd Tetrad::metric() const {
  const Eigen::Index n = frame.rows();
  Eigen::VectorXd eta = -Eigen::VectorXd::Ones(n);
  eta(0) = 1.0;
  return frame.transpose() * eta.asDiagonal() * frame;
}

Tetrad tetrad(const Geometry& geom, double z) {
  const MetricSample m = spatial_metric(geom, z);
  const int d = geom.dim();
  Eigen::VectorXd diag(d + 1);
  diag(0) = 1.0;
  diag.tail(d) = m.diag.cwiseSqrt();
  return {Eigen::MatrixXd(diag.asDiagonal())};
}

double scalar_curvature_closed_3d(const Geometry& geom, double z) {
  if (geom.dim() != 3) throw ValidationError("closed-form scalar curvature in z is the d = 3 case");
  require_nondegenerate(geom, z);
  const auto j = geom.jets(z);
  const double r1 = j[0].value, r2 = j[1].value;
  const double p1 = j[0].d1, p2 = j[1].d1;
  const double s1 = j[0].d2, s2 = j[1].d2;
  const double S = 1.0 + p1 * p1 + p2 * p2;
  const double den = r1 * r2 * S * S;
  return 2.0 * (r2 * (1.0 + p2 * p2) - r1 * p1 * p2) * s1 / den +
         2.0 * (r1 * (1.0 + p1 * p1) - r2 * p1 * p2) * s2 / den + 2.0 * p1 * p2 / (r1 * r2 * S);
}

double scalar_curvature_u(std::span<const Jet<double>> varrho) {
  double sum_dlog = 0.0;
  double sum_log = 0.0;
  double sum_log_sq = 0.0;
  double prod_sq = 1.0;
  for (const auto& r : varrho) {
    if (!(r.value > 0.0)) throw DomainError("degenerate u-space radius");
    const double l = r.d1 / r.value;
    sum_dlog += r.d2 / r.value - l * l;
    sum_log += l;
    sum_log_sq += l * l;
    prod_sq *= r.value * r.value;
  }
  const double cross = 0.5 * (sum_log * sum_log - sum_log_sq);  // sum_{a<b} l_a l_b
  return 2.0 * (sum_dlog - cross) / prod_sq;
}

double default_oracle_step(const Geometry& geom) { return 1e-3 * geom.characteristic_scale(); }

namespace {

using Real = long double;
using tensor::DiagonalMetricJet;
using tensor::Vector;

template <typename MetricFn>
DiagonalMetricJet<Real> jet_at(const MetricFn& g, Real z, Real h, int k) {
  return {g(z), tensor::central_d1(g, z, h), tensor::central_d2(g, z, h), k};
}

}  // namespace

CurvatureReport curvature_oracle(const Geometry& geom, double z, double h) {
  if (!(h > 0.0)) throw ValidationError("oracle step must be positive");
  const int d = geom.dim();
  for (int s = -4; s <= 4; ++s) {
    try {
      require_nondegenerate(geom, z + s * h);
    } catch (const DomainError& e) {
      throw DomainError(std::string("curvature stencil leaves the domain of positivity: ") + e.what());
    }
  }
  const auto full = [&](Real x) { return spacetime_metric_diag<Real>(geom, x); };
  const auto spatial = [&](Real x) -> Vector<Real> { return full(x).tail(d); };

  const Real zl = z, hl = h;
  const auto st_jet = jet_at(full, zl, hl, d);
  const auto sp_jet = jet_at(spatial, zl, hl, d - 1);
  const auto st = tensor::curvature(st_jet);
  const auto sp = tensor::curvature(sp_jet);

  CurvatureReport report;
  report.scalar = static_cast<double>(sp.scalar);
  report.spacetime_scalar = static_cast<double>(st.scalar);
  report.ricci = sp.ricci.cast<double>();
  report.spacetime_weyl_norm = static_cast<double>(tensor::frame_norm(st_jet.g, tensor::weyl(st_jet.g, st)));
  report.weyl_norm = static_cast<double>(tensor::frame_norm(sp_jet.g, tensor::weyl(sp_jet.g, sp)));

  if (d >= 3) {
    const auto schouten_at = [&](Real x) {
      const auto j = jet_at(spatial, x, hl, d - 1);
      return tensor::schouten(j.g, tensor::curvature(j));
    };
    const tensor::Matrix<Real> p = tensor::schouten(sp_jet.g, sp);
    const tensor::Matrix<Real> dp = tensor::central_d1(schouten_at, zl, hl);
    report.taub_norm = static_cast<double>(tensor::frame_norm(sp_jet.g, tensor::taub(sp.christoffel, p, dp, d - 1)));
  }
  return report;
}

Eigen::VectorXd embed_point(const Geometry& geom, double t, std::span<const double> angles, double z) {
  const int d = geom.dim();
  if (static_cast<int>(angles.size()) != d - 1)
    throw ValidationError("embedding needs " + std::to_string(d - 1) + " angles");
  if (!std::isfinite(t) || !std::isfinite(z)) throw DomainError("embedding of a non-finite point");
  Eigen::VectorXd x(2 * d);
  x(0) = t;
  for (int a = 0; a < d - 1; ++a) {
    const double r = geom.profile(a).eval(z).value;
    x(2 * a + 1) = r * std::cos(angles[a]);
    x(2 * a + 2) = r * std::sin(angles[a]);
  }
  x(2 * d - 1) = z;
  return x;
}

InducedMetric induced_metric_oracle(const Geometry& geom, double z, double h, std::span<const double> angles) {
  if (!(h > 0.0)) throw ValidationError("oracle step must be positive");
  const int d = geom.dim();
  for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) require_nondegenerate(geom, z + s * h);
  std::vector<double> phi(angles.begin(), angles.end());
  if (phi.empty()) phi.assign(static_cast<std::size_t>(d - 1), 0.0);

  // coordinates q = (t, phi_1, ..., phi_{d-1}, z), evaluated at t = 0
  Eigen::VectorXd q = Eigen::VectorXd::Zero(d + 1);
  for (int a = 0; a < d - 1; ++a) q(a + 1) = phi[a];
  q(d) = z;
  const auto X = [&](const Eigen::VectorXd& c) {
    std::vector<double> ang(c.data() + 1, c.data() + d);
    return embed_point(geom, c(0), ang, c(d));
  };
  Eigen::MatrixXd J(2 * d, d + 1);
  for (int j = 0; j <= d; ++j) {
    const auto at = [&](double s) {
      Eigen::VectorXd c = q;
      c(j) += s * h;
      return X(c);
    };
    J.col(j) = tensor::central_d1([&](double s) { return at(s); }, 0.0, 1.0) / h;
  }
  Eigen::VectorXd eta = -Eigen::VectorXd::Ones(2 * d);
  eta(0) = 1.0;

  InducedMetric out;
  out.spacetime = J.transpose() * eta.asDiagonal() * J;
  out.spatial = -out.spacetime.bottomRightCorner(d, d);
  out.sample.diag = out.spatial.diagonal();
  out.sample.sqrt_det = out.sample.diag.cwiseSqrt().prod();
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j)
      if (i != j) out.max_offdiag = std::max(out.max_offdiag, std::abs(out.spacetime(i, j)));
  return out;
}

}  // namespace dimred
