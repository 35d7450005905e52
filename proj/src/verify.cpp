#include "dimred/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace dimred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool degenerating(const Geometry& geom) {
  return std::ranges::any_of(geom.profiles(), [](const RadiusProfile& p) { return p.allows_degeneration(); });
}

ModeSpec minimal_copy(ModeSpec mode) {
  if (mode.coupling == Coupling::conformal) mode.mass = 0.0;
  mode.coupling = Coupling::minimal;
  return mode;
}

}  // namespace

CheckResult make_check(std::string name, double value, double threshold, std::string note) {
  return {std::move(name), value < threshold, value, threshold, std::move(note)};
}

CheckResult make_lower_bound_check(std::string name, double value, double threshold, std::string note) {
  return {std::move(name), value >= threshold, value, threshold, std::move(note)};
}

double curvature_closed_form_error(const Geometry& geom, std::span<const double> z) {
  const double h = default_oracle_step(geom);
  double worst = 0.0;
  for (double x : z) {
    const double oracle = curvature_oracle(geom, x, h).scalar;
    const double closed = scalar_curvature_u(varrho_at_z(geom, x));
    worst = std::max(worst, std::abs(closed - oracle) / (1.0 + std::abs(oracle)));
  }
  return worst;
}

double curvature_closed_3d_error(const Geometry& geom, std::span<const double> z) {
  const double h = default_oracle_step(geom);
  double worst = 0.0;
  for (double x : z) {
    const double oracle = curvature_oracle(geom, x, h).scalar;
    worst = std::max(worst, std::abs(scalar_curvature_closed_3d(geom, x) - oracle) / (1.0 + std::abs(oracle)));
  }
  return worst;
}

EmbeddingError embedding_error(const Geometry& geom, double z, std::span<const double> angles) {
  const double h = 1e-4 * geom.characteristic_scale();
  const auto im = induced_metric_oracle(geom, z, h, angles);
  const auto closed = spatial_metric(geom, z);
  EmbeddingError e;
  e.relative = ((im.sample.diag - closed.diag).array().abs() / closed.diag.array()).maxCoeff();
  e.relative = std::max(e.relative, std::abs(im.spacetime(0, 0) - 1.0));
  e.offdiag = im.max_offdiag;
  return e;
}

double TransplantStudy::observed_order() const {
  // Pairs whose finer difference sits at the rounding floor carry no order
  // information; the last pair is the fallback.
  constexpr double kFloor = 1e-12;
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].max_diff <= kFloor * levels[i].psi_norm) continue;
    sum += std::log2(levels[i - 1].max_diff / levels[i].max_diff);
    ++pairs;
  }
  if (pairs > 0) return sum / pairs;
  if (levels.size() < 2) return 0.0;
  return std::log2(levels[levels.size() - 2].max_diff / levels.back().max_diff);
}

double TransplantStudy::final_relative() const {
  return levels.empty() ? kInf : levels.back().max_diff / levels.back().psi_norm;
}

TransplantStudy transplant_study(const Geometry& geom, const ModeSpec& mode, Interval z_range, std::size_t n_base,
                                 int levels, double slope) {
  if (mode.coupling != Coupling::minimal) throw ValidationError("transplant study needs minimal coupling");
  const UMap map = build_u_map(geom, z_range, 1e-13, z_range.lo);
  if (map.truncated()) throw DomainError("transplant range must avoid degenerate radii");
  const auto V = [&](double u) { return potential(geom, map, mode, u); };
  const double dpsi0 = slope / dudz(geom, z_range.lo);

  TransplantStudy study;
  std::size_t n = n_base;
  for (int level = 0; level < levels; ++level, n *= 2) {
    const auto Z = solve_z_equation_ivp(geom, mode, z_range, n + 1, 1.0, slope).Z;
    const auto table = tabulate_potential(geom, map, mode, n + 1);
    const double psi1 = numerov_start(V, table.V.start, table.V.step, 1.0, dpsi0);
    auto sol = numerov_integrate(table, 1.0, psi1);
    GridFunction psi = sol.psi;
    psi.values *= std::exp(sol.log_scale);

    TransplantLevel lv;
    lv.n = n + 1;
    lv.psi_norm = psi.values.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < Z.size(); ++i) {
      const double u = std::clamp(map.u_of_z(Z.x(i)), psi.start, psi.end());
      lv.max_diff = std::max(lv.max_diff, std::abs(Z[i] - psi.interpolate(u)));
    }
    study.levels.push_back(lv);
  }
  return study;
}

double conformal_identity_error(const Geometry& geom, const UMap& map, const ModeSpec& mode, std::size_t n) {
  ModeSpec conformal = mode;
  conformal.mass = 0.0;
  conformal.coupling = Coupling::conformal;
  const ModeSpec minimal = minimal_copy(conformal);
  const double nd = conformal_weight(geom.dim());
  double worst = 0.0;
  const Interval range = map.u_domain();
  for (std::size_t i = 0; i < n; ++i) {
    const double u =
        i + 1 == n ? range.hi : range.lo + range.length() * static_cast<double>(i) / static_cast<double>(n - 1);
    const auto rho = varrho_all(map, geom, u);
    double weight = 1.0;
    for (const auto& j : rho) weight *= j.value * j.value;
    const double vc = conformal_potential(geom, map, conformal, u);
    const double v = potential(geom, map, minimal, u);
    const double term = scalar_curvature_u(rho) / nd * weight;
    worst = std::max(worst, std::abs(vc - v - term) / (1.0 + std::abs(vc)));
  }
  return worst;
}

SpectrumComparison compare_spectrum(const Geometry& geom, const UMap& map, const ModeSpec& mode,
                                    const SpectrumConfig& spectrum) {
  const Interval range{spectrum.omega_sq_min, spectrum.omega_sq_max};
  BoundModeOptions opts;
  opts.n_grid = spectrum.n_grid;
  opts.k_max = spectrum.k_max;
  const auto shoot = bound_modes(geom, map, mode, range, opts);

  // Second-order oracle on two refinements, Richardson-combined to fourth order.
  std::map<std::size_t, SpectralPotential> cache;
  const PotentialBuilder builder = [&](double w2, std::size_t n) {
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, tabulate_spectral_potential(geom, map, mode, n)).first;
    return it->second.at(w2);
  };
  const std::size_t n1 = 2 * (spectrum.n_grid - 1) + 1;
  const std::size_t n2 = 2 * (n1 - 1) + 1;
  const auto coarse = fd_eigen_oracle(builder, range, n1);
  cache.clear();
  const auto fine = fd_eigen_oracle(builder, range, n2);

  SpectrumComparison out;
  out.shooting = shoot.eigen_omega_sq;
  out.nodes = shoot.node_counts;
  const auto count = shoot.eigen_omega_sq.size();
  if (coarse.eigen_omega_sq.size() != count || fine.eigen_omega_sq.size() != count) {
    out.max_relative = kInf;
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      const double extrapolated = (4.0 * fine.eigen_omega_sq[k] - coarse.eigen_omega_sq[k]) / 3.0;
      out.oracle.push_back(extrapolated);
      out.max_relative = std::max(out.max_relative, std::abs(shoot.eigen_omega_sq[k] - extrapolated) /
                                                        std::abs(extrapolated));
      if (fine.node_counts[k] != shoot.node_counts[k]) out.max_relative = kInf;
    }
  }
  out.contiguous_nodes = true;
  for (std::size_t k = 1; k < out.nodes.size(); ++k)
    out.contiguous_nodes = out.contiguous_nodes && out.nodes[k] == out.nodes[k - 1] + 1;
  return out;
}

std::vector<CheckResult> verify_config(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const Geometry geom = config.geometry();
  const int d = geom.dim();
  const UMap map = build_u_map(geom, config.z_range(), config.grid.tol, config.grid.u_origin_z);
  std::mt19937_64 rng(seed);

  const double h = default_oracle_step(geom);
  Interval zr = map.z_domain();
  if (degenerating(geom)) zr = {zr.lo + 5 * h, zr.hi - 5 * h};
  std::uniform_real_distribution<double> zdist(zr.lo, zr.hi);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> zs(16);
  for (auto& z : zs) z = zdist(rng);

  std::vector<CheckResult> out;
  out.push_back(make_check("curvature.closed_form_vs_oracle", curvature_closed_form_error(geom, zs), 1e-5));
  if (d == 3)
    out.push_back(make_check("curvature.closed_form_3d_vs_oracle", curvature_closed_3d_error(geom, zs), 1e-5));
  {
    double scalar_gap = 0.0, weyl = 0.0;
    for (double z : zs) {
      const auto rep = curvature_oracle(geom, z, h);
      scalar_gap = std::max(scalar_gap, std::abs(rep.spacetime_scalar - rep.scalar) / (1.0 + std::abs(rep.scalar)));
      weyl = std::max(weyl, rep.weyl_norm);
    }
    out.push_back(make_check("curvature.spacetime_equals_spatial_scalar", scalar_gap, 1e-6));
    if (d == 3) out.push_back(make_check("curvature.spatial_weyl_vanishes", weyl, 1e-7));
  }
  {
    EmbeddingError worst;
    double tetrad_err = 0.0;
    for (double z : zs) {
      std::vector<double> phi(static_cast<std::size_t>(d - 1));
      for (auto& p : phi) p = angle(rng);
      const auto e = embedding_error(geom, z, phi);
      worst.relative = std::max(worst.relative, e.relative);
      worst.offdiag = std::max(worst.offdiag, e.offdiag);
      const Eigen::VectorXd g = spacetime_metric(geom, z);
      const double scale = g.cwiseAbs().maxCoeff();
      tetrad_err = std::max(tetrad_err, (tetrad(geom, z).metric() - Eigen::MatrixXd(g.asDiagonal())).cwiseAbs().maxCoeff() /
                                    scale);
    }
    out.push_back(make_check("embedding.induced_metric", worst.relative, 1e-6));
    out.push_back(make_check("embedding.offdiagonal", worst.offdiag, 1e-8));
    out.push_back(make_check("embedding.tetrad", tetrad_err, 1e-12));
  }
  {
    double trip = 0.0;
    std::uniform_real_distribution<double> zin(map.z_domain().lo, map.z_domain().hi);
    for (int i = 0; i < 1000; ++i) {
      const double z = zin(rng);
      trip = std::max(trip, std::abs(map.z_of_u(map.u_of_z(z)) - z) / (1.0 + std::abs(z)));
    }
    double violations = 0.0;
    for (std::size_t i = 0; i < map.u_grid().size(); ++i) {
      if (!(map.dudz_grid()[i] > 0.0)) violations += 1.0;
      if (i > 0 && !(map.u_grid()[i] > map.u_grid()[i - 1])) violations += 1.0;
    }
    out.push_back(make_check("umap.round_trip", trip, 1e-10));
    out.push_back(make_check("umap.monotone", violations, 0.5));

    const double du = 1e-3 * geom.characteristic_scale();
    const Interval ur = map.u_domain();
    std::uniform_real_distribution<double> udist(ur.lo + 2 * du, ur.hi - 2 * du);
    double chain = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double u = udist(rng);
      const auto c = varrho_all(map, geom, u);
      const auto p1 = varrho_all(map, geom, u + du), p2 = varrho_all(map, geom, u + 2 * du);
      const auto m1 = varrho_all(map, geom, u - du), m2 = varrho_all(map, geom, u - 2 * du);
      for (std::size_t a = 0; a < c.size(); ++a) {
        const auto five_point = [&](auto get) {
          return (get(m2[a]) - 8.0 * get(m1[a]) + 8.0 * get(p1[a]) - get(p2[a])) / (12.0 * du);
        };
        const double d1 = five_point([](const Jet<double>& j) { return j.value; });
        const double d2 = five_point([](const Jet<double>& j) { return j.d1; });
        chain = std::max({chain, std::abs(d1 - c[a].d1) / (1.0 + std::abs(c[a].d1)),
                          std::abs(d2 - c[a].d2) / (1.0 + std::abs(c[a].d2))});
      }
    }
    out.push_back(make_check("umap.chain_rule", chain, 1e-5));
  }
  if (!degenerating(geom)) {
    const double scale = geom.characteristic_scale();
    const double z0 = config.grid.u_origin_z;
    const Interval sub{std::max(zr.lo, z0 - 3 * scale), std::min(zr.hi, z0 + 3 * scale)};
    const auto study = transplant_study(geom, minimal_copy(config.mode), sub, 100, 5);
    out.push_back(make_check("reduction.transplant_difference", study.final_relative(), 1e-6));
    out.push_back(make_lower_bound_check("reduction.transplant_order", study.observed_order(), 2.0));
  }
  out.push_back(make_check("reduction.conformal_identity", conformal_identity_error(geom, map, config.mode, 257),
                           1e-8));
  if (config.spectrum) {
    const auto cmp = compare_spectrum(geom, map, config.mode, *config.spectrum);
    out.push_back(make_check("spectrum.shooting_vs_fd_oracle", cmp.max_relative, 1e-6,
                             std::to_string(cmp.shooting.size()) + " modes"));
    out.push_back(make_lower_bound_check("spectrum.contiguous_nodes", cmp.contiguous_nodes ? 1.0 : 0.0, 1.0));
  }
  if (config.scatter) {
    const auto& sc = *config.scatter;
    ScatterOptions opts;
    opts.n_grid = sc.n_grid;
    opts.incoming = sc.incoming;
    double flux = 0.0, tm = 0.0;
    const std::size_t n_tm = std::min<std::size_t>(sc.n_omega, 5);
    for (std::size_t i = 0; i < sc.n_omega; ++i) {
      ModeSpec mode = config.mode;
      mode.omega = sc.n_omega == 1 ? sc.omega_min
                                   : sc.omega_min + (sc.omega_max - sc.omega_min) * static_cast<double>(i) /
                                                        static_cast<double>(sc.n_omega - 1);
      const auto r = transmission(geom, map, mode, opts);
      if (r.channel_open) flux = std::max(flux, std::abs(r.transmission + r.reflection - 1.0));
      if (i % std::max<std::size_t>(1, sc.n_omega / n_tm) == 0) {
        const auto V = [&](double u) {
          return mode.coupling == Coupling::conformal ? conformal_potential(geom, map, mode, u)
                                                      : potential(geom, map, mode, u);
        };
        const auto t = transfer_matrix_transmission(V, map.u_domain(), 4 * (sc.n_grid - 1), mode.omega, sc.incoming);
        tm = std::max(tm, std::abs(t.transmission - r.transmission));
      }
    }
    out.push_back(make_check("scatter.flux_conservation", flux, 1e-6));
    out.push_back(make_check("scatter.transfer_matrix_oracle", tm, 1e-5));
  }
  return out;
}

}  // namespace dimred
