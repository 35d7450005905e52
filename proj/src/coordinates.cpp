#include "dimred/coordinates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimred {

double dudz(const Geometry& geom, double z) {
  double prod = 1.0;
  double zz = 1.0;
  for (int a = 0; a < geom.torus_dim(); ++a) {
    const auto j = geom.profile(a).eval(z);
    if (!(j.value > 0.0)) {
      throw DomainError("profile rho_" + std::to_string(a + 1) + " degenerates at z = " + std::to_string(z));
    }
    prod *= j.value;
    zz += j.d1 * j.d1;
  }
  return std::sqrt(zz) / prod;
}

UMap::UMap(std::vector<double> z, std::vector<double> u, std::vector<double> dudz, Interval requested,
           bool truncated, double estimated_error)
    : z_(std::move(z)),
      u_(std::move(u)),
      dudz_(std::move(dudz)),
      requested_(requested),
      truncated_(truncated),
      estimated_error_(estimated_error) {
  if (z_.size() < 2 || z_.size() != u_.size() || z_.size() != dudz_.size())
    throw ValidationError("u-map tables must have equal length >= 2");
  for (std::size_t i = 1; i < z_.size(); ++i) {
    if (!(z_[i] > z_[i - 1]) || !(u_[i] > u_[i - 1])) throw ValidationError("u-map tables must be strictly increasing");
  }
}

std::size_t UMap::panel_of_z(double z) const {
  if (!(z >= z_.front() && z <= z_.back())) throw DomainError("z = " + std::to_string(z) + " outside the u-map range");
  const auto it = std::upper_bound(z_.begin(), z_.end(), z);
  const auto i = static_cast<std::size_t>(std::distance(z_.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, z_.size() - 2);
}

std::size_t UMap::panel_of_u(double u) const {
  if (!(u >= u_.front() && u <= u_.back())) throw DomainError("u = " + std::to_string(u) + " outside the u-map range");
  const auto it = std::upper_bound(u_.begin(), u_.end(), u);
  const auto i = static_cast<std::size_t>(std::distance(u_.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, u_.size() - 2);
}

double UMap::hermite(std::size_t i, double z) const {
  const double dz = z_[i + 1] - z_[i];
  const double t = (z - z_[i]) / dz;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u_[i] + (t3 - 2 * t2 + t) * dz * dudz_[i] + (-2 * t3 + 3 * t2) * u_[i + 1] +
         (t3 - t2) * dz * dudz_[i + 1];
}

double UMap::hermite_slope(std::size_t i, double z) const {
  const double dz = z_[i + 1] - z_[i];
  const double t = (z - z_[i]) / dz;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * (u_[i] - u_[i + 1]) / dz + (3 * t2 - 4 * t + 1) * dudz_[i] + (3 * t2 - 2 * t) * dudz_[i + 1];
}

namespace {

// Snaps arguments within a few ulps of a table end onto it (uniform grids
// built as start + i * step can overshoot the end by rounding).
double snap(double x, double lo, double hi) {
  const double slack = 4.0 * std::numeric_limits<double>::epsilon();
  if (x > hi && x <= hi + slack * (1.0 + std::abs(hi))) return hi;
  if (x < lo && x >= lo - slack * (1.0 + std::abs(lo))) return lo;
  return x;
}

}  // namespace

double UMap::u_of_z(double z) const {
  z = snap(z, z_.front(), z_.back());
  const std::size_t i = panel_of_z(z);
  if (z == z_[i]) return u_[i];
  if (z == z_[i + 1]) return u_[i + 1];
  return hermite(i, z);
}

double UMap::z_of_u(double u) const {
  u = snap(u, u_.front(), u_.back());
  const std::size_t i = panel_of_u(u);
  if (u == u_[i]) return z_[i];
  if (u == u_[i + 1]) return z_[i + 1];
  double lo = z_[i], hi = z_[i + 1];
  double z = lo + (u - u_[i]) / (u_[i + 1] - u_[i]) * (hi - lo);
  for (int it = 0; it < 100; ++it) {
    const double f = hermite(i, z) - u;
    if (f == 0.0) break;
    (f < 0.0 ? lo : hi) = z;
    const double slope = hermite_slope(i, z);
    double next = z - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-16 * (1.0 + std::abs(z)) || hi - lo <= 1e-16 * (1.0 + std::abs(z))) {
      z = next;
      break;
    }
    z = next;
  }
  return z;
}

namespace {

struct Node {
  double z, u, g;
};

// Marches from `from` to `to` (either direction) accumulating u from u = 0.
std::vector<Node> march(const Geometry& geom, double from, double to, double tol, double length,
                        std::size_t& panel_budget, double& error_sum) {
  std::vector<Node> nodes;
  const double g_from = dudz(geom, from);
  nodes.push_back({from, 0.0, g_from});
  if (from == to) return nodes;
  const double dir = to > from ? 1.0 : -1.0;
  const double h_max = length / 32.0;
  double h = std::min(h_max, geom.characteristic_scale() / 8.0);
  double x = from, u = 0.0, f0 = g_from;
  while (dir * (to - x) > 0.0) {
    const double remaining = std::abs(to - x);
    const bool last = h >= remaining * (1.0 - 1e-12);
    const double step = last ? remaining : h;
    const double x1 = last ? to : x + dir * step;
    const double s = dir * step;  // signed width
    const double fq1 = dudz(geom, x + 0.25 * s);
    const double fm = dudz(geom, x + 0.5 * s);
    const double fq3 = dudz(geom, x + 0.75 * s);
    const double f1 = dudz(geom, x1);
    const double s1 = s / 6.0 * (f0 + 4.0 * fm + f1);
    const double s2 = s / 12.0 * (f0 + 4.0 * fq1 + 2.0 * fm + 4.0 * fq3 + f1);
    const double err = std::abs(s2 - s1) / 15.0;
    const double integral = s2 + (s2 - s1) / 15.0;
    const double left_half = s / 12.0 * (f0 + 4.0 * fq1 + fm);
    const double hermite_mid = 0.5 * integral + s * (f0 - f1) / 8.0;
    const double interp_err = std::abs(hermite_mid - left_half);
    // Panels where the integrand far exceeds its value at the origin (near a
    // degenerating radius) get a proportionally larger share of the budget.
    const double weight = std::max(1.0, 0.5 * (f0 + f1) / g_from);
    const double local_tol = tol * weight * step / length;
    const double secant = integral / s;
    const double a = f0 / secant, b = f1 / secant;
    const bool monotone = a * a + b * b <= 9.0;

    // Both budgets are per unit length, so the interpolation error of an
    // accepted panel scales like tol^(4/3) on smooth stretches.
    const double r1 = err > 0.0 ? std::pow(local_tol / err, 0.25) : 4.0;
    const double r2 = interp_err > 0.0 ? std::pow(local_tol / interp_err, 1.0 / 3.0) : 4.0;
    const double factor = 0.9 * std::min(r1, r2);
    if (err <= local_tol && interp_err <= local_tol && monotone) {
      x = x1;
      u += integral;
      f0 = f1;
      nodes.push_back({x, u, f1});
      error_sum += err;
      h = std::min(h_max, step * std::clamp(factor, 0.2, 4.0));
      if (panel_budget-- == 0) throw SolverError("u-map tolerance unachievable within the panel budget");
    } else {
      h = step * std::clamp(monotone ? factor : 0.5, 0.1, 0.5);
      if (h < 1e-14 * (1.0 + std::abs(x))) throw SolverError("u-map step size underflow near z = " + std::to_string(x));
    }
  }
  return nodes;
}

double min_radius(const Geometry& geom, double z) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& p : geom.profiles()) r = std::min(r, p.eval(z).value);
  return r;
}

}  // namespace

UMap build_u_map(const Geometry& geom, Interval z_range, const UMapOptions& options) {
  if (!(z_range.hi > z_range.lo)) throw ValidationError("u-map needs z_min < z_max");
  if (!(options.tol > 0.0)) throw ValidationError("u-map tolerance must be positive");
  if (!z_range.contains(options.u_origin_z)) throw ValidationError("u origin must lie inside the z range");

  const bool degenerating = std::any_of(geom.profiles().begin(), geom.profiles().end(),
                                        [](const RadiusProfile& p) { return p.allows_degeneration(); });
  Interval work = z_range;
  bool truncated = false;
  if (!degenerating) {
    for (int a = 0; a < geom.torus_dim(); ++a) {
      const auto report = validate_positivity(geom.profile(a), z_range, 4001);
      if (!report.ok()) {
        throw DomainError("profile rho_" + std::to_string(a + 1) + " degenerates in the u-map range (min " +
                          std::to_string(report.min_value) + " at z = " + std::to_string(report.argmin) + ")");
      }
    }
  }
  if (degenerating) {
    const double z0 = options.u_origin_z;
    if (!(min_radius(geom, z0) >= options.rho_min)) throw DomainError("radius below rho_min at the u origin");
    constexpr int kSamples = 4000;
    const auto shrink = [&](double end) {
      const double h = (end - z0) / kSamples;
      double good = z0;
      for (int i = 1; i <= kSamples; ++i) {
        const double z = i == kSamples ? end : z0 + i * h;
        if (min_radius(geom, z) < options.rho_min) {
          double lo = good, hi = z;
          for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-14 * (1.0 + std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (min_radius(geom, mid) >= options.rho_min ? lo : hi) = mid;
          }
          truncated = true;
          return lo;
        }
        good = z;
      }
      return end;
    };
    work = {shrink(z_range.lo), shrink(z_range.hi)};
    if (!(work.hi > work.lo)) throw DomainError("u-map range collapses after truncation at rho_min");
  }

  std::size_t budget = options.max_panels;
  double error_sum = 0.0;
  const double length = work.length();
  const double origin = std::clamp(options.u_origin_z, work.lo, work.hi);
  auto back = march(geom, origin, work.lo, options.tol, length, budget, error_sum);
  auto fwd = march(geom, origin, work.hi, options.tol, length, budget, error_sum);

  std::vector<double> z, u, g;
  z.reserve(back.size() + fwd.size());
  u.reserve(z.capacity());
  g.reserve(z.capacity());
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    z.push_back(it->z);
    u.push_back(it->u);
    g.push_back(it->g);
  }
  for (std::size_t i = 1; i < fwd.size(); ++i) {
    z.push_back(fwd[i].z);
    u.push_back(fwd[i].u);
    g.push_back(fwd[i].g);
  }
  return UMap(std::move(z), std::move(u), std::move(g), z_range, truncated, error_sum);
}

std::vector<Jet<double>> varrho_at_z(const Geometry& geom, double z) {
  const auto jets = geom.jets(z);
  double prod = 1.0, zz = 1.0, sum_log = 0.0, sum_dd = 0.0;
  for (const auto& j : jets) {
    if (!(j.value > 0.0)) throw DomainError("degenerate radius at z = " + std::to_string(z));
    prod *= j.value;
    zz += j.d1 * j.d1;
    sum_log += j.d1 / j.value;
    sum_dd += j.d1 * j.d2;
  }
  const double rho_d = std::sqrt(zz);
  const double q = prod / rho_d;                             // dz/du
  const double dq = q * (sum_log - sum_dd / (rho_d * rho_d));  // d(dz/du)/dz
  std::vector<Jet<double>> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back({j.value, j.d1 * q, (j.d2 * q + j.d1 * dq) * q});
  return out;
}

std::vector<Jet<double>> varrho_all(const UMap& map, const Geometry& geom, double u) {
  return varrho_at_z(geom, map.z_of_u(u));
}

Jet<double> varrho(const UMap& map, const Geometry& geom, int alpha, double u) {
  if (alpha < 0 || alpha >= geom.torus_dim()) throw ValidationError("radius index out of range");
  return varrho_all(map, geom, u)[static_cast<std::size_t>(alpha)];
}

}  // namespace dimred
