#include "dimred/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

namespace dimred {

namespace {

constexpr double kRenormThreshold = 1e150;
constexpr double kRenormFactor = 1e-150;

Eigen::VectorXd numerov_weights(const GridFunction& V) {
  const double c = V.step * V.step / 12.0;
  Eigen::VectorXd f = 1.0 - c * V.values.array();
  if ((f.array() <= 0.0).any()) throw SolverError("Numerov step too coarse for the potential (1 - h^2 V / 12 <= 0)");
  return f;
}

// Propagates along idx(0), idx(1), ... where idx(j) = forward ? j : n-1-j.
template <typename T>
int propagate(const Eigen::VectorXd& f, std::vector<T>& psi, bool forward, double& log_scale) {
  const auto n = static_cast<Eigen::Index>(psi.size());
  const auto idx = [&](Eigen::Index j) { return forward ? j : n - 1 - j; };
  int renorm = 0;
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    const auto cur = idx(j), prev = idx(j - 1), next = idx(j + 1);
    psi[next] = ((12.0 - 10.0 * f(cur)) * psi[cur] - f(prev) * psi[prev]) / f(next);
    if (std::abs(psi[next]) > kRenormThreshold) {
      for (Eigen::Index l = 0; l <= j + 1; ++l) psi[idx(l)] *= kRenormFactor;
      log_scale -= std::log(kRenormFactor);
      ++renorm;
    }
  }
  return renorm;
}

}  // namespace

int count_nodes(const Eigen::VectorXd& values) {
  int nodes = 0;
  double last = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (v == 0.0) continue;
    if (last != 0.0 && (v < 0.0) != (last < 0.0)) ++nodes;
    last = v;
  }
  return nodes;
}

NumerovSolution numerov_integrate(const GridFunction& V, double psi0, double psi1, Direction direction) {
  V.validate();
  const Eigen::Index n = V.size();
  if (n < 3) throw ValidationError("Numerov integration needs at least three nodes");
  const Eigen::VectorXd f = numerov_weights(V);
  const bool forward = direction == Direction::forward;
  std::vector<double> psi(static_cast<std::size_t>(n), 0.0);
  psi[forward ? 0 : n - 1] = psi0;
  psi[forward ? 1 : n - 2] = psi1;
  NumerovSolution out;
  out.renormalizations = propagate(f, psi, forward, out.log_scale);
  out.psi = {V.start, V.step, Eigen::Map<Eigen::VectorXd>(psi.data(), n)};
  return out;
}

double numerov_start(const std::function<double(double)>& V, double u0, double h, double psi0, double dpsi0) {
  constexpr int kSub = 8;
  const double s = h / kSub;
  double y = psi0, dy = dpsi0, u = u0;
  for (int i = 0; i < kSub; ++i) {
    const double v0 = V(u), vm = V(u + 0.5 * s), v1 = V(u + s);
    const double k1y = dy, k1d = v0 * y;
    const double k2y = dy + 0.5 * s * k1d, k2d = vm * (y + 0.5 * s * k1y);
    const double k3y = dy + 0.5 * s * k2d, k3d = vm * (y + 0.5 * s * k2y);
    const double k4y = dy + s * k3d, k4d = v1 * (y + s * k3y);
    y += s / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += s / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    u += s;
  }
  return y;
}

namespace {

struct ZCoeffs {
  double inv_p;  // 1 / p = rho_d / prod rho
  double drive;  // -prod rho * rho_d * w
  double p, prod, w;
};

ZCoeffs z_coeffs(const Geometry& geom, const ModeSpec& mode, double z) {
  const auto c = z_equation_coeffs(geom, mode, z);
  double prod = 1.0;
  for (const auto& j : geom.jets(z)) prod *= j.value;
  const double rho_d = prod / c.p;
  return {1.0 / c.p, -prod * rho_d * c.w, c.p, prod, c.w};
}

}  // namespace

ZSolution solve_z_equation_ivp(const Geometry& geom, const ModeSpec& mode, Interval z_range, std::size_t n,
                               double Z0, double dZ0) {
  mode.validate(geom.dim());
  ZSolution out;
  out.Z = GridFunction::zeros(z_range, n);
  out.flux = out.Z;
  const double h = out.Z.step;
  const auto rhs = [&](double z, double Z, double Y, double& dZ, double& dY) {
    const auto c = z_coeffs(geom, mode, z);
    dZ = Y * c.inv_p;
    dY = c.drive * Z;
  };
  double Z = Z0;
  double Y = z_coeffs(geom, mode, z_range.lo).p * dZ0;
  out.Z[0] = Z;
  out.flux[0] = Y;
  for (Eigen::Index i = 0; i + 1 < out.Z.size(); ++i) {
    const double z = out.Z.x(i);
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(z, Z, Y, a1, b1);
    rhs(z + 0.5 * h, Z + 0.5 * h * a1, Y + 0.5 * h * b1, a2, b2);
    rhs(z + 0.5 * h, Z + 0.5 * h * a2, Y + 0.5 * h * b2, a3, b3);
    rhs(z + h, Z + h * a3, Y + h * b3, a4, b4);
    Z += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    Y += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
    out.Z[i + 1] = Z;
    out.flux[i + 1] = Y;
  }
  if (!out.Z.values.allFinite()) throw SolverError("z-equation integration overflowed");

  double worst = 0.0;
  for (Eigen::Index i = 1; i + 1 < out.Z.size(); ++i) {
    const auto c = z_coeffs(geom, mode, out.Z.x(i));
    const double dflux = (out.flux[i + 1] - out.flux[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(c.p * dflux / (c.prod * c.prod) + c.w * out.Z[i]));
  }
  const double scale = out.Z.values.cwiseAbs().maxCoeff();
  out.residual = scale > 0.0 ? worst / scale : worst;
  return out;
}

ZSolution solve_z_equation(const Geometry& geom, const ModeSpec& mode, Interval z_range, std::size_t n, double Z0,
                           double Z1) {
  // Z(z_1) is linear in (Z0, dZ0): one RK4 step from unit data fixes dZ0.
  const double h = z_range.length() / static_cast<double>(n - 1);
  const Interval first{z_range.lo, z_range.lo + h};
  const double a = solve_z_equation_ivp(geom, mode, first, 2, 1.0, 0.0).Z[1];
  const double b = solve_z_equation_ivp(geom, mode, first, 2, 0.0, 1.0).Z[1];
  if (b == 0.0) throw SolverError("cannot match z-equation data at the first two nodes");
  return solve_z_equation_ivp(geom, mode, z_range, n, Z0, (Z1 - a * Z0) / b);
}

std::size_t sturm_count(const GridFunction& V, double shift) {
  const Eigen::Index n = V.size();
  if (n < 3) return 0;
  const double inv_h2 = 1.0 / (V.step * V.step);
  const double off2 = inv_h2 * inv_h2;
  std::size_t count = 0;
  double d = 0.0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double diag = 2.0 * inv_h2 + V[i] - shift;
    d = i == 1 ? diag : diag - off2 / d;
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * inv_h2;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace {

// Solves (-D2 + V) x = b on interior nodes by LDL^T without pivoting.
Eigen::VectorXd tridiagonal_solve(const GridFunction& V, const Eigen::VectorXd& b) {
  const Eigen::Index m = V.size() - 2;
  const double inv_h2 = 1.0 / (V.step * V.step);
  const double off = -inv_h2;
  Eigen::VectorXd d(m), y(m), x(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double diag = 2.0 * inv_h2 + V[i + 1];
    d(i) = i == 0 ? diag : diag - off * off / d(i - 1);
    if (std::abs(d(i)) < 1e-300) d(i) = 1e-300;
    y(i) = i == 0 ? b(i) : b(i) - off / d(i - 1) * y(i - 1);
  }
  for (Eigen::Index i = m - 1; i >= 0; --i) x(i) = (y(i) - (i + 1 < m ? off * x(i + 1) : 0.0)) / d(i);
  return x;
}

double rayleigh(const GridFunction& V, const Eigen::VectorXd& x) {
  const Eigen::Index m = x.size();
  const double inv_h2 = 1.0 / (V.step * V.step);
  double num = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double hx = (2.0 * inv_h2 + V[i + 1]) * x(i);
    if (i > 0) hx -= inv_h2 * x(i - 1);
    if (i + 1 < m) hx -= inv_h2 * x(i + 1);
    num += x(i) * hx;
  }
  return num / x.squaredNorm();
}

}  // namespace

SpectrumResult fd_eigen_oracle(const PotentialBuilder& builder, Interval omega_sq_range, std::size_t n_grid,
                               double rel_tol) {
  if (n_grid < 64) throw ValidationError("finite-difference oracle needs n_grid >= 64");
  if (!(omega_sq_range.hi > omega_sq_range.lo)) throw ValidationError("empty omega^2 range");
  const auto count = [&](double w2) { return sturm_count(builder(w2, n_grid)); };
  const std::size_t c_lo = count(omega_sq_range.lo);
  const std::size_t c_hi = count(omega_sq_range.hi);
  SpectrumResult out;
  for (std::size_t k = c_lo; k < c_hi; ++k) {
    double lo = omega_sq_range.lo, hi = omega_sq_range.hi;
    while (hi - lo > rel_tol * std::max(std::abs(hi), 1e-300)) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (count(mid) >= k + 1 ? hi : lo) = mid;
    }
    const double w2 = 0.5 * (lo + hi);
    const GridFunction V = builder(w2, n_grid);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(V.size() - 2);
    for (int it = 0; it < 4; ++it) {
      x = tridiagonal_solve(V, x);
      x /= x.cwiseAbs().maxCoeff();
    }
    GridFunction psi{V.start, V.step, Eigen::VectorXd::Zero(V.size())};
    psi.values.segment(1, x.size()) = x;
    out.eigen_omega_sq.push_back(w2);
    out.node_counts.push_back(count_nodes(x));
    out.residuals.push_back(std::abs(rayleigh(V, x)));
    out.wavefunctions.push_back(std::move(psi));
  }
  return out;
}

ConfinementReport check_confinement(const GridFunction& V, double wkb_suppression) {
  ConfinementReport r;
  const Eigen::Index n = V.size();
  const double inf = std::numeric_limits<double>::infinity();
  const auto side = [&](bool from_left) {
    double integral = 0.0;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      const Eigen::Index i = from_left ? j : n - 1 - j;
      const Eigen::Index next = from_left ? i + 1 : i - 1;
      if (V[next] <= 0.0) return integral;
      integral += 0.5 * V.step * (std::sqrt(V[i]) + std::sqrt(V[next]));
    }
    return inf;
  };
  if (!(V[0] > 0.0) || !(V[n - 1] > 0.0)) return r;
  r.wkb_left = side(true);
  r.wkb_right = side(false);
  r.confining = r.wkb_left >= wkb_suppression && r.wkb_right >= wkb_suppression;
  return r;
}

namespace {

struct Shooter {
  const SpectralPotential& sp;

  GridFunction potential(double w2) const { return sp.at(w2); }

  int count(double w2) const {
    const GridFunction V = potential(w2);
    const auto s = numerov_integrate(V, 0.0, V.step, Direction::forward);
    return count_nodes(s.psi.values.tail(V.size() - 1));
  }

  struct Match {
    double wronskian;
    GridFunction psi;
  };

  // Discrete Wronskian of the Numerov variables phi = f psi between the left
  // and right Dirichlet solutions, each scaled to unit norm at the match.
  Match match(double w2, Eigen::Index m, bool want_psi) const {
    const GridFunction V = potential(w2);
    const Eigen::VectorXd f = 1.0 - V.step * V.step / 12.0 * V.values.array();
    const auto L = numerov_integrate(V, 0.0, V.step, Direction::forward).psi.values;
    const auto R = numerov_integrate(V, 0.0, V.step, Direction::backward).psi.values;
    const double l0 = f(m) * L(m), l1 = f(m + 1) * L(m + 1);
    const double r0 = f(m) * R(m), r1 = f(m + 1) * R(m + 1);
    const double sl = std::hypot(l0, l1), sr = std::hypot(r0, r1);
    Match out{(l0 * r1 - l1 * r0) / (sl * sr), {}};
    if (want_psi) {
      const Eigen::Index n = V.size();
      const Eigen::Index pivot = std::abs(L(m)) >= std::abs(L(m + 1)) ? m : m + 1;
      Eigen::VectorXd psi(n);
      psi.head(pivot + 1) = L.head(pivot + 1) / L(pivot);
      psi.tail(n - pivot - 1) = R.tail(n - pivot - 1) / R(pivot);
      psi /= psi.cwiseAbs().maxCoeff();
      out.psi = {V.start, V.step, psi};
    }
    return out;
  }
};

}  // namespace

SpectrumResult bound_modes(const SpectralPotential& sp, Interval omega_sq_range, const BoundModeOptions& options) {
  if (!(omega_sq_range.hi > omega_sq_range.lo)) throw ValidationError("empty omega^2 range");
  if ((sp.weight.values.array() <= 0.0).any()) throw ValidationError("spectral weight must be positive");
  const auto conf = check_confinement(sp.at(omega_sq_range.hi), options.wkb_suppression);
  if (!conf.confining) {
    throw SolverError("potential is not confining for omega^2 = " + std::to_string(omega_sq_range.hi) +
                      " (WKB suppression " + std::to_string(std::min(conf.wkb_left, conf.wkb_right)) +
                      " < " + std::to_string(options.wkb_suppression) + "): scattering regime");
  }
  const Shooter shooter{sp};
  const int c_lo = shooter.count(omega_sq_range.lo);
  const int c_hi = shooter.count(omega_sq_range.hi);
  if (c_hi - c_lo > static_cast<int>(options.k_max))
    throw SolverError(std::to_string(c_hi - c_lo) + " bound modes in range exceed k_max = " +
                      std::to_string(options.k_max));

  SpectrumResult out;
  const Eigen::Index n = sp.base.size();
  for (int k = c_lo; k < c_hi; ++k) {
    double a = omega_sq_range.lo, b = omega_sq_range.hi;
    int ca = c_lo, cb = c_hi;
    while (!(ca == k && cb == k + 1)) {
      const double mid = 0.5 * (a + b);
      const int cm = shooter.count(mid);
      if (cm <= k) {
        a = mid;
        ca = cm;
      } else {
        b = mid;
        cb = cm;
      }
      if (b - a <= options.rel_tol * std::abs(b)) break;
    }
    // Match at the largest antinode of the left solution inside the well,
    // where the Wronskian is least sensitive to rounding near nodes.
    const GridFunction Vmid = sp.at(0.5 * (a + b));
    const Eigen::VectorXd Lmid = numerov_integrate(Vmid, 0.0, Vmid.step, Direction::forward).psi.values;
    Eigen::Index m = 0;
    Vmid.values.segment(2, n - 5).minCoeff(&m);
    m += 2;
    for (Eigen::Index i = 2; i + 3 < n; ++i)
      if (Vmid[i] < 0.0 && std::abs(Lmid(i)) > std::abs(Lmid(m))) m = i;

    double wa = shooter.match(a, m, false).wronskian;
    double wb = shooter.match(b, m, false).wronskian;
    const bool sign_change = (wa < 0.0) != (wb < 0.0);
    while (b - a > options.rel_tol * std::abs(b)) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      bool go_right;
      double wm = 0.0;
      if (sign_change) {
        wm = shooter.match(mid, m, false).wronskian;
        go_right = (wm < 0.0) == (wa < 0.0);
      } else {
        go_right = shooter.count(mid) <= k;
      }
      (go_right ? a : b) = mid;
      (go_right ? wa : wb) = wm;
    }
    double w2 = 0.5 * (a + b);
    // One secant step inside the final bracket.
    if (sign_change && wb != wa) w2 = std::clamp(a - wa * (b - a) / (wb - wa), a, b);
    auto final_match = shooter.match(w2, m, true);
    out.eigen_omega_sq.push_back(w2);
    out.node_counts.push_back(count_nodes(final_match.psi.values));
    out.residuals.push_back(std::abs(final_match.wronskian));
    out.wavefunctions.push_back(std::move(final_match.psi));
  }
  return out;
}

SpectrumResult bound_modes(const Geometry& geom, const UMap& map, const ModeSpec& mode_template,
                           Interval omega_sq_range, const BoundModeOptions& options) {
  const auto sp = tabulate_spectral_potential(geom, map, mode_template, options.n_grid);
  return bound_modes(sp, omega_sq_range, options);
}

namespace {

using cplx = std::complex<double>;

ScatterResult scatter_left(const Eigen::VectorXd& values, double h, double omega, const ScatterOptions& options) {
  const Eigen::Index n = values.size();
  if (n < 8) throw ValidationError("scattering grid too small");
  const GridFunction V{0.0, h, values};
  V.validate();
  if (std::abs(V[1] - V[0]) / h > options.asymptotic_tol || std::abs(V[n - 1] - V[n - 2]) / h > options.asymptotic_tol)
    throw SolverError("potential is not asymptotically constant at the grid ends");
  if (!(V[0] < 0.0)) throw SolverError("incoming channel is closed (V >= 0 on the incoming side)");
  const Eigen::VectorXd f = numerov_weights(V);

  ScatterResult r;
  r.omega = omega;
  std::vector<cplx> psi(static_cast<std::size_t>(n));
  const double fr = f(n - 1);
  const double c_r = (6.0 - 5.0 * fr) / fr;  // cos(theta) of the discrete plane wave
  double sin_r = 0.0;
  psi[n - 1] = 1.0;
  if (V[n - 1] < 0.0) {
    if (std::abs(c_r) >= 1.0) throw SolverError("grid too coarse for the outgoing wave");
    const double th = std::acos(c_r);
    sin_r = std::sin(th);
    psi[n - 2] = std::polar(1.0, -th);
    r.channel_open = true;
  } else {
    psi[n - 2] = std::exp(std::acosh(c_r));
  }
  double log_scale = 0.0;
  propagate(f, psi, false, log_scale);

  const double fl = f(0);
  const double c_l = (6.0 - 5.0 * fl) / fl;
  if (std::abs(c_l) >= 1.0) throw SolverError("grid too coarse for the incoming wave");
  const double th_l = std::acos(c_l);
  const cplx A = (psi[1] - psi[0] * std::polar(1.0, -th_l)) / (cplx(0.0, 2.0) * std::sin(th_l));
  const cplx B = psi[0] - A;
  const double a2 = std::norm(A);
  r.reflection = std::norm(B) / a2;
  // log_scale only rescales the transmitted amplitude (|C| = exp(-log_scale)).
  r.transmission =
      r.channel_open ? fr * fr * sin_r / (fl * fl * std::sin(th_l) * a2) * std::exp(-2.0 * log_scale) : 0.0;
  return r;
}

}  // namespace

ScatterResult transmission(const GridFunction& V, double omega, const ScatterOptions& options) {
  if (options.incoming == Side::left) return scatter_left(V.values, V.step, omega, options);
  return scatter_left(V.values.reverse(), V.step, omega, options);
}

ScatterResult transmission(const Geometry& geom, const UMap& map, const ModeSpec& mode, const ScatterOptions& options) {
  const auto table = tabulate_potential(geom, map, mode, options.n_grid);
  return transmission(table.V, mode.omega, options);
}

ScatterResult transfer_matrix_transmission(const std::function<double(double)>& V, Interval u_range,
                                           std::size_t n_slabs, double omega, Side incoming) {
  if (n_slabs < 1) throw ValidationError("transfer matrix needs at least one slab");
  const double h = u_range.length() / static_cast<double>(n_slabs);
  const bool from_left = incoming == Side::left;
  const double v_in = V(from_left ? u_range.lo : u_range.hi);
  const double v_out = V(from_left ? u_range.hi : u_range.lo);
  if (!(v_in < 0.0)) throw SolverError("incoming channel is closed (V >= 0 on the incoming side)");
  const double k_in = std::sqrt(-v_in);
  const cplx k_out = std::sqrt(cplx(-v_out, 0.0));

  // Propagate (psi, psi') from the outgoing end towards the incoming end,
  // in the coordinate s running from the outgoing end inwards.
  cplx psi = 1.0;
  cplx dpsi = cplx(0.0, 1.0) * k_out;  // outgoing wave (evanescent if k_out is imaginary)
  if (!from_left) dpsi = -dpsi;
  for (std::size_t j = 0; j < n_slabs; ++j) {
    const std::size_t slab = from_left ? n_slabs - 1 - j : j;
    const double mid = u_range.lo + (static_cast<double>(slab) + 0.5) * h;
    const cplx k = std::sqrt(cplx(-V(mid), 0.0));
    const cplx c = std::cos(k * h);
    const cplx s_over_k = std::abs(k) * h < 1e-8 ? cplx(h) : std::sin(k * h) / k;
    const cplx k_s = k * std::sin(k * h);
    // step of -h (from_left) or +h: psi(x + dx) = c psi + (s/k) psi' sign(dx), ...
    const double sgn = from_left ? -1.0 : 1.0;
    const cplx p_new = c * psi + sgn * s_over_k * dpsi;
    const cplx d_new = -sgn * k_s * psi + c * dpsi;
    psi = p_new;
    dpsi = d_new;
  }
  // Decompose into waves travelling towards / away from the scatterer.
  const cplx ik = cplx(0.0, from_left ? k_in : -k_in);
  const cplx A = 0.5 * (psi + dpsi / ik);
  const cplx B = 0.5 * (psi - dpsi / ik);
  ScatterResult r;
  r.omega = omega;
  r.channel_open = v_out < 0.0;
  r.reflection = std::norm(B) / std::norm(A);
  r.transmission = r.channel_open ? k_out.real() / (k_in * std::norm(A)) : 0.0;
  return r;
}

}  // namespace dimred
