// Release acceptance: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dimred/errors.hpp"
#include "dimred/run.hpp"
#include "dimred/verify.hpp"
#include "support.hpp"

using namespace dimred;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

ExperimentConfig shipped(const std::string& name) { return load_config(fs::path(DIMRED_CONFIG_DIR) / name); }

double relative(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

// 1. closed-form scalar curvature against the finite-difference oracle
void scalar_curvature(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dims(2, 5);
  std::uniform_real_distribution<double> zs(-3, 3);
  double worst = 0.0, worst_3d = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = dims(rng);
    const auto g = testing::random_geometry(d, rng);
    const double z[] = {zs(rng)};
    worst = std::max(worst, curvature_closed_form_error(g, z));
    if (d == 3) worst_3d = std::max(worst_3d, curvature_closed_3d_error(g, z));
  }
  o.detail << "max_err=" << worst << " max_err_3d=" << worst_3d;
  o.require(worst < 1e-5, "u-space formula");
  o.require(worst_3d < 1e-5, "d=3 formula");
}

// 2. d = 3: conformally flat slices, non-flat space-time
void weyl_d3(Outcome& o) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> zs(-3, 3);
  double weyl = 0.0, scalars = 0.0, taub_min = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const auto g = testing::random_geometry(3, rng);
    const double z = zs(rng), h = default_oracle_step(g);
    for (double step : {h, h / 2}) {
      const auto r = curvature_oracle(g, z, step);
      weyl = std::max(weyl, r.weyl_norm);
      scalars = std::max(scalars, relative(r.spacetime_scalar, r.scalar));
      taub_min = std::min(taub_min, r.taub_norm);
    }
  }
  const Geometry designated(3, {testing::junction(), RadiusProfile::gaussian_bump(1.0, 0.5, 1.0, 0.0)});
  const auto r = curvature_oracle(designated, 0.4, default_oracle_step(designated));
  o.detail << "spatial_weyl=" << weyl << " spacetime_weyl=" << r.spacetime_weyl_norm << " taub=" << r.taub_norm
           << " min_sample_taub=" << taub_min << " scalar_diff=" << scalars;
  o.require(weyl < 1e-7, "spatial Weyl");
  o.require(r.spacetime_weyl_norm > 1e-3, "space-time Weyl");
  o.require(r.taub_norm > 1e-3, "Taub");
  o.require(taub_min > 1e-8, "Taub on random samples");
  o.require(scalars < 1e-6, "scalars");
}

// 3. embedding pulls back to the diagonal metric
void embedding(Outcome& o) {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> dims(2, 5);
  std::uniform_real_distribution<double> zs(-3, 3), angle(0, 2 * 3.141592653589793);
  double rel = 0.0, off = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = dims(rng);
    const auto g = testing::random_geometry(d, rng);
    std::vector<double> angles(static_cast<std::size_t>(d - 1));
    for (auto& a : angles) a = angle(rng);
    const auto e = embedding_error(g, zs(rng), angles);
    rel = std::max(rel, e.relative);
    off = std::max(off, e.offdiag);
  }
  o.detail << "relative=" << rel << " offdiag=" << off;
  o.require(rel < 1e-6, "diagonal");
  o.require(off < 1e-8, "off-diagonal");
}

// 4. coordinate map: inversion, flat identity, convergence in the tolerance
void coordinate_map(Outcome& o) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> zs(-4, 4);
  double trip = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto g = testing::random_geometry(2 + i % 4, rng);
    const auto map = build_u_map(g, {-4, 4}, 1e-10);
    for (int k = 0; k < 100; ++k) {
      const double z = zs(rng);
      trip = std::max(trip, relative(map.z_of_u(map.u_of_z(z)), z));
    }
  }
  double identity = 0.0;
  const auto flat = build_u_map(testing::flat(3), {-10, 10}, 1e-10);
  for (int k = 0; k <= 1000; ++k) {
    const double z = -10 + 0.02 * k;
    identity = std::max(identity, std::abs(flat.u_of_z(z) - z));
  }
  // sqrt(1 + e^{2z}) e^{-z} has a closed antiderivative
  const Geometry ramp(2, {RadiusProfile::exp_ramp(0.0, 1.0, 1.0, 0.0)});
  const auto F = [](double z) { return std::asinh(std::exp(z)) - std::sqrt(1.0 + std::exp(2 * z)) * std::exp(-z); };
  const auto error_at = [&](double tol) {
    const auto map = build_u_map(ramp, {-3, 3}, tol);
    double e = 0.0;
    for (int k = 0; k <= 60000; ++k) {
      const double z = -3.0 + 6.0 * k / 60000;
      e = std::max(e, std::abs(map.u_of_z(z) - (F(z) - F(0.0))));
    }
    return e;
  };
  bool halving = true;
  double worst_ratio = 0.0, previous = error_at(1e-6);
  for (double tol = 5e-7; tol > 1e-9; tol /= 2) {
    const double e = error_at(tol);
    halving = halving && e <= tol && e <= 0.5 * previous;
    worst_ratio = std::max(worst_ratio, e / previous);
    previous = e;
  }
  o.detail << "round_trip=" << trip << " flat_identity=" << identity << " worst_halving_ratio=" << worst_ratio;
  o.require(trip < 1e-10, "round trip");
  o.require(identity < 1e-12, "flat identity");
  o.require(halving, "tolerance halving");
}

// 5. direct z-solution against the Numerov solution in u
void transplant(Outcome& o) {
  struct Case {
    std::string name;
    Geometry geom;
    ModeSpec mode;
  };
  const auto c3 = shipped("conformal_d3.yaml");
  const auto c4 = shipped("mixed_d4.yaml");
  const auto c2 = shipped("deep_well_d2.yaml");
  ModeSpec m3 = c3.mode;
  m3.coupling = Coupling::minimal;  // the comparison is for the minimal operator
  const std::vector<Case> cases{{"d2", c2.geometry(), ModeSpec{1.6, 0.0, c2.mode.m, Coupling::minimal}},
                                {"d3", c3.geometry(), m3},
                                {"d4", c4.geometry(), c4.mode}};
  for (const auto& c : cases) {
    const auto s = transplant_study(c.geom, c.mode, {-3, 3}, 100, 5);
    o.detail << c.name << ": order=" << s.observed_order() << " final=" << s.final_relative() << " ";
    o.require(s.observed_order() >= 2, c.name + " order");
    o.require(s.final_relative() < 1e-6, c.name + " final difference");
  }
}

// 6. conformal coupling
void conformal(Outcome& o) {
  const bool exact = conformal_weight(3) == 6.0;
  bool formula = true;
  for (int d = 2; d <= 6; ++d) formula = formula && std::abs(conformal_weight(d) - 4.0 * d / (d - 1)) < 1e-15;
  const auto c = shipped("conformal_d3.yaml");
  const auto g = c.geometry();
  const auto map = build_u_map(g, c.z_range(), c.grid.tol);
  const double identity = conformal_identity_error(g, map, c.mode, 257);
  o.detail << "n_3=" << conformal_weight(3) << " identity=" << identity;
  o.require(exact, "n_3 == 6");
  o.require(formula, "n_d");
  o.require(identity < 1e-8, "identity");
}

// 7. bound states: shooting against the dense oracle
void spectrum(Outcome& o) {
  for (const char* name : {"gaussian_bump_d2.yaml", "deep_well_d2.yaml"}) {
    const auto c = shipped(name);
    const auto g = c.geometry();
    const auto map = build_u_map(g, c.z_range(), c.grid.tol, c.grid.u_origin_z);
    const auto cmp = compare_spectrum(g, map, c.mode, *c.spectrum);
    o.detail << name << ": modes=" << cmp.shooting.size() << " max_rel=" << cmp.max_relative << " ";
    o.require(!cmp.shooting.empty(), std::string(name) + " has modes");
    o.require(cmp.max_relative < 1e-6, std::string(name) + " agreement");
    o.require(cmp.contiguous_nodes, std::string(name) + " node counts");
  }
}

// 8. scattering through the junction
void scattering(Outcome& o) {
  const auto c = shipped("tanh_step_d2.yaml");
  const auto g = c.geometry();
  const auto map = build_u_map(g, c.z_range(), c.grid.tol, c.grid.u_origin_z);
  const auto& s = *c.scatter;
  ScatterOptions opt;
  opt.n_grid = s.n_grid;
  double flux = 0.0, tm = 0.0, t_last = 0.0;
  for (std::size_t i = 0; i < s.n_omega; ++i) {
    const double w = s.omega_min + (s.omega_max - s.omega_min) * static_cast<double>(i) / (s.n_omega - 1);
    ModeSpec mode = c.mode;
    mode.omega = w;
    const auto r = transmission(g, map, mode, opt);
    const auto V = [&](double u) { return potential(g, map, mode, u); };
    const auto oracle = transfer_matrix_transmission(V, map.u_domain(), 4 * (s.n_grid - 1), w);
    flux = std::max(flux, std::abs(r.transmission + r.reflection - 1));
    tm = std::max(tm, std::abs(r.transmission - oracle.transmission));
    t_last = r.transmission;
  }
  o.detail << "omegas=" << s.n_omega << " flux=" << flux << " transfer_matrix=" << tm << " T(omega_max)=" << t_last;
  o.require(flux < 1e-6, "flux");
  o.require(tm < 1e-5, "transfer matrix");
  o.require(1 - t_last < 1e-6, "high-frequency limit");
}

// 9. a constant extra circle with m = 0 reduces to the lower-dimensional problem
void reduction_consistency(Outcome& o) {
  const Geometry g2(2, {testing::junction()});
  const Geometry g3(3, {testing::junction(), RadiusProfile::constant(1.0)});
  const auto map2 = build_u_map(g2, {-8, 8}, 1e-11);
  const auto map3 = build_u_map(g3, {-8, 8}, 1e-11);
  const ModeSpec m2{1.3, 0.4, {2}, Coupling::minimal}, m3{1.3, 0.4, {2, 0}, Coupling::minimal};
  const auto u = map2.u_domain();
  double worst = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double x = u.lo + (u.hi - u.lo) * k / 2000.0;
    worst = std::max(worst, relative(potential(g3, map3, m3, x), potential(g2, map2, m2, x)));
  }
  o.detail << "max_diff=" << worst;
  o.require(worst < 1e-10, "potentials");
}

int tool(const std::string& args) {
  const std::string cmd = std::string(DIMRED_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. command line: repeatable output, verify passes on every shipped config
void command_line(Outcome& o) {
  const auto root = fs::temp_directory_path() / "dimred_acceptance";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"curvature", "flat_d3.yaml"},       {"potential", "conformal_d3.yaml"},
      {"spectrum", "gaussian_bump_d2.yaml"}, {"scatter", "tanh_step_d2.yaml"},
      {"transform", "mixed_d4.yaml"}};
  int files = 0;
  for (const auto& [task, cfg] : runs) {
    const auto path = (fs::path(DIMRED_CONFIG_DIR) / cfg).string();
    const auto a = root / (task + "_a"), b = root / (task + "_b");
    o.require(tool(task + " --config " + path + " --out " + a.string()) == 0, task + " run 1");
    o.require(tool(task + " --config " + path + " --out " + b.string()) == 0, task + " run 2");
    if (!fs::exists(a)) continue;
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      o.require(slurp(e.path()) == slurp(b / e.path().filename()), task + " " + e.path().filename().string());
    }
  }
  int verified = 0;
  for (const auto& e : fs::directory_iterator(DIMRED_CONFIG_DIR)) {
    if (e.path().extension() != ".yaml") continue;
    const bool ok = tool("verify --config " + e.path().string() + " --out " + (root / "verify").string()) == 0;
    o.require(ok, "verify " + e.path().filename().string());
    verified += ok;
  }
  o.detail << "compared_files=" << files << " verified_configs=" << verified;
  o.require(files >= 5, "output files");
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<void(Outcome&)> check;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{{"scalar curvature closed forms", scalar_curvature, 30},
                                        {"d=3 Weyl and Taub structure", weyl_d3, 30},
                                        {"embedding", embedding, 10},
                                        {"coordinate map", coordinate_map, 10},
                                        {"z-equation vs u-equation", transplant, 60},
                                        {"conformal coupling", conformal, INFINITY},
                                        {"bound-state spectrum", spectrum, 60},
                                        {"scattering", scattering, 60},
                                        {"dimensional consistency", reduction_consistency, INFINITY},
                                        {"command line", command_line, INFINITY}};
  int failures = 0, index = 0;
  for (const auto& [name, check, budget] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      check(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.detail << " time=" << seconds << "s";
    o.require(seconds < budget, "time budget");
    failures += !o.passed;
    std::printf("%s [%d] %s: %s\n", o.passed ? "PASS" : "FAIL", ++index, name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria passed\n", index - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
