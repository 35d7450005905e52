#include "dimred/run.hpp"

#include <ostream>

#include "dimred/verify.hpp"

namespace dimred {

namespace {

UMap config_map(const ExperimentConfig& c, const Geometry& geom) {
  return build_u_map(geom, c.z_range(), c.grid.tol, c.grid.u_origin_z);
}

std::vector<double> linspace(Interval r, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = n == 1 ? r.lo : (i + 1 == n ? r.hi : r.lo + r.length() * static_cast<double>(i) / static_cast<double>(n - 1));
  return x;
}

double mode_potential(const Geometry& geom, const UMap& map, const ModeSpec& mode, double u) {
  return mode.coupling == Coupling::conformal ? conformal_potential(geom, map, mode, u)
                                              : potential(geom, map, mode, u);
}

}  // namespace

Table curvature_table(const ExperimentConfig& c) {
  const Geometry geom = c.geometry();
  const double h = default_oracle_step(geom);
  Interval range = c.z_range();
  if (std::ranges::any_of(geom.profiles(), [](const RadiusProfile& p) { return p.allows_degeneration(); })) {
    range = config_map(c, geom).z_domain();
    range = {range.lo + 4 * h, range.hi - 4 * h};
  }
  Table t({"z", "scalar", "weyl_norm", "taub_norm", "spacetime_weyl_norm"});
  for (double z : linspace(range, c.grid.n_points)) {
    const auto rep = curvature_oracle(geom, z, h);
    t.add_row({z, scalar_curvature_u(varrho_at_z(geom, z)), rep.weyl_norm, rep.taub_norm, rep.spacetime_weyl_norm});
  }
  return t;
}

Table potential_table(const ExperimentConfig& c) {
  const Geometry geom = c.geometry();
  const UMap map = config_map(c, geom);
  const auto table = tabulate_potential(geom, map, c.mode, c.grid.n_points);
  Table t({"u", "V"});
  for (Eigen::Index i = 0; i < table.V.size(); ++i) t.add_row({table.V.x(i), table.V[i]});
  return t;
}

Table transform_table(const ExperimentConfig& c) {
  const Geometry geom = c.geometry();
  const UMap map = config_map(c, geom);
  Table t({"z", "u", "V"});
  for (double z : linspace(map.z_domain(), c.grid.n_points)) {
    const double u = map.u_of_z(z);
    t.add_row({z, u, mode_potential(geom, map, c.mode, u)});
  }
  return t;
}

Table umap_table(const ExperimentConfig& c) {
  const Geometry geom = c.geometry();
  const UMap map = config_map(c, geom);
  Table t({"z", "u", "dz_du"});
  for (std::size_t i = 0; i < map.z_grid().size(); ++i)
    t.add_row({map.z_grid()[i], map.u_grid()[i], 1.0 / map.dudz_grid()[i]});
  return t;
}

Table spectrum_table(const ExperimentConfig& c, Table* wavefunctions) {
  if (!c.spectrum) throw ValidationError("task spectrum requires a 'spectrum' section");
  const Geometry geom = c.geometry();
  const UMap map = config_map(c, geom);
  BoundModeOptions opts;
  opts.n_grid = c.spectrum->n_grid;
  opts.k_max = c.spectrum->k_max;
  const auto res = bound_modes(geom, map, c.mode, {c.spectrum->omega_sq_min, c.spectrum->omega_sq_max}, opts);
  Table t({"k", "omega_sq", "nodes", "residual"});
  for (std::size_t k = 0; k < res.eigen_omega_sq.size(); ++k)
    t.add_row({static_cast<double>(k), res.eigen_omega_sq[k], static_cast<double>(res.node_counts[k]),
               res.residuals[k]});
  if (wavefunctions) {
    std::vector<std::string> names{"u"};
    for (std::size_t k = 0; k < res.wavefunctions.size(); ++k) names.push_back("psi_" + std::to_string(k));
    *wavefunctions = Table(names);
    const auto sp = tabulate_spectral_potential(geom, map, c.mode, opts.n_grid);
    for (Eigen::Index i = 0; i < sp.base.size(); ++i) {
      std::vector<double> row{sp.base.x(i)};
      for (const auto& psi : res.wavefunctions) row.push_back(psi[i]);
      wavefunctions->add_row(row);
    }
  }
  return t;
}

Table scatter_table(const ExperimentConfig& c) {
  if (!c.scatter) throw ValidationError("task scatter requires a 'scatter' section");
  const Geometry geom = c.geometry();
  const UMap map = config_map(c, geom);
  ScatterOptions opts;
  opts.n_grid = c.scatter->n_grid;
  opts.incoming = c.scatter->incoming;
  Table t({"omega", "transmission", "reflection", "channel_open"});
  for (double omega : linspace({c.scatter->omega_min, c.scatter->omega_max}, c.scatter->n_omega)) {
    ModeSpec mode = c.mode;
    mode.omega = omega;
    const auto r = transmission(geom, map, mode, opts);
    t.add_row({omega, r.transmission, r.reflection, r.channel_open ? 1.0 : 0.0});
  }
  return t;
}

ExitCode run(Task task, const ExperimentConfig& config, const RunOptions& options, std::ostream& out,
             std::ostream& err) {
  try {
    config.validate();
    const std::filesystem::path dir = options.out_dir.empty() ? std::filesystem::path(config.output.dir)
                                                              : options.out_dir;
    const auto write = [&](const Table& t, const char* name) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      emit_csv(t, dir / name);
      out << "wrote " << (dir / name).string() << " (" << t.rows() << " rows)\n";
    };
    switch (task) {
      case Task::curvature: write(curvature_table(config), "curvature.csv"); break;
      case Task::potential: write(potential_table(config), "potential.csv"); break;
      case Task::transform:
        write(transform_table(config), "transform.csv");
        write(umap_table(config), "umap.csv");
        break;
      case Task::spectrum: {
        Table wf;
        write(spectrum_table(config, &wf), "spectrum.csv");
        write(wf, "wavefunctions.csv");
        break;
      }
      case Task::scatter: write(scatter_table(config), "scatter.csv"); break;
      case Task::verify: {
        const auto checks = verify_config(config, options.seed);
        bool all = true;
        for (const auto& c : checks) {
          all = all && c.passed;
          out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  value=" << format_real(c.value)
              << "  threshold=" << format_real(c.threshold);
          if (!c.note.empty()) out << "  (" << c.note << ")";
          out << '\n';
        }
        out << (all ? "verify: all " : "verify: FAILED, ") << checks.size() << " checks\n";
        return all ? ExitCode::ok : ExitCode::check_failed;
      }
    }
    return ExitCode::ok;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return ExitCode::parse_error;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return ExitCode::validation_error;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << '\n';
    return ExitCode::solver_error;
  }
}

}  // namespace dimred
