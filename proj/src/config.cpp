#include "dimred/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace dimred {

namespace {

constexpr std::array<std::string_view, 6> kTaskNames = {"curvature", "potential", "spectrum",
                                                        "scatter",   "transform", "verify"};

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

void require_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) throw ParseError("'" + where + "' must be a mapping", line_of(n));
}

void reject_unknown(const YAML::Node& n, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError("unknown key '" + key + "' in '" + where + "'", line_of(kv.first));
  }
}

const YAML::Node required(const YAML::Node& n, const std::string& key, const std::string& where) {
  const YAML::Node v = n[key];
  if (!v) throw ParseError("missing key '" + key + "' in '" + where + "'", line_of(n));
  return v;
}

template <typename T>
T scalar(const YAML::Node& v, const std::string& key) {
  if (!v.IsScalar()) throw ParseError("'" + key + "' must be a scalar", line_of(v));
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError("'" + key + "' has the wrong type", line_of(v));
  }
}

double real(const YAML::Node& v, const std::string& key) { return scalar<double>(v, key); }

std::size_t count(const YAML::Node& v, const std::string& key) {
  const auto x = scalar<long long>(v, key);
  if (x < 0) throw ParseError("'" + key + "' must be non-negative", line_of(v));
  return static_cast<std::size_t>(x);
}

template <typename T, typename F>
void optional_key(const YAML::Node& n, const std::string& key, T& out, F convert) {
  if (const YAML::Node v = n[key]) out = convert(v, key);
}

ProfileFragment fragment_of(const YAML::Node& n, const std::string& where) {
  require_map(n, where);
  ProfileFragment f;
  f.family = scalar<std::string>(required(n, "family", where), "family");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (key == "family") continue;
    if (key == "allows_degeneration") {
      f.allows_degeneration = scalar<bool>(kv.second, key);
    } else if (key == "terms") {
      if (!kv.second.IsSequence()) throw ParseError("'terms' must be a list", line_of(kv.second));
      for (const auto& t : kv.second) f.terms.push_back(fragment_of(t, where + ".terms"));
    } else {
      f.values[key] = real(kv.second, key);
    }
  }
  return f;
}

RadiusProfile profile_of(const YAML::Node& n, const std::string& where) {
  const auto f = fragment_of(n, where);
  try {
    return parse_profile(f);
  } catch (const ParseError& e) {
    throw ParseError(std::string(where) + ": " + e.what(), line_of(n));
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line_of(n)) + ": " + where + ": " + e.what());
  }
}

}  // namespace

std::string_view task_name(Task t) { return kTaskNames[static_cast<std::size_t>(t)]; }

Task task_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i)
    if (kTaskNames[i] == name) return static_cast<Task>(i);
  throw ParseError("unknown task '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1);
  }
  require_map(root, "<root>");
  reject_unknown(root, "<root>", {"task", "geometry", "mode", "grid", "spectrum", "scatter", "output"});

  ExperimentConfig c;
  if (const auto t = root["task"]) c.task = task_from_name(scalar<std::string>(t, "task"));

  const auto geom = required(root, "geometry", "<root>");
  require_map(geom, "geometry");
  reject_unknown(geom, "geometry", {"d", "profiles"});
  c.d = scalar<int>(required(geom, "d", "geometry"), "d");
  const auto profiles = required(geom, "profiles", "geometry");
  if (!profiles.IsSequence()) throw ParseError("'geometry.profiles' must be a list", line_of(profiles));
  for (std::size_t i = 0; i < profiles.size(); ++i)
    c.profiles.push_back(profile_of(profiles[i], "geometry.profiles[" + std::to_string(i) + "]"));

  const auto mode = required(root, "mode", "<root>");
  require_map(mode, "mode");
  reject_unknown(mode, "mode", {"omega", "mass", "m", "coupling"});
  optional_key(mode, "omega", c.mode.omega, real);
  optional_key(mode, "mass", c.mode.mass, real);
  const auto m = required(mode, "m", "mode");
  if (!m.IsSequence()) throw ParseError("'mode.m' must be a list of integers", line_of(m));
  for (const auto& mi : m) c.mode.m.push_back(scalar<int>(mi, "mode.m"));
  if (const auto cp = mode["coupling"]) {
    const auto name = scalar<std::string>(cp, "coupling");
    if (name == "minimal") c.mode.coupling = Coupling::minimal;
    else if (name == "conformal") c.mode.coupling = Coupling::conformal;
    else throw ParseError("unknown coupling '" + name + "'", line_of(cp));
  }

  const auto grid = required(root, "grid", "<root>");
  require_map(grid, "grid");
  reject_unknown(grid, "grid", {"z_min", "z_max", "n_points", "tol", "u_origin_z"});
  c.grid.z_min = real(required(grid, "z_min", "grid"), "z_min");
  c.grid.z_max = real(required(grid, "z_max", "grid"), "z_max");
  c.grid.n_points = count(required(grid, "n_points", "grid"), "n_points");
  optional_key(grid, "tol", c.grid.tol, real);
  optional_key(grid, "u_origin_z", c.grid.u_origin_z, real);

  if (const auto s = root["spectrum"]) {
    require_map(s, "spectrum");
    reject_unknown(s, "spectrum", {"omega_sq_min", "omega_sq_max", "k_max", "n_grid"});
    SpectrumConfig sc;
    sc.omega_sq_min = real(required(s, "omega_sq_min", "spectrum"), "omega_sq_min");
    sc.omega_sq_max = real(required(s, "omega_sq_max", "spectrum"), "omega_sq_max");
    optional_key(s, "k_max", sc.k_max, count);
    optional_key(s, "n_grid", sc.n_grid, count);
    c.spectrum = sc;
  }
  if (const auto s = root["scatter"]) {
    require_map(s, "scatter");
    reject_unknown(s, "scatter", {"omega_min", "omega_max", "n_omega", "n_grid", "incoming"});
    ScatterConfig sc;
    sc.omega_min = real(required(s, "omega_min", "scatter"), "omega_min");
    sc.omega_max = real(required(s, "omega_max", "scatter"), "omega_max");
    optional_key(s, "n_omega", sc.n_omega, count);
    optional_key(s, "n_grid", sc.n_grid, count);
    if (const auto in = s["incoming"]) {
      const auto side = scalar<std::string>(in, "incoming");
      if (side == "left") sc.incoming = Side::left;
      else if (side == "right") sc.incoming = Side::right;
      else throw ParseError("'incoming' must be left or right", line_of(in));
    }
    c.scatter = sc;
  }
  if (const auto o = root["output"]) {
    require_map(o, "output");
    reject_unknown(o, "output", {"dir", "format"});
    optional_key(o, "dir", c.output.dir, scalar<std::string>);
    optional_key(o, "format", c.output.format, scalar<std::string>);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void ExperimentConfig::validate() const {
  if (d < 2) throw ValidationError("geometry.d must be at least 2");
  if (static_cast<int>(profiles.size()) != d - 1) {
    throw ValidationError("geometry.profiles: d = " + std::to_string(d) + " requires exactly " +
                          std::to_string(d - 1) + " profiles (profile count = d-1), got " +
                          std::to_string(profiles.size()));
  }
  if (!(grid.z_min < grid.z_max)) throw ValidationError("grid: z_min < z_max required");
  if (grid.n_points < 16) throw ValidationError("grid.n_points must be at least 16");
  if (!(grid.tol > 0.0)) throw ValidationError("grid.tol must be positive");
  if (!z_range().contains(grid.u_origin_z)) throw ValidationError("grid.u_origin_z must lie in [z_min, z_max]");
  mode.validate(d);
  if (output.format != "csv") throw ValidationError("output.format: only csv is supported");
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto report = validate_positivity(profiles[i], z_range(), 4001);
    if (!report.ok()) {
      throw ValidationError("geometry.profiles[" + std::to_string(i) + "]: radius is not positive on [z_min, z_max] " +
                            "(min " + std::to_string(report.min_value) + " at z = " +
                            std::to_string(report.argmin) + ")");
    }
  }
  if (spectrum) {
    if (!(spectrum->omega_sq_min < spectrum->omega_sq_max))
      throw ValidationError("spectrum: omega_sq_min < omega_sq_max required");
    if (spectrum->n_grid < 64) throw ValidationError("spectrum.n_grid must be at least 64");
  }
  if (scatter) {
    if (!(scatter->omega_min <= scatter->omega_max)) throw ValidationError("scatter: omega_min <= omega_max required");
    if (scatter->n_omega < 1) throw ValidationError("scatter.n_omega must be at least 1");
    if (scatter->n_grid < 16) throw ValidationError("scatter.n_grid must be at least 16");
  }
}

Geometry ExperimentConfig::geometry() const { return Geometry(d, profiles); }

}  // namespace dimred
