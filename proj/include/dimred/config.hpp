#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimred/geometry.hpp"
#include "dimred/reduction.hpp"
#include "dimred/solver.hpp"

namespace dimred {

enum class Task { curvature, potential, spectrum, scatter, transform, verify };

std::string_view task_name(Task t);
Task task_from_name(std::string_view name);  // throws ParseError

struct GridConfig {
  double z_min = -10.0;
  double z_max = 10.0;
  std::size_t n_points = 201;
  double tol = 1e-10;
  double u_origin_z = 0.0;
};

struct SpectrumConfig {
  double omega_sq_min = 0.0;
  double omega_sq_max = 1.0;
  std::size_t k_max = 32;
  std::size_t n_grid = 20001;
};

struct ScatterConfig {
  double omega_min = 1.0;
  double omega_max = 2.0;
  std::size_t n_omega = 1;
  std::size_t n_grid = 8001;
  Side incoming = Side::left;
};

struct OutputConfig {
  std::string dir = ".";
  std::string format = "csv";
};

// One experiment per file; see README for the key reference.
struct ExperimentConfig {
  int d = 3;
  std::vector<RadiusProfile> profiles;
  ModeSpec mode;
  GridConfig grid;
  std::optional<Task> task;
  std::optional<SpectrumConfig> spectrum;
  std::optional<ScatterConfig> scatter;
  OutputConfig output;

  // Throws ValidationError naming the violated constraint.
  void validate() const;
  Geometry geometry() const;
  Interval z_range() const { return {grid.z_min, grid.z_max}; }
};

// Throws ParseError (with line) for malformed YAML, unknown or missing keys,
// and ValidationError for invalid profile parameters.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace dimred
