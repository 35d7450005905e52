#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "dimred/config.hpp"
#include "dimred/csv.hpp"

namespace dimred {

enum class ExitCode : int { ok = 0, check_failed = 1, parse_error = 2, validation_error = 3, solver_error = 4 };

struct RunOptions {
  std::filesystem::path out_dir;  // empty: the config's output.dir
  std::uint64_t seed = 12345;
};

// Task tables, computed without touching the filesystem.
Table curvature_table(const ExperimentConfig& config);
Table potential_table(const ExperimentConfig& config);
Table transform_table(const ExperimentConfig& config);
Table umap_table(const ExperimentConfig& config);
Table spectrum_table(const ExperimentConfig& config, Table* wavefunctions = nullptr);
Table scatter_table(const ExperimentConfig& config);

// Validates, runs the task and writes its CSV files; errors are reported on
// `err` and mapped to exit codes.
ExitCode run(Task task, const ExperimentConfig& config, const RunOptions& options, std::ostream& out,
             std::ostream& err);

}  // namespace dimred
