#include <iostream>

#include <CLI11.hpp>

#include "dimred/errors.hpp"
#include "dimred/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scalar fields on (1+d) space-times with variable compactification radii"};
  std::string task_name, config_path, out_dir;
  std::uint64_t seed = 12345;
  app.add_option("task", task_name, "curvature | potential | spectrum | scatter | transform | verify")->required();
  app.add_option("--config", config_path, "experiment config (YAML)")->required();
  app.add_option("--out", out_dir, "output directory (default: output.dir of the config)");
  app.add_option("--seed", seed, "seed for randomized verify samples");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(dimred::ExitCode::parse_error);
  }

  dimred::ExperimentConfig config;
  dimred::Task task{};
  try {
    task = dimred::task_from_name(task_name);
    config = dimred::load_config(config_path);
  } catch (const dimred::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return static_cast<int>(dimred::ExitCode::parse_error);
  } catch (const dimred::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return static_cast<int>(dimred::ExitCode::validation_error);
  }
  dimred::RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  return static_cast<int>(dimred::run(task, config, options, std::cout, std::cerr));
}
