#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "stringgp/experiment.hpp"

using namespace stringgp;

int main(int argc, char **argv) {
  CLI::App app{"Sparse Gaussian Processes over string domains"};
  app.require_subcommand(1);

  std::string config_path, plot_dir, output_override;
  std::int64_t seed_override = -1;
  int threads = 0;
  app.add_option("--seed", seed_override, "override the config seed");
  app.add_option("--output", output_override, "override the output directory");
  app.add_option("--threads", threads, "OpenMP thread count (0 = default)");

  auto *run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "JSON config file")->required();
  auto *bench_cmd = app.add_subcommand("benchmark", "full-vs-sparse timing sweep");
  bench_cmd->add_option("config", config_path, "JSON config file")->required();
  auto *plot_cmd = app.add_subcommand("plot", "render SVGs from a results directory");
  plot_cmd->add_option("dir", plot_dir, "results directory")->required();
  auto *gen_cmd = app.add_subcommand("gen-data", "write the configured dataset");
  gen_cmd->add_option("config", config_path, "JSON config file")->required();

  // Allow --seed/--output/--threads after the subcommand as well.
  for (auto *cmd : {run_cmd, bench_cmd, plot_cmd, gen_cmd})
    cmd->fallthrough();

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0)
    omp_set_num_threads(threads);
#endif

  try {
    if (plot_cmd->parsed()) {
      plot_results(plot_dir);
      return 0;
    }
    ExperimentConfig cfg;
    try {
      cfg = load_config(config_path);
    } catch (const ConfigError &e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 1;
    }
    if (seed_override >= 0)
      cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!output_override.empty())
      cfg.output_dir = output_override;

    if (run_cmd->parsed())
      run_experiment(cfg);
    else if (bench_cmd->parsed())
      run_benchmark(cfg);
    else if (gen_cmd->parsed())
      gen_data(cfg);
    return 0;
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
