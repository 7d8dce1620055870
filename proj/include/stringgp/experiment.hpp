#pragma once

#include <string>
#include <vector>

#include "stringgp/data.hpp"
#include "stringgp/gp.hpp"
#include "stringgp/metrics.hpp"
#include "stringgp/select.hpp"

namespace stringgp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Task {
  ToyRegression,
  ToyClassification,
  PoissonTf,
  UciPromoters,
  UciSplice,
  CustomCsv,
};

Task task_from_string(const std::string &name);

struct ExperimentConfig {
  Task task = Task::ToyRegression;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t repeats = 20;
  std::vector<int> kernel_orders = {3};
  std::vector<double> noise_grid;     // empty: 10 log-spaced in [1e-4, 1e1]
  std::vector<std::string> models = {"full", "random", "greedy", "sa"};
  SelectionConfig selection;
  SplitSpec split = SplitSpec::fraction(0.6);
  bool grid_search = false;           // evidence grid over orders/noises

  // dataset parameters
  std::size_t data_n = 100;
  std::size_t data_length = 10;
  double lambda0 = 1.0;
  std::string data_file;              // UCI / custom CSV tasks
  std::string alphabet = "01";        // custom CSV task
  std::string likelihood = "";        // custom CSV task

  // benchmark sweep
  std::vector<std::size_t> benchmark_sizes = {200, 400, 800};
};

ExperimentConfig load_config(const std::string &path);

/// Runs the configured experiment: per repeat generate/load data, split,
/// pick hyperparameters, select inducing points, fit, predict, evaluate.
/// Writes results.csv, calibration.csv, inducing_histogram.csv, trace.csv
/// and timing.csv under the output directory.
void run_experiment(const ExperimentConfig &cfg);

/// Full-vs-sparse wall-clock sweep over benchmark_sizes; writes
/// benchmark.csv.
void run_benchmark(const ExperimentConfig &cfg);

/// Renders SVG calibration curves and inducing-point histograms from the
/// CSVs in a results directory.
void plot_results(const std::string &dir);

/// Writes the configured dataset to the output directory (toy tasks as
/// dataset CSV, UCI tasks as synthetic fixtures in the UCI layout).
void gen_data(const ExperimentConfig &cfg);

} // namespace stringgp
