#include "stringgp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "stringgp/serialize.hpp"
#include "stringgp/sparse_gp.hpp"

namespace stringgp {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json &obj, const std::string &where,
                std::initializer_list<const char *> allowed) {
  for (const auto &item : obj.items()) {
    bool known = false;
    for (const char *k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

SplitSpec parse_split(const json &j) {
  check_keys(j, "split", {"kind", "train_fraction", "folds", "train_n", "test_n"});
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fraction")
    return SplitSpec::fraction(j.value("train_fraction", 0.6));
  if (kind == "kfold")
    return SplitSpec::kfold(j.value("folds", std::size_t{10}));
  if (kind == "fixed")
    return SplitSpec::fixed(j.at("train_n").get<std::size_t>(),
                            j.at("test_n").get<std::size_t>());
  throw ConfigError("unknown split kind '" + kind + "'");
}

SelectionConfig parse_selection(const json &j) {
  check_keys(j, "selection",
             {"method", "m", "subset_size", "sa_iterations", "t0", "decay",
              "n_chars"});
  SelectionConfig cfg;
  cfg.method = selection_method_from_string(j.value("method", std::string("random")));
  cfg.m = j.value("m", std::size_t{5});
  cfg.subset_size = j.value("subset_size", std::size_t{10});
  cfg.sa_iterations = j.value("sa_iterations", std::size_t{2000});
  cfg.t0 = j.value("t0", 1.0);
  cfg.decay = j.value("decay", 0.999);
  cfg.n_chars = j.value("n_chars", std::size_t{1});
  cfg.validate();
  return cfg;
}

std::vector<double> default_noise_grid() {
  // 10 log-spaced points in [1e-4, 1e1]
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i)
    grid.push_back(std::pow(10.0, -4.0 + 5.0 * i / 9.0));
  return grid;
}

} // namespace

Task task_from_string(const std::string &name) {
  if (name == "toy_regression")
    return Task::ToyRegression;
  if (name == "toy_classification")
    return Task::ToyClassification;
  if (name == "poisson_tf")
    return Task::PoissonTf;
  if (name == "uci_promoters")
    return Task::UciPromoters;
  if (name == "uci_splice")
    return Task::UciSplice;
  if (name == "custom_csv")
    return Task::CustomCsv;
  throw ConfigError("unknown task '" + name + "'");
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  check_keys(j, "config",
             {"task", "output_dir", "seed", "repeats", "kernel_orders",
              "noise_grid", "models", "selection", "split", "grid_search", "data",
              "benchmark_sizes"});

  ExperimentConfig cfg;
  cfg.task = task_from_string(j.at("task").get<std::string>());
  cfg.output_dir = j.value("output_dir", std::string("out"));
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.repeats = j.value("repeats", std::size_t{20});
  if (cfg.repeats < 1)
    throw ConfigError("repeats must be >= 1");
  if (j.contains("kernel_orders"))
    cfg.kernel_orders = j.at("kernel_orders").get<std::vector<int>>();
  if (cfg.kernel_orders.empty())
    throw ConfigError("kernel_orders must be non-empty");
  cfg.noise_grid = j.contains("noise_grid")
                       ? j.at("noise_grid").get<std::vector<double>>()
                       : default_noise_grid();
  if (j.contains("models"))
    cfg.models = j.at("models").get<std::vector<std::string>>();
  if (j.contains("selection"))
    cfg.selection = parse_selection(j.at("selection"));
  if (j.contains("split"))
    cfg.split = parse_split(j.at("split"));
  cfg.grid_search = j.value("grid_search", false);
  if (j.contains("data")) {
    const json &d = j.at("data");
    check_keys(d, "data", {"n", "length", "lambda0", "file", "alphabet",
                           "likelihood"});
    cfg.data_n = d.value("n", std::size_t{100});
    cfg.data_length = d.value("length", std::size_t{10});
    cfg.lambda0 = d.value("lambda0", 1.0);
    cfg.data_file = d.value("file", std::string());
    cfg.alphabet = d.value("alphabet", std::string("01"));
    cfg.likelihood = d.value("likelihood", std::string());
  }
  if (j.contains("benchmark_sizes"))
    cfg.benchmark_sizes = j.at("benchmark_sizes").get<std::vector<std::size_t>>();
  return cfg;
}

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

enum class TaskKind { Regression, Classification, Poisson };

TaskKind task_kind(const ExperimentConfig &cfg) {
  switch (cfg.task) {
  case Task::ToyRegression:
    return TaskKind::Regression;
  case Task::ToyClassification:
  case Task::UciPromoters:
  case Task::UciSplice:
    return TaskKind::Classification;
  case Task::PoissonTf:
    return TaskKind::Poisson;
  case Task::CustomCsv:
    if (cfg.likelihood == "gaussian" || cfg.likelihood.empty())
      return TaskKind::Regression;
    if (cfg.likelihood == "bernoulli")
      return TaskKind::Classification;
    if (cfg.likelihood == "poisson")
      return TaskKind::Poisson;
    throw ConfigError("unknown likelihood '" + cfg.likelihood + "'");
  }
  throw std::logic_error("unreachable");
}

char histogram_char(const ExperimentConfig &cfg) {
  return cfg.task == Task::PoissonTf ? 'A'
         : cfg.task == Task::ToyRegression || cfg.task == Task::ToyClassification
             ? '1'
             : 'A';
}

struct RepeatData {
  Dataset train;
  Dataset test;
  std::vector<double> test_rates; // Poisson toy task only
};

RepeatData make_repeat_data(const ExperimentConfig &cfg, const Dataset *file_data,
                            std::size_t repeat) {
  const std::uint64_t seed = cfg.seed + repeat;
  switch (cfg.task) {
  case Task::ToyRegression:
  case Task::ToyClassification: {
    auto toy = gen_binary_toy(cfg.data_n, cfg.data_length, seed);
    Dataset &d =
        cfg.task == Task::ToyRegression ? toy.regression : toy.classification;
    SplitSpec spec = cfg.split;
    spec.seed = seed;
    auto tt = split(d, spec);
    return {std::move(tt.train), std::move(tt.test), {}};
  }
  case Task::PoissonTf: {
    auto toy = gen_poisson_tf(cfg.data_n, cfg.data_length, cfg.lambda0, seed);
    SplitSpec spec = cfg.split;
    spec.seed = seed;
    auto tt = split(toy.counts, spec);
    // Identical shuffle keeps the true rates aligned with the test set.
    Dataset rates{toy.counts.inputs, toy.rates, toy.counts.alphabet};
    auto rt = split(rates, spec);
    return {std::move(tt.train), std::move(tt.test), std::move(rt.test.targets)};
  }
  case Task::UciPromoters:
  case Task::UciSplice:
  case Task::CustomCsv: {
    SplitSpec spec = cfg.split;
    if (spec.kind == SplitSpec::Kind::KFold) {
      spec.seed = cfg.seed + repeat / spec.folds;
      auto folds = split_kfold(*file_data, spec);
      auto tt = folds[repeat % spec.folds];
      return {std::move(tt.train), std::move(tt.test), {}};
    }
    spec.seed = seed;
    auto tt = split(*file_data, spec);
    return {std::move(tt.train), std::move(tt.test), {}};
  }
  }
  throw std::logic_error("unreachable");
}

struct Hyperparameters {
  KernelConfig kcfg;
  double noise = 1.0;
};

Hyperparameters pick_hyperparameters(const ExperimentConfig &cfg,
                                     const Dataset &train, TaskKind kind) {
  Hyperparameters hp;
  hp.kcfg.order = cfg.kernel_orders.front();
  hp.noise = cfg.noise_grid.front();

  if (kind == TaskKind::Regression) {
    // sigma^2 (and k when requested) by the full log marginal likelihood.
    const bool scan_orders = cfg.grid_search && cfg.kernel_orders.size() > 1;
    double best = -std::numeric_limits<double>::infinity();
    for (int order : scan_orders ? cfg.kernel_orders
                                 : std::vector<int>{hp.kcfg.order})
      for (double noise : cfg.noise_grid) {
        KernelConfig kcfg;
        kcfg.order = order;
        double lml =
            log_marginal_gaussian(fit_full_gaussian(train, kcfg, noise));
        if (lml > best) {
          best = lml;
          hp.kcfg = kcfg;
          hp.noise = noise;
        }
      }
  } else if (cfg.grid_search && cfg.kernel_orders.size() > 1) {
    const Likelihood lik = kind == TaskKind::Classification
                               ? Likelihood::bernoulli()
                               : Likelihood::poisson();
    double best = -std::numeric_limits<double>::infinity();
    for (int order : cfg.kernel_orders) {
      KernelConfig kcfg;
      kcfg.order = order;
      double ev = laplace_fit_full(train, kcfg, lik).laplace.log_evidence;
      if (ev > best) {
        best = ev;
        hp.kcfg = kcfg;
      }
    }
  }
  return hp;
}

struct ModelOutcome {
  double mse = std::numeric_limits<double>::quiet_NaN();
  double mse_rates = std::numeric_limits<double>::quiet_NaN();
  double auprc = std::numeric_limits<double>::quiet_NaN();
  double loglik = std::numeric_limits<double>::quiet_NaN();
  double ad = std::numeric_limits<double>::quiet_NaN();
  double selection_s = 0.0, fit_s = 0.0, predict_s = 0.0;
  std::vector<double> probs;  // classification
  InducingSet inducing;
  AnnealTrace trace;
  bool has_trace = false;
};

Eigen::VectorXd to_vector(const std::vector<double> &v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

void evaluate_posterior(const ExperimentConfig &cfg, TaskKind kind,
                        const RepeatData &data, const Likelihood &lik,
                        const GaussianPosterior &post, ModelOutcome &out) {
  const Eigen::VectorXd truth = to_vector(data.test.targets);
  switch (kind) {
  case TaskKind::Regression:
    out.mse = mse(post.mean, truth);
    out.loglik = test_log_likelihood(post, lik, data.test.targets);
    break;
  case TaskKind::Classification: {
    Eigen::VectorXd p = class_probability(post);
    std::vector<int> labels;
    for (double t : data.test.targets)
      labels.push_back(t > 0.5 ? 1 : 0);
    out.mse = mse(p, truth);
    out.auprc = auprc(p, labels);
    out.loglik = test_log_likelihood(post, lik, data.test.targets);
    out.ad = calibration_ad(calibration(p, labels));
    out.probs.assign(p.data(), p.data() + p.size());
    break;
  }
  case TaskKind::Poisson: {
    Eigen::VectorXd rate = poisson_rate_estimate(post);
    out.mse = mse(rate, truth);
    if (!data.test_rates.empty())
      out.mse_rates = mse(rate, to_vector(data.test_rates));
    out.loglik = test_log_likelihood(post, lik, data.test.targets);
    break;
  }
  }
  (void)cfg;
}

ModelOutcome run_model(const ExperimentConfig &cfg, const std::string &model,
                       const RepeatData &data, const Hyperparameters &hp,
                       TaskKind kind, std::size_t repeat) {
  ModelOutcome out;
  const Likelihood lik = kind == TaskKind::Regression
                             ? Likelihood::gaussian(hp.noise)
                         : kind == TaskKind::Classification
                             ? Likelihood::bernoulli()
                             : Likelihood::poisson();

  if (model == "full" || model == "full_gaussian") {
    const bool gaussian = model == "full_gaussian" || lik.is_gaussian();
    double t0 = now_seconds();
    if (gaussian) {
      double noise = hp.noise;
      if (!lik.is_gaussian()) {
        // Gaussian baseline on a non-Gaussian task: pick its own noise
        // level by the log marginal likelihood.
        double best = -std::numeric_limits<double>::infinity();
        for (double s2 : cfg.noise_grid) {
          double lml =
              log_marginal_gaussian(fit_full_gaussian(data.train, hp.kcfg, s2));
          if (lml > best) {
            best = lml;
            noise = s2;
          }
        }
        t0 = now_seconds();
      }
      FullGPModel m = fit_full_gaussian(data.train, hp.kcfg, noise);
      out.fit_s = now_seconds() - t0;
      t0 = now_seconds();
      GaussianPosterior post = predict_full(m, data.test.inputs);
      out.predict_s = now_seconds() - t0;
      if (model == "full_gaussian" && kind == TaskKind::Poisson) {
        // Gaussian baseline on count data: plain predictive mean.
        const Eigen::VectorXd truth = to_vector(data.test.targets);
        out.mse = mse(post.mean, truth);
        out.loglik = test_log_likelihood(post, m.likelihood, data.test.targets);
      } else {
        evaluate_posterior(cfg, kind, data, m.likelihood, post, out);
      }
    } else {
      FullGPModel m = laplace_fit_full(data.train, hp.kcfg, lik);
      out.fit_s = now_seconds() - t0;
      t0 = now_seconds();
      GaussianPosterior post = predict_latent_full(m, data.test.inputs);
      out.predict_s = now_seconds() - t0;
      evaluate_posterior(cfg, kind, data, lik, post, out);
    }
    return out;
  }

  // Sparse models: selection, fit, predict.
  SelectionConfig sel = cfg.selection;
  sel.method = selection_method_from_string(model);
  sel.seed = cfg.seed + repeat;

  FeatureCache cache(hp.kcfg);
  for (const auto &x : data.train.inputs)
    cache.get(x);
  Objective objective = [&](const InducingSet &z) {
    return sparse_evidence(data.train, z, lik, cache);
  };

  double t0 = now_seconds();
  AnnealTrace trace;
  InducingSet z = select(data.train, sel, objective, &trace);
  out.selection_s = now_seconds() - t0;
  if (sel.method == SelectionMethod::SimulatedAnnealing) {
    out.trace = std::move(trace);
    out.has_trace = true;
  }
  out.inducing = z;

  t0 = now_seconds();
  GaussianPosterior post;
  if (lik.is_gaussian()) {
    SparseGPModel m = fit_sparse_gaussian(data.train, z, hp.kcfg, hp.noise);
    out.fit_s = now_seconds() - t0;
    t0 = now_seconds();
    post = sparse_predict(m, data.test.inputs);
  } else {
    SparseGPModel m = sparse_laplace_fit(data.train, z, lik, cache);
    out.fit_s = now_seconds() - t0;
    t0 = now_seconds();
    post = sparse_predict_latent(m, data.test.inputs);
  }
  out.predict_s = now_seconds() - t0;
  evaluate_posterior(cfg, kind, data, lik, post, out);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

struct Aggregate {
  std::vector<double> values;
  double mean() const {
    double s = 0.0;
    for (double v : values)
      s += v;
    return values.empty() ? std::numeric_limits<double>::quiet_NaN()
                          : s / static_cast<double>(values.size());
  }
  double se() const {
    if (values.size() < 2)
      return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double v : values)
      ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1)) /
           std::sqrt(static_cast<double>(values.size()));
  }
};

} // namespace

void run_experiment(const ExperimentConfig &cfg) {
  fs::create_directories(cfg.output_dir);
  const TaskKind kind = task_kind(cfg);

  Dataset file_data;
  const Dataset *file_ptr = nullptr;
  if (cfg.task == Task::UciPromoters || cfg.task == Task::UciSplice ||
      cfg.task == Task::CustomCsv) {
    if (cfg.data_file.empty())
      throw ConfigError("task requires data.file");
    if (cfg.task == Task::UciPromoters)
      file_data = parse_promoters_file(cfg.data_file);
    else if (cfg.task == Task::UciSplice)
      file_data = parse_splice_file(cfg.data_file);
    else {
      std::ifstream in(cfg.data_file);
      if (!in)
        throw ConfigError("cannot open " + cfg.data_file);
      file_data = read_dataset_csv(in, Alphabet(cfg.alphabet));
    }
    file_ptr = &file_data;
  }

  struct Row {
    std::size_t repeat;
    std::string model;
    int order;
    double noise, mse, mse_rates, auprc, loglik, ad, sel_s, fit_s, pred_s;
  };
  std::vector<Row> rows;
  std::map<std::string, std::pair<std::vector<double>, std::vector<int>>> pooled;
  std::map<std::string, std::vector<std::size_t>> histograms;
  AnnealTrace first_trace;
  bool have_trace = false;

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    RepeatData data = make_repeat_data(cfg, file_ptr, r);
    Hyperparameters hp = pick_hyperparameters(cfg, data.train, kind);
    for (const auto &model : cfg.models) {
      ModelOutcome out = run_model(cfg, model, data, hp, kind, r);
      rows.push_back({r, model, hp.kcfg.order, hp.noise, out.mse, out.mse_rates,
                      out.auprc, out.loglik, out.ad, out.selection_s, out.fit_s,
                      out.predict_s});
      if (!out.probs.empty()) {
        auto &[ps, ls] = pooled[model];
        for (std::size_t i = 0; i < out.probs.size(); ++i) {
          ps.push_back(out.probs[i]);
          ls.push_back(data.test.targets[i] > 0.5 ? 1 : 0);
        }
      }
      if (out.inducing.size() > 0) {
        auto h = ones_histogram(out.inducing, histogram_char(cfg));
        auto &acc = histograms[model];
        if (acc.size() < h.size())
          acc.resize(h.size(), 0);
        for (std::size_t i = 0; i < h.size(); ++i)
          acc[i] += h[i];
      }
      if (out.has_trace && !have_trace) {
        first_trace = std::move(out.trace);
        have_trace = true;
      }
    }
  }

  {
    std::ofstream out(fs::path(cfg.output_dir) / "results.csv");
    out << "repeat,model,kernel_order,noise_variance,mse,mse_rates,auprc,"
           "test_log_likelihood,calibration_ad\n";
    for (const auto &row : rows)
      out << row.repeat << ',' << row.model << ',' << row.order << ','
          << fmt(row.noise) << ',' << fmt(row.mse) << ',' << fmt(row.mse_rates)
          << ',' << fmt(row.auprc) << ',' << fmt(row.loglik) << ','
          << fmt(row.ad) << "\n";
    for (const auto &model : cfg.models) {
      Aggregate agg[5];
      for (const auto &row : rows)
        if (row.model == model) {
          for (std::size_t i = 0; double v :
               {row.mse, row.mse_rates, row.auprc, row.loglik, row.ad}) {
            if (!std::isnan(v))
              agg[i].values.push_back(v);
            ++i;
          }
        }
      out << "mean," << model << ",,," << fmt(agg[0].mean()) << ','
          << fmt(agg[1].mean()) << ',' << fmt(agg[2].mean()) << ','
          << fmt(agg[3].mean()) << ',' << fmt(agg[4].mean()) << "\n";
      out << "se," << model << ",,," << fmt(agg[0].se()) << ','
          << fmt(agg[1].se()) << ',' << fmt(agg[2].se()) << ','
          << fmt(agg[3].se()) << ',' << fmt(agg[4].se()) << "\n";
    }
  }

  {
    std::ofstream out(fs::path(cfg.output_dir) / "timing.csv");
    out << "model,selection_s,fit_s,predict_s\n";
    for (const auto &model : cfg.models) {
      Aggregate sel, fit, pred;
      for (const auto &row : rows)
        if (row.model == model) {
          sel.values.push_back(row.sel_s);
          fit.values.push_back(row.fit_s);
          pred.values.push_back(row.pred_s);
        }
      out << model << ',' << fmt(sel.mean()) << ',' << fmt(fit.mean()) << ','
          << fmt(pred.mean()) << "\n";
    }
  }

  {
    std::ofstream out(fs::path(cfg.output_dir) / "calibration.csv");
    out << "model,bin_lo,bin_hi,mean_pred,frac_pos,count\n";
    for (const auto &[model, data] : pooled) {
      auto curve = calibration(to_vector(data.first), data.second);
      for (std::size_t b = 0; b < curve.bins(); ++b)
        out << model << ',' << fmt(curve.bin_lo[b]) << ',' << fmt(curve.bin_hi[b])
            << ',' << fmt(curve.mean_predicted[b]) << ','
            << fmt(curve.fraction_positive[b]) << ',' << curve.counts[b] << "\n";
    }
  }

  {
    std::ofstream out(fs::path(cfg.output_dir) / "inducing_histogram.csv");
    out << "model,ones,count\n";
    for (const auto &[model, hist] : histograms)
      for (std::size_t i = 0; i < hist.size(); ++i)
        out << model << ',' << i << ',' << hist[i] << "\n";
  }

  if (have_trace) {
    std::ofstream out(fs::path(cfg.output_dir) / "trace.csv");
    write_trace_csv(first_trace, out);
  }
}

void run_benchmark(const ExperimentConfig &cfg) {
  if (cfg.benchmark_sizes.empty())
    throw InvalidSpec("benchmark needs a non-empty size sweep");
  cfg.selection.validate();
  fs::create_directories(cfg.output_dir);
  const TaskKind kind = task_kind(cfg);

  Dataset file_data;
  if (cfg.task == Task::UciSplice) {
    if (cfg.data_file.empty())
      throw ConfigError("task requires data.file");
    file_data = parse_splice_file(cfg.data_file);
  }

  std::ofstream out(fs::path(cfg.output_dir) / "benchmark.csv");
  out << "n,model,selection_s,fit_s,predict_s\n";
  for (std::size_t n : cfg.benchmark_sizes) {
    RepeatData data;
    if (cfg.task == Task::UciSplice) {
      if (n + n / 2 > file_data.size())
        throw InvalidSpec("benchmark size exceeds the dataset");
      ExperimentConfig sub = cfg;
      sub.split = SplitSpec::fixed(n, n / 2);
      data = make_repeat_data(sub, &file_data, 0);
    } else {
      ExperimentConfig sub = cfg;
      sub.data_n = n + n / 2;
      sub.split = SplitSpec::fixed(n, n / 2);
      data = make_repeat_data(sub, nullptr, 0);
    }
    Hyperparameters hp;
    hp.kcfg.order = cfg.kernel_orders.front();
    hp.noise = cfg.noise_grid.empty() ? 0.1 : cfg.noise_grid.front();

    for (const char *model : {"full", "random"}) {
      ModelOutcome o = run_model(cfg, model, data, hp, kind, 0);
      out << n << ',' << model << ',' << fmt(o.selection_s) << ','
          << fmt(o.fit_s) << ',' << fmt(o.predict_s) << "\n";
    }
  }
}

namespace {

struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::vector<std::string>> read_csv(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw MissingInput("missing input file " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
      fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

void write_calibration_svg(const fs::path &path,
                           const std::vector<std::pair<double, double>> &points) {
  const double size = 400.0, margin = 40.0, span = size - 2 * margin;
  auto sx = [&](double p) { return margin + p * span; };
  auto sy = [&](double p) { return size - margin - p * span; };
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\">\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << span
      << "\" height=\"" << span << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1)
      << "\" y2=\"" << sy(1) << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (const auto &[x, y] : points)
    out << sx(x) << ',' << sy(y) << ' ';
  out << "\"/>\n";
  for (const auto &[x, y] : points)
    out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y)
        << "\" r=\"3\" fill=\"blue\"/>\n";
  out << "</svg>\n";
}

void write_histogram_svg(const fs::path &path,
                         const std::vector<std::pair<std::size_t, std::size_t>> &bars) {
  const double size = 400.0, margin = 40.0, span = size - 2 * margin;
  std::size_t max_count = 1;
  for (const auto &[k, c] : bars)
    max_count = std::max(max_count, c);
  const double bw = span / static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\">\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = span * static_cast<double>(bars[i].second) /
                     static_cast<double>(max_count);
    out << "<rect x=\"" << margin + bw * static_cast<double>(i) << "\" y=\""
        << size - margin - h << "\" width=\"" << bw * 0.9 << "\" height=\"" << h
        << "\" fill=\"steelblue\"/>\n";
  }
  out << "</svg>\n";
}

} // namespace

void plot_results(const std::string &dir) {
  const fs::path base(dir);
  auto cal = read_csv(base / "calibration.csv");
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  for (std::size_t i = 1; i < cal.size(); ++i) {
    const auto &row = cal[i];
    if (row.size() != 6)
      continue;
    if (std::stoul(row[5]) == 0)
      continue; // empty bins are omitted from the polyline
    curves[row[0]].emplace_back(std::stod(row[3]), std::stod(row[4]));
  }
  for (const auto &[model, points] : curves)
    write_calibration_svg(base / ("calibration_" + model + ".svg"), points);

  auto hist = read_csv(base / "inducing_histogram.csv");
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> bars;
  for (std::size_t i = 1; i < hist.size(); ++i) {
    const auto &row = hist[i];
    if (row.size() != 3)
      continue;
    bars[row[0]].emplace_back(std::stoul(row[1]), std::stoul(row[2]));
  }
  for (const auto &[model, b] : bars)
    write_histogram_svg(base / ("histogram_" + model + ".svg"), b);
}

void gen_data(const ExperimentConfig &cfg) {
  fs::create_directories(cfg.output_dir);
  switch (cfg.task) {
  case Task::ToyRegression:
  case Task::ToyClassification: {
    auto toy = gen_binary_toy(cfg.data_n, cfg.data_length, cfg.seed);
    std::ofstream out(fs::path(cfg.output_dir) / "dataset.csv");
    write_dataset_csv(
        cfg.task == Task::ToyRegression ? toy.regression : toy.classification, out);
    break;
  }
  case Task::PoissonTf: {
    auto toy = gen_poisson_tf(cfg.data_n, cfg.data_length, cfg.lambda0, cfg.seed);
    std::ofstream out(fs::path(cfg.output_dir) / "dataset.csv");
    write_dataset_csv(toy.counts, out);
    std::ofstream rates(fs::path(cfg.output_dir) / "rates.csv");
    write_dataset_csv(Dataset{toy.counts.inputs, toy.rates, toy.counts.alphabet},
                      rates);
    break;
  }
  case Task::UciPromoters: {
    std::ofstream out(fs::path(cfg.output_dir) / "promoters.data");
    write_synthetic_promoters(out, cfg.seed);
    break;
  }
  case Task::UciSplice: {
    std::ofstream out(fs::path(cfg.output_dir) / "splice.data");
    write_synthetic_splice(out, cfg.seed);
    break;
  }
  case Task::CustomCsv:
    throw ConfigError("gen-data does not apply to custom_csv");
  }
}

} // namespace stringgp
