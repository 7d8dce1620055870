#include "stringgp/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_set>

namespace stringgp {

SelectionMethod selection_method_from_string(const std::string &name) {
  if (name == "random")
    return SelectionMethod::Random;
  if (name == "greedy")
    return SelectionMethod::Greedy;
  if (name == "greedy_subset")
    return SelectionMethod::GreedySubset;
  if (name == "sa")
    return SelectionMethod::SimulatedAnnealing;
  throw std::invalid_argument("unknown selection method: " + name);
}

std::string to_string(SelectionMethod m) {
  switch (m) {
  case SelectionMethod::Random:
    return "random";
  case SelectionMethod::Greedy:
    return "greedy";
  case SelectionMethod::GreedySubset:
    return "greedy_subset";
  case SelectionMethod::SimulatedAnnealing:
    return "sa";
  }
  throw std::logic_error("unreachable");
}

void SelectionConfig::validate() const {
  if (m < 1)
    throw std::invalid_argument("inducing count m must be >= 1");
  if (subset_size < 1)
    throw std::invalid_argument("subset size must be >= 1");
  if (t0 <= 0.0)
    throw std::invalid_argument("initial temperature must be positive");
  if (decay <= 0.0 || decay >= 1.0)
    throw std::invalid_argument("decay must be in (0, 1)");
  if (n_chars < 1)
    throw std::invalid_argument("perturbation width must be >= 1");
}

namespace {

std::vector<Sequence> distinct_inputs(const Dataset &data) {
  std::vector<Sequence> out;
  std::unordered_set<std::string> seen;
  for (const auto &x : data.inputs)
    if (seen.insert(x.chars).second)
      out.push_back(x);
  return out;
}

} // namespace

InducingSet select_random(const Dataset &data, const SelectionConfig &cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::vector<Sequence> pool = distinct_inputs(data);
  if (cfg.m > pool.size())
    throw TooFewPoints("requested " + std::to_string(cfg.m) +
                       " inducing points from " + std::to_string(pool.size()) +
                       " distinct inputs");
  for (std::size_t i = 0; i < cfg.m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(cfg.m);
  return InducingSet{std::move(pool)};
}

double acceptance_probability(double energy, double temperature) {
  if (temperature <= 0.0)
    throw std::invalid_argument("temperature must be positive");
  if (energy >= 0.0)
    return 1.0;
  return std::exp(energy / temperature);
}

double temperature(std::size_t iteration, const SelectionConfig &cfg) {
  return cfg.t0 * std::pow(cfg.decay, static_cast<double>(iteration));
}

std::pair<InducingSet, AnnealTrace> select_sa(const Dataset &data,
                                              const SelectionConfig &cfg,
                                              const Objective &objective) {
  cfg.validate();
  // Proposal stream decoupled from the initialization stream.
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  InducingSet current = select_random(data, cfg);

  AnnealTrace trace;
  double current_obj = objective(current);
  trace.initial_objective = current_obj;
  trace.best_set = current;
  trace.best_objective = current_obj;
  trace.records.reserve(cfg.sa_iterations);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = 0; t < cfg.sa_iterations; ++t) {
    const double temp = temperature(t, cfg);
    std::uniform_int_distribution<std::size_t> pick(0, current.size() - 1);
    const std::size_t idx = pick(rng);

    InducingSet proposal = current;
    proposal.points[idx] =
        perturb(current.points[idx], data.alphabet, cfg.n_chars, rng);

    AnnealRecord rec{t, temp, 0.0, std::numeric_limits<double>::quiet_NaN(),
                     false, trace.best_objective};
    double prop_obj;
    bool evaluated = true;
    try {
      prop_obj = objective(proposal);
    } catch (const std::exception &) {
      evaluated = false; // failed proposals are rejected and logged
    }
    if (evaluated && std::isfinite(prop_obj)) {
      rec.objective = prop_obj;
      rec.energy = prop_obj - current_obj;
      if (unit(rng) < acceptance_probability(rec.energy, temp)) {
        rec.accepted = true;
        current = std::move(proposal);
        current_obj = prop_obj;
        if (current_obj > trace.best_objective) {
          trace.best_objective = current_obj;
          trace.best_set = current;
        }
      }
    }
    rec.best_so_far = trace.best_objective;
    trace.records.push_back(std::move(rec));
  }

  trace.final_set = current;
  return {trace.best_set, trace};
}

namespace {

InducingSet greedy_impl(const Dataset &data, const SelectionConfig &cfg,
                        const Objective &objective, bool subsetted) {
  cfg.validate();
  const std::size_t n = data.size();
  if (cfg.m > n)
    throw TooFewPoints("requested " + std::to_string(cfg.m) +
                       " inducing points from " + std::to_string(n) + " inputs");
  Rng rng(cfg.seed);

  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  InducingSet chosen;
  chosen.points.reserve(cfg.m);

  for (std::size_t round = 0; round < cfg.m; ++round) {
    std::vector<std::size_t> candidates;
    if (subsetted && cfg.subset_size < remaining.size()) {
      // Fresh uniform sample without replacement each round.
      std::vector<std::size_t> pool = remaining;
      for (std::size_t i = 0; i < cfg.subset_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      pool.resize(cfg.subset_size);
      candidates = std::move(pool);
    } else {
      candidates = remaining;
    }

    const auto nc = static_cast<std::ptrdiff_t>(candidates.size());
    std::vector<double> scores(candidates.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
      InducingSet trial = chosen;
      trial.points.push_back(data.inputs[candidates[static_cast<std::size_t>(c)]]);
      scores[static_cast<std::size_t>(c)] = objective(trial);
    }

    // Deterministic argmax: highest score, ties by lowest input index.
    std::size_t best_input = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!std::isfinite(scores[c]))
        continue;
      if (!found || scores[c] > best_score ||
          (scores[c] == best_score && candidates[c] < best_input)) {
        best_score = scores[c];
        best_input = candidates[c];
        found = true;
      }
    }
    if (!found)
      throw std::runtime_error("greedy round " + std::to_string(round) +
                               ": no candidate had a finite objective");

    chosen.points.push_back(data.inputs[best_input]);
    remaining.erase(std::find(remaining.begin(), remaining.end(), best_input));
  }
  return chosen;
}

} // namespace

InducingSet select_greedy(const Dataset &data, const SelectionConfig &cfg,
                          const Objective &objective) {
  return greedy_impl(data, cfg, objective, false);
}

InducingSet select_greedy_subset(const Dataset &data, const SelectionConfig &cfg,
                                 const Objective &objective) {
  return greedy_impl(data, cfg, objective, true);
}

InducingSet select(const Dataset &data, const SelectionConfig &cfg,
                   const Objective &objective, AnnealTrace *trace) {
  switch (cfg.method) {
  case SelectionMethod::Random:
    return select_random(data, cfg);
  case SelectionMethod::Greedy:
    return select_greedy(data, cfg, objective);
  case SelectionMethod::GreedySubset:
    return select_greedy_subset(data, cfg, objective);
  case SelectionMethod::SimulatedAnnealing: {
    auto [best, tr] = select_sa(data, cfg, objective);
    if (trace)
      *trace = std::move(tr);
    return best;
  }
  }
  throw std::logic_error("unreachable");
}

void write_trace_csv(const AnnealTrace &trace, std::ostream &out) {
  out << "t,T,E,objective,accepted,best_so_far\n";
  for (const auto &r : trace.records)
    out << r.iteration << ',' << r.temperature << ',' << r.energy << ','
        << r.objective << ',' << (r.accepted ? 1 : 0) << ',' << r.best_so_far
        << "\n";
}

} // namespace stringgp
