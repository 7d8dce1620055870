#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>

#include "stringgp/domain.hpp"
#include "stringgp/sparse_gp.hpp"

namespace stringgp {

struct TooFewPoints : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SelectionMethod { Random, Greedy, GreedySubset, SimulatedAnnealing };

SelectionMethod selection_method_from_string(const std::string &name);
std::string to_string(SelectionMethod m);

struct SelectionConfig {
  SelectionMethod method = SelectionMethod::Random;
  std::size_t m = 5;             // target inducing count
  std::size_t subset_size = 10;  // greedy_subset only
  std::size_t sa_iterations = 2000;
  double t0 = 1.0;               // initial temperature
  double decay = 0.999;          // exponential temperature decay in (0,1)
  std::size_t n_chars = 1;       // perturbation width
  std::uint64_t seed = 0;

  void validate() const;
};

/// Black-box objective over candidate inducing sets (higher is better).
using Objective = std::function<double(const InducingSet &)>;

struct AnnealRecord {
  std::size_t iteration;
  double temperature;
  double energy;      // objective(proposal) - objective(current)
  double objective;   // objective of the proposal
  bool accepted;
  double best_so_far;
};

struct AnnealTrace {
  std::vector<AnnealRecord> records;
  InducingSet final_set;
  InducingSet best_set;
  double best_objective = 0.0;
  double initial_objective = 0.0;
};

InducingSet select_random(const Dataset &data, const SelectionConfig &cfg);

/// min(1, exp(energy / temperature)); energy is the objective improvement
/// of the proposal, so improvements are always accepted.
double acceptance_probability(double energy, double temperature);

double temperature(std::size_t iteration, const SelectionConfig &cfg);

std::pair<InducingSet, AnnealTrace> select_sa(const Dataset &data,
                                              const SelectionConfig &cfg,
                                              const Objective &objective);

/// Adds the argmax candidate per round; ties broken by lowest input index.
/// Candidate scoring parallelizes; the (value, index) reduction is
/// deterministic regardless of thread count.
InducingSet select_greedy(const Dataset &data, const SelectionConfig &cfg,
                          const Objective &objective);

/// Greedy restricted to a fresh uniform sample of subset_size candidates
/// per round; sampling all remaining candidates when subset_size covers
/// them, which reduces exactly to select_greedy.
InducingSet select_greedy_subset(const Dataset &data, const SelectionConfig &cfg,
                                 const Objective &objective);

InducingSet select(const Dataset &data, const SelectionConfig &cfg,
                   const Objective &objective, AnnealTrace *trace = nullptr);

void write_trace_csv(const AnnealTrace &trace, std::ostream &out);

} // namespace stringgp
