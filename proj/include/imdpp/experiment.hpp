#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imdpp/diffusion.hpp"
#include "imdpp/synthetic.hpp"
#include "imdpp/world.hpp"

namespace imdpp {

// One experiment: a world source (dataset directory or synthetic spec), a
// budget/promotions grid, a solver list and the evaluation settings. Loaded
// from JSON; unknown keys and invariant violations raise ConfigError naming
// the offending key.
struct ExperimentConfig {
  std::string world_dir;  // dataset directory, empty when synthetic
  std::optional<SyntheticSpec> synthetic;
  std::uint64_t world_seed = 1;

  double budget = 1.0;
  int promotions = 2;
  std::vector<double> b_grid;  // budget sweep; defaults to {budget}
  std::vector<int> t_grid;     // promotions sweep; defaults to {promotions}
  std::vector<std::string> solvers = {"dysim"};

  int samples = 200;          // Monte Carlo evaluation samples
  std::uint64_t seed = 1;     // master randomness seed
  int threads = 1;
  DynamicsParams dyn;
  double theta = 1.0, rho = 0.01, beta = 1.0;  // market machinery knobs
  DiffusionModel model = DiffusionModel::kIC;
  double cost_alpha = 1.0;  // cost rule for pairs without explicit costs
  std::string out_dir = "out";
  bool usm_randomized = false;
  double dr_mutation = 0.0;  // reachability perturbation (negative control)
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

// World for one grid cell: loads or generates the shared instance, then sets
// budget, promotions, dynamics and diffusion model. Missing costs are filled
// by the degree/preference rule.
World build_world(const ExperimentConfig& c, double b, int T);

// Dispatch by solver name: dysim, dysim-adaptive, smk, opt, degree, random,
// greedy1. smk and opt run on the (user,item,timing) ground set and are
// limited to desk-scale worlds (SizeError otherwise). Throws ConfigError for
// unknown names and BudgetError when a solver returns an infeasible group.
SeedGroup run_solver(const World& w, const std::string& solver, const ExperimentConfig& c);

struct MetricRow {
  std::string solver;
  double b = 0.0;
  int T = 0;
  double sigma = 0.0;
  double stderr_ = 0.0;
  double time_ms = 0.0;
  double cost_used = 0.0;
};

// Runs every solver over the full grid. Writes metrics.csv plus one seed
// CSV, one estimate CSV and one trace JSONL per (solver, cell) into
// c.out_dir. Evaluation pairs solvers on common random numbers.
std::vector<MetricRow> run_experiment(const ExperimentConfig& c);

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::string& path);

}  // namespace imdpp
