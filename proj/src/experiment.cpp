#include "imdpp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "imdpp/dysim.hpp"
#include "imdpp/io.hpp"
#include "imdpp/solvers.hpp"

namespace imdpp {

namespace {

const std::vector<std::string> kSolverNames = {"dysim", "dysim-adaptive", "smk",    "opt",
                                               "degree", "random",        "greedy1"};

bool feasible(double cost, double budget) {
  return cost <= budget * (1.0 + 1e-12) + 1e-12;
}

DysimParams dysim_params(const World&, const ExperimentConfig& c) {
  DysimParams p;
  p.theta = c.theta;
  p.rho = c.rho;
  p.beta = c.beta;
  p.samples = c.samples;
  p.master = c.seed;
  p.threads = c.threads;
  return p;
}

// Ground set for the set-function solvers: one element per (user, item,
// timing) triple, cost c(u,x), value = Monte Carlo spread estimate.
struct TripleGround {
  const World* w;
  std::uint32_t items;
  int T;

  Seed decode(std::uint32_t e) const {
    std::uint32_t per_user = items * static_cast<std::uint32_t>(T);
    UserId u = e / per_user;
    std::uint32_t rem = e % per_user;
    return Seed{u, rem / static_cast<std::uint32_t>(T),
                static_cast<int>(rem % static_cast<std::uint32_t>(T)) + 1};
  }
};

SetOracle triple_oracle(const World& w, const ExperimentConfig& c, std::uint64_t master) {
  TripleGround g{&w, w.items(), w.promotions};
  std::size_t n = static_cast<std::size_t>(w.users()) * w.items() * w.promotions;
  std::vector<double> cost(n);
  for (std::uint32_t e = 0; e < n; ++e) {
    Seed s = g.decode(e);
    cost[e] = w.catalog.cost(s.u, s.x);
  }
  int samples = c.samples;
  int threads = c.threads;
  auto eval = [g, samples, threads, master](const std::vector<std::uint32_t>& elems) {
    std::vector<Seed> seeds;
    seeds.reserve(elems.size());
    for (std::uint32_t e : elems) seeds.push_back(g.decode(e));
    SeedGroup sg = SeedGroup::of(*g.w, std::move(seeds));
    return sigma_estimate(*g.w, sg, samples, master, threads).sigma;
  };
  return SetOracle(n, eval, std::move(cost), w.budget);
}

SeedGroup seeds_of_elems(const World& w, const TripleGround& g,
                         const std::vector<std::uint32_t>& elems) {
  std::vector<Seed> seeds;
  seeds.reserve(elems.size());
  for (std::uint32_t e : elems) seeds.push_back(g.decode(e));
  return SeedGroup::of(w, std::move(seeds));
}

std::string cell_tag(const std::string& solver, double b, int T) {
  return solver + "_b" + fmt6(b) + "_T" + std::to_string(T);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig c;
  auto num_of = [](const nlohmann::json& v, const std::string& key) -> double {
    if (!v.is_number()) throw ConfigError("config key is not a number: " + key);
    return v.get<double>();
  };
  auto int_of = [&](const nlohmann::json& v, const std::string& key) -> std::int64_t {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw ConfigError("config key is not an integer: " + key);
    return v.get<std::int64_t>();
  };
  auto str_of = [](const nlohmann::json& v, const std::string& key) -> std::string {
    if (!v.is_string()) throw ConfigError("config key is not a string: " + key);
    return v.get<std::string>();
  };

  for (const auto& [key, val] : doc.items()) {
    if (key == "world_dir") c.world_dir = str_of(val, key);
    else if (key == "synthetic") c.synthetic = parse_synthetic_spec(val.dump());
    else if (key == "world_seed") c.world_seed = static_cast<std::uint64_t>(int_of(val, key));
    else if (key == "budget") c.budget = num_of(val, key);
    else if (key == "promotions") c.promotions = static_cast<int>(int_of(val, key));
    else if (key == "b_grid") {
      if (!val.is_array()) throw ConfigError("config key is not an array: " + key);
      c.b_grid.clear();
      for (const auto& v : val) c.b_grid.push_back(num_of(v, key));
    } else if (key == "t_grid") {
      if (!val.is_array()) throw ConfigError("config key is not an array: " + key);
      c.t_grid.clear();
      for (const auto& v : val) c.t_grid.push_back(static_cast<int>(int_of(v, key)));
    } else if (key == "solvers") {
      if (!val.is_array()) throw ConfigError("config key is not an array: " + key);
      c.solvers.clear();
      for (const auto& v : val) c.solvers.push_back(str_of(v, key));
    } else if (key == "samples") c.samples = static_cast<int>(int_of(val, key));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(int_of(val, key));
    else if (key == "threads") c.threads = static_cast<int>(int_of(val, key));
    else if (key == "eta") c.dyn.eta = num_of(val, key);
    else if (key == "lambda") c.dyn.lambda = num_of(val, key);
    else if (key == "mu") c.dyn.mu = num_of(val, key);
    else if (key == "theta") c.theta = num_of(val, key);
    else if (key == "rho") c.rho = num_of(val, key);
    else if (key == "beta") c.beta = num_of(val, key);
    else if (key == "diffusion_model") {
      std::string m = str_of(val, key);
      if (m == "ic") c.model = DiffusionModel::kIC;
      else if (m == "lt") c.model = DiffusionModel::kLT;
      else throw ConfigError("config key diffusion_model must be \"ic\" or \"lt\"");
    } else if (key == "cost_alpha") c.cost_alpha = num_of(val, key);
    else if (key == "out_dir") c.out_dir = str_of(val, key);
    else if (key == "usm_randomized") {
      if (!val.is_boolean()) throw ConfigError("config key is not a boolean: " + key);
      c.usm_randomized = val.get<bool>();
    } else if (key == "dr_mutation") c.dr_mutation = num_of(val, key);
    else throw ConfigError("unknown config key: " + key);
  }

  if (c.world_dir.empty() == !c.synthetic.has_value())
    throw ConfigError("config needs exactly one of world_dir, synthetic");
  if (c.budget <= 0.0) throw ConfigError("config key budget must be positive");
  if (c.promotions < 1) throw ConfigError("config key promotions must be at least 1");
  if (c.samples < 1) throw ConfigError("config key samples must be at least 1");
  if (c.threads < 1) throw ConfigError("config key threads must be at least 1");
  for (double b : c.b_grid)
    if (b <= 0.0) throw ConfigError("config key b_grid must be positive");
  for (int t : c.t_grid)
    if (t < 1) throw ConfigError("config key t_grid must be at least 1");
  if (c.solvers.empty()) throw ConfigError("config key solvers must not be empty");
  for (const auto& s : c.solvers)
    if (std::find(kSolverNames.begin(), kSolverNames.end(), s) == kSolverNames.end())
      throw ConfigError("unknown solver in config key solvers: " + s);
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

World build_world(const ExperimentConfig& c, double b, int T) {
  World w = c.synthetic ? generate_synthetic(*c.synthetic, c.world_seed)
                        : load_world_dir(c.world_dir);
  w.budget = b;
  w.promotions = T;
  w.dyn = c.dyn;
  w.model = c.model;
  if (!c.synthetic) {
    w.sn.finalize();
    if (w.pref0.empty()) w.pref0.assign(w.users(), std::vector<double>(w.items(), 0.0));
    w.catalog.fill_costs_by_rule(w.sn, w.pref0, c.cost_alpha);
  }
  w.finalize();
  return w;
}

SeedGroup run_solver(const World& w, const std::string& solver, const ExperimentConfig& c) {
  DysimParams p = dysim_params(w, c);
  SeedGroup out;
  if (solver == "dysim") {
    out = dysim_solve(w, p).seeds;
  } else if (solver == "dysim-adaptive") {
    out = dysim_adaptive(w, p).seeds;
  } else if (solver == "degree") {
    out = baseline_solve(w, Baseline::kDegree, p);
  } else if (solver == "random") {
    out = baseline_solve(w, Baseline::kRandom, p);
  } else if (solver == "greedy1") {
    out = baseline_solve(w, Baseline::kGreedy1, p);
  } else if (solver == "smk" || solver == "opt") {
    std::size_t n = static_cast<std::size_t>(w.users()) * w.items() * w.promotions;
    if (solver == "smk" && n > 200)
      throw SizeError("smk ground set too large: " + std::to_string(n) + " triples");
    SetOracle f = triple_oracle(w, c, hash_combine(c.seed, 0x6f7261636cull));
    SolveResult r = solver == "opt" ? brute_force_opt(f)
                                    : smk_solve(f, c.usm_randomized, c.seed);
    TripleGround g{&w, w.items(), w.promotions};
    out = seeds_of_elems(w, g, r.elems);
  } else {
    throw ConfigError("unknown solver: " + solver);
  }
  if (!feasible(out.total_cost, w.budget))
    throw BudgetError("solver " + solver + " exceeded the budget: cost " +
                      fmt6(out.total_cost) + " vs " + fmt6(w.budget));
  return out;
}

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write: " + path);
  out << "solver,b,T,sigma,stderr,time_ms,cost_used\n";
  for (const auto& r : rows)
    out << r.solver << ',' << fmt6(r.b) << ',' << r.T << ',' << fmt6(r.sigma) << ','
        << fmt6(r.stderr_) << ',' << fmt6(r.time_ms) << ',' << fmt6(r.cost_used) << '\n';
}

std::vector<MetricRow> run_experiment(const ExperimentConfig& c) {
  namespace fs = std::filesystem;
  fs::create_directories(c.out_dir);

  std::vector<double> bs = c.b_grid.empty() ? std::vector<double>{c.budget} : c.b_grid;
  std::vector<int> ts = c.t_grid.empty() ? std::vector<int>{c.promotions} : c.t_grid;

  std::vector<MetricRow> rows;
  for (double b : bs) {
    for (int T : ts) {
      World w = build_world(c, b, T);
      for (const auto& solver : c.solvers) {
        auto t0 = std::chrono::steady_clock::now();
        SeedGroup s = run_solver(w, solver, c);
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

        Estimate est =
            sigma_estimate(w, s, c.samples, hash_combine(c.seed, 0x6576616cull), c.threads);
        rows.push_back({solver, b, T, est.sigma, est.stderr_, ms, s.total_cost});

        std::string tag = cell_tag(solver, b, T);
        write_seed_csv(w, s, c.out_dir + "/seeds_" + tag + ".csv");
        write_estimate_csv(est, c.out_dir + "/estimate_" + tag + ".csv");
        CampaignTrace trace = simulate_campaign(w, s, hash_combine(c.seed, 0x7472616365ull), 0);
        write_trace_jsonl(w, trace, c.out_dir + "/trace_" + tag + ".jsonl");
      }
    }
  }
  write_metrics_csv(rows, c.out_dir + "/metrics.csv");
  return rows;
}

}  // namespace imdpp
