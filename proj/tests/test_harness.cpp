#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "imdpp/experiment.hpp"
#include "imdpp/io.hpp"
#include "imdpp/verify.hpp"
#include "support.hpp"

using namespace imdpp;

namespace {

std::string tiny_synth_json(const std::string& extra = "") {
  return R"({"synthetic": {"users": 6, "items": 2, "features": 2, "brands": 1,
              "categories": 1, "complementary_metas": 1, "substitutable_metas": 0,
              "edge_density": 0.4, "strength": [0.4, 0.8], "pref0": [0.2, 0.4],
              "cost_alpha": 0.5}, "world_seed": 11)" +
         extra + "}";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("experiment configs parse every documented key") {
  std::string text = tiny_synth_json(
      R"(, "budget": 2.5, "promotions": 3, "b_grid": [1.0, 2.0], "t_grid": [1, 3],
         "solvers": ["degree", "dysim"], "samples": 40, "seed": 9, "threads": 1,
         "eta": 0.5, "lambda": 0.1, "mu": 0.2, "theta": 1.5, "rho": 0.05,
         "beta": 0.7, "diffusion_model": "lt", "cost_alpha": 0.9,
         "out_dir": "elsewhere", "usm_randomized": true, "dr_mutation": 0.01)");
  ExperimentConfig c = parse_experiment_config(text);
  CHECK(c.synthetic.has_value());
  CHECK(c.synthetic->users == 6);
  CHECK(c.world_seed == 11);
  CHECK(c.budget == 2.5);
  CHECK(c.promotions == 3);
  CHECK(c.b_grid == std::vector<double>{1.0, 2.0});
  CHECK(c.t_grid == std::vector<int>{1, 3});
  CHECK(c.solvers == std::vector<std::string>{"degree", "dysim"});
  CHECK(c.samples == 40);
  CHECK(c.seed == 9);
  CHECK(c.dyn.eta == 0.5);
  CHECK(c.dyn.lambda == 0.1);
  CHECK(c.dyn.mu == 0.2);
  CHECK(c.theta == 1.5);
  CHECK(c.rho == 0.05);
  CHECK(c.beta == 0.7);
  CHECK(c.model == DiffusionModel::kLT);
  CHECK(c.cost_alpha == 0.9);
  CHECK(c.out_dir == "elsewhere");
  CHECK(c.usm_randomized);
  CHECK(c.dr_mutation == 0.01);
}

TEST_CASE("experiment configs default the grids and solver list") {
  ExperimentConfig c = parse_experiment_config(tiny_synth_json());
  CHECK(c.budget == 1.0);
  CHECK(c.promotions == 2);
  CHECK(c.b_grid.empty());
  CHECK(c.t_grid.empty());
  CHECK(c.solvers == std::vector<std::string>{"dysim"});
  CHECK(c.model == DiffusionModel::kIC);
  CHECK(!c.usm_randomized);
}

TEST_CASE("experiment config errors name the offending key") {
  auto message_of = [](const std::string& text) {
    try {
      parse_experiment_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message_of(tiny_synth_json(R"(, "budgett": 1)")) ==
        "unknown config key: budgett");
  CHECK(message_of(tiny_synth_json(R"(, "budget": "big")")) ==
        "config key is not a number: budget");
  CHECK(message_of(tiny_synth_json(R"(, "samples": 1.5)")) ==
        "config key is not an integer: samples");
  CHECK(message_of(tiny_synth_json(R"(, "solvers": ["warp"])")) ==
        "unknown solver in config key solvers: warp");
  CHECK(message_of(tiny_synth_json(R"(, "solvers": [])")) ==
        "config key solvers must not be empty");
  CHECK(message_of(tiny_synth_json(R"(, "diffusion_model": "both")")) ==
        "config key diffusion_model must be \"ic\" or \"lt\"");
  CHECK(message_of(tiny_synth_json(R"(, "usm_randomized": 1)")) ==
        "config key is not a boolean: usm_randomized");

  CHECK_THROWS_AS(parse_experiment_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[]"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("{}"), ConfigError);  // no world source
  CHECK_THROWS_AS(parse_experiment_config(
                      R"({"world_dir": "d", "synthetic": {"users": 4}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(tiny_synth_json(R"(, "budget": 0)")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(tiny_synth_json(R"(, "promotions": 0)")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(tiny_synth_json(R"(, "b_grid": [0.0])")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(tiny_synth_json(R"(, "t_grid": [0])")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(tiny_synth_json(R"(, "threads": 0)")),
                  ConfigError);
}

TEST_CASE("configs load from disk and reject missing files") {
  testsupport::TempDir dir("harness-config");
  std::string path = dir.str() + "/config.json";
  std::ofstream(path) << tiny_synth_json(R"(, "budget": 3.0)");
  ExperimentConfig c = load_experiment_config(path);
  CHECK(c.budget == 3.0);
  CHECK_THROWS_AS(load_experiment_config(dir.str() + "/absent.json"), InputError);
}

TEST_CASE("world building applies the cell knobs to the shared instance") {
  ExperimentConfig c = parse_experiment_config(tiny_synth_json(R"(, "eta": 0.25)"));
  World w = build_world(c, 4.0, 3);
  CHECK(w.budget == 4.0);
  CHECK(w.promotions == 3);
  CHECK(w.dyn.eta == 0.25);
  CHECK(w.users() == 6);
  CHECK(w.items() == 2);

  World again = build_world(c, 4.0, 3);
  CHECK(again.sn.edge_count() == w.sn.edge_count());
  CHECK(again.pref0 == w.pref0);

  ExperimentConfig other = c;
  other.world_seed = 12;
  World moved = build_world(other, 4.0, 3);
  CHECK((moved.sn.edge_count() != w.sn.edge_count() || moved.pref0 != w.pref0));
}

TEST_CASE("world building loads dataset directories and fills missing costs") {
  World src = testsupport::line_world(3, 0.5, 0.4);
  testsupport::TempDir dir("harness-world");
  write_world_dir(src, dir.str());
  std::filesystem::remove(dir.path / "costs.csv");

  ExperimentConfig c =
      parse_experiment_config(R"({"world_dir": ")" + dir.str() + R"(", "cost_alpha": 2.0})");
  World w = build_world(c, 5.0, 2);
  CHECK(w.users() == 3);
  CHECK(w.budget == 5.0);
  CHECK(w.promotions == 2);
  // cost = alpha * max(1, outdeg) * (1.5 - pref0): user 1 has pref .4.
  CHECK(w.catalog.cost(1, 0) == doctest::Approx(2.0 * 1 * 1.1));
}

TEST_CASE("solver dispatch rejects unknown names") {
  World w = testsupport::line_world(3, 1.0, 1.0);
  w.budget = 2.0;
  ExperimentConfig c = parse_experiment_config(tiny_synth_json());
  CHECK_THROWS_AS(run_solver(w, "oracle", c), ConfigError);
}

TEST_CASE("the opt solver matches an independent exhaustive enumeration") {
  World w = testsupport::line_world(3, 1.0, 1.0);
  w.budget = 2.0;
  ExperimentConfig c = parse_experiment_config(tiny_synth_json(R"(, "samples": 8)"));

  SeedGroup opt = run_solver(w, "opt", c);

  // Ground triples on T=1 decode to (user, item 0, t 1) in user order.
  auto f = [&](const std::vector<std::uint32_t>& elems) {
    std::vector<Seed> seeds;
    for (std::uint32_t e : elems) seeds.push_back({e, 0, 1});
    return sigma_exact_static(w, SeedGroup::of(w, seeds));
  };
  testsupport::BruteBest want =
      testsupport::exhaustive_best(3, f, {1.0, 1.0, 1.0}, w.budget);

  REQUIRE(opt.size() == want.elems.size());
  for (std::size_t i = 0; i < want.elems.size(); ++i) {
    CHECK(opt.seeds[i].u == want.elems[i]);
    CHECK(opt.seeds[i].t == 1);
  }
  CHECK(want.elems == std::vector<std::uint32_t>{0});  // head of the sure chain
}

TEST_CASE("the composite knapsack solver stays feasible on the triple ground") {
  World w = testsupport::line_world(3, 1.0, 1.0);
  w.budget = 2.0;
  ExperimentConfig c = parse_experiment_config(tiny_synth_json(R"(, "samples": 8)"));
  SeedGroup s = run_solver(w, "smk", c);
  CHECK(s.total_cost <= w.budget * (1 + 1e-12) + 1e-12);
  CHECK(sigma_exact_static(w, s) == doctest::Approx(3.0));  // covers the chain
}

TEST_CASE("set-function solvers refuse oversized ground sets") {
  ExperimentConfig c = parse_experiment_config(tiny_synth_json());
  World smk_big = testsupport::line_world(26, 0.5, 0.5, 1.0, 8);  // 208 triples
  CHECK_THROWS_AS(run_solver(smk_big, "smk", c), SizeError);
  World opt_big = testsupport::line_world(21, 0.5, 0.5);  // 21 > brute cap
  CHECK_THROWS_AS(run_solver(opt_big, "opt", c), SizeError);
}

TEST_CASE("experiments sweep the grid and write one artifact set per cell") {
  testsupport::TempDir dir("harness-exp");
  ExperimentConfig c = parse_experiment_config(tiny_synth_json(
      R"(, "b_grid": [1.5, 2.5], "t_grid": [1, 2], "solvers": ["degree", "random"],
         "samples": 50, "seed": 4)"));
  c.out_dir = dir.str();

  std::vector<MetricRow> rows = run_experiment(c);
  REQUIRE(rows.size() == 8);  // 2 budgets x 2 horizons x 2 solvers
  std::size_t i = 0;
  for (double b : {1.5, 2.5})
    for (int T : {1, 2})
      for (const std::string& solver : {"degree", "random"}) {
        CHECK(rows[i].solver == solver);
        CHECK(rows[i].b == b);
        CHECK(rows[i].T == T);
        CHECK(rows[i].cost_used <= b * (1 + 1e-12) + 1e-12);
        CHECK(rows[i].stderr_ >= 0.0);
        ++i;
      }

  std::string metrics = slurp(dir.str() + "/metrics.csv");
  CHECK(metrics.substr(0, metrics.find('\n')) ==
        "solver,b,T,sigma,stderr,time_ms,cost_used");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 9);
  for (const char* f : {"seeds_degree_b1.5_T1.csv", "estimate_degree_b1.5_T1.csv",
                        "trace_degree_b1.5_T1.jsonl", "seeds_random_b2.5_T2.csv"})
    CHECK(std::filesystem::exists(dir.path / f));

  // Same config, fresh run: identical evaluations (common random numbers).
  testsupport::TempDir dir2("harness-exp2");
  c.out_dir = dir2.str();
  std::vector<MetricRow> rerun = run_experiment(c);
  REQUIRE(rerun.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rerun[k].sigma == rows[k].sigma);
    CHECK(rerun[k].stderr_ == rows[k].stderr_);
    CHECK(rerun[k].cost_used == rows[k].cost_used);
  }
}

TEST_CASE("acceptance checks run by id and reject unknown ones") {
  CheckResult r = run_check(1);
  CHECK(r.id == 1);
  CHECK(r.pass);
  CHECK(!r.name.empty());
  CHECK(!r.detail.empty());
  CHECK(format_check(r).rfind("[PASS] criterion-1 ", 0) == 0);

  CHECK_THROWS_AS(run_check(0), ConfigError);
  CHECK_THROWS_AS(run_check(11), ConfigError);
}

TEST_CASE("the reachability negative control makes its check fail") {
  VerifyOptions opt;
  opt.dr_mutation = 0.05;
  CheckResult r = run_check(1, opt);
  CHECK(!r.pass);
  CHECK(format_check(r).rfind("[FAIL] criterion-1 ", 0) == 0);
}
