#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun cli(const std::string& args) {
  testsupport::TempDir dir("cli-io");
  std::string out_file = dir.str() + "/out", err_file = dir.str() + "/err";
  std::string cmd = std::string(IMDPP_CLI_PATH) + " " + args + " >" + out_file + " 2>" + err_file;
  int rc = std::system(cmd.c_str());
  int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return {code, slurp(out_file), slurp(err_file)};
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
  int n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("a single passing check exits zero with its pass line") {
  CliRun r = cli("verify --only 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[PASS] criterion-1 ") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("the refuted distributional claim fails honestly with a witness") {
  CliRun r = cli("verify --only 3");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("[FAIL] criterion-3 ") != std::string::npos);
  CHECK(r.out.find("witness") != std::string::npos);
}

TEST_CASE("the full acceptance suite reports all ten criteria and exits nonzero") {
  CliRun r = cli("verify");
  CHECK(r.exit_code == 1);
  for (int id = 1; id <= 10; ++id)
    CHECK(r.out.find("criterion-" + std::to_string(id) + " ") != std::string::npos);
  CHECK(count_lines_starting(r.out, "[PASS]") == 9);
  CHECK(count_lines_starting(r.out, "[FAIL]") == 1);
}

TEST_CASE("a config can arm the negative control for the verifier") {
  testsupport::TempDir dir("cli-verify-cfg");
  std::string cfg = dir.str() + "/cfg.json";
  std::ofstream(cfg) << R"({"synthetic": {"users": 4}, "dr_mutation": 0.05})";
  CliRun r = cli("verify --only 1 --config " + cfg);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("[FAIL] criterion-1 ") != std::string::npos);
}

TEST_CASE("generate and run form a dataset-to-metrics pipeline") {
  testsupport::TempDir dir("cli-pipeline");
  std::string spec = dir.str() + "/spec.json";
  std::ofstream(spec) << R"({"users": 6, "items": 2, "features": 2, "brands": 1,
      "categories": 1, "complementary_metas": 1, "substitutable_metas": 0,
      "edge_density": 0.4, "strength": [0.4, 0.8], "pref0": [0.2, 0.4],
      "cost_alpha": 0.5})";
  std::string data = dir.str() + "/data";

  CliRun gen = cli("generate --spec " + spec + " --out " + data + " --seed 3");
  CHECK(gen.exit_code == 0);
  CHECK(gen.out.find("dataset written to " + data) != std::string::npos);
  CHECK(std::filesystem::exists(data + "/social.tsv"));
  CHECK(std::filesystem::exists(data + "/items.csv"));

  std::string cfg = dir.str() + "/config.json";
  std::string out = dir.str() + "/out";
  std::ofstream(cfg) << R"({"world_dir": ")" << data
                     << R"(", "budget": 2.0, "promotions": 2, "solvers": ["degree"],
                         "samples": 30, "out_dir": ")"
                     << out << R"("})";
  CliRun run = cli("run --config " + cfg);
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("solver=degree") != std::string::npos);
  CHECK(run.out.find("metrics written to " + out) != std::string::npos);
  CHECK(std::filesystem::exists(out + "/metrics.csv"));
}

TEST_CASE("broken configs exit with the error code and a message") {
  testsupport::TempDir dir("cli-bad");
  std::string cfg = dir.str() + "/bad.json";
  std::ofstream(cfg) << "{ nope";
  CliRun r = cli("run --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("argument parsing rejects bad invocations before any work") {
  CHECK(cli("run").exit_code != 0);  // --config is required
  CHECK(cli("frobnicate").exit_code != 0);
  CHECK(cli("verify --only 11").exit_code != 0);
  CHECK(cli("generate --spec /nonexistent.json --out x").exit_code != 0);
  CHECK(cli("").exit_code != 0);  // a subcommand is required
}
