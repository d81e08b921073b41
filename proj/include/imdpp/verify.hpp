#pragma once

#include <string>
#include <vector>

namespace imdpp {

// One acceptance check outcome. `detail` carries the measured values (6
// significant digits) so a failing line is actionable on its own.
struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double elapsed_ms = 0.0;
};

struct VerifyOptions {
  // Perturbs the reachability first-hop formula; nonzero values must make
  // check 1 fail (negative control for the check itself).
  double dr_mutation = 0.0;
  int threads = 1;
};

// Runs acceptance check `id` (1..10). Exceptions inside a check are caught
// and reported as a failure. Throws ConfigError for unknown ids.
CheckResult run_check(int id, const VerifyOptions& opt = {});

// All ten checks in order.
std::vector<CheckResult> verify_suite(const VerifyOptions& opt = {});

// "[PASS] criterion-3 realization-submodularity: ... (12.3 ms)"
std::string format_check(const CheckResult& r);

}  // namespace imdpp
