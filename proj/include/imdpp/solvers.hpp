#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "imdpp/common.hpp"

namespace imdpp {

inline constexpr double kNoBudget = std::numeric_limits<double>::infinity();

// Memoizing set-function oracle over ground elements 0..n-1. The callback
// receives a sorted element vector; results are cached per set.
class SetOracle {
 public:
  using Eval = std::function<double(const std::vector<std::uint32_t>&)>;

  SetOracle(std::size_t n, Eval f) : SetOracle(n, std::move(f), {}, kNoBudget) {}
  SetOracle(std::size_t n, Eval f, std::vector<double> cost, double budget);

  double value(std::vector<std::uint32_t> elems) const;
  std::size_t size() const { return n_; }
  double cost(std::uint32_t e) const { return cost_[e]; }
  double cost_of(const std::vector<std::uint32_t>& elems) const;
  double budget() const { return budget_; }
  std::size_t evals() const { return evals_; }

 private:
  std::size_t n_;
  Eval f_;
  std::vector<double> cost_;
  double budget_;
  mutable std::map<std::vector<std::uint32_t>, double> memo_;
  mutable std::size_t evals_ = 0;
};

struct SolveResult {
  std::vector<std::uint32_t> elems;  // sorted
  double value = 0.0;
  double cost = 0.0;
};

// Exhaustive search over feasible subsets; exact argmax, ties resolved to the
// lexicographically smallest sorted element vector. SizeError past 20
// elements.
SolveResult brute_force_opt(const SetOracle& f);

// Double greedy for unconstrained maximization (costs and budget ignored).
// Deterministic variant keeps element e when its add-gain is >= its
// remove-gain (1/3 guarantee on nonnegative submodular f); the randomized
// variant flips a proportional coin (1/2 in expectation).
SolveResult usm_double_greedy(const SetOracle& f, bool randomized = false,
                              std::uint64_t seed = 0);
// Same, restricted to a subset of the ground set.
SolveResult usm_double_greedy_on(const SetOracle& f, const std::vector<std::uint32_t>& ground,
                                 bool randomized = false, std::uint64_t seed = 0);

struct GreedyResult {
  std::vector<std::uint32_t> elems;  // insertion order
  double value = 0.0;
  double cost = 0.0;
  bool violated = false;
  std::uint32_t violator = kNoId;
};

// Greedy by marginal gain per cost over the whole universe (no affordability
// filter). Stops right after the cumulative cost first exceeds the budget
// (that element, the violator, is kept) or right before adding an element
// with negative marginal gain. Ties by element id.
GreedyResult greedy_violating(const SetOracle& f, const std::vector<std::uint32_t>& universe);

// Composite knapsack-constrained maximizer: two violating-greedy passes (the
// second on the complement of the first), an unconstrained double-greedy pass
// restricted to the first, repair by dropping the recorded violator, then the
// better of the repaired set and the best feasible singleton. The double
// greedy pass follows the usm_randomized flag.
SolveResult smk_solve(const SetOracle& f, bool usm_randomized = false, std::uint64_t seed = 0);

}  // namespace imdpp
