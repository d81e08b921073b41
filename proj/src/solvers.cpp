#include "imdpp/solvers.hpp"

#include <algorithm>
#include <random>

namespace imdpp {

namespace {

bool within_budget(double cost, double budget) {
  return cost <= budget * (1.0 + 1e-12) + 1e-12;
}

std::vector<std::uint32_t> sorted_insert(std::vector<std::uint32_t> v, std::uint32_t e) {
  v.insert(std::upper_bound(v.begin(), v.end(), e), e);
  return v;
}

}  // namespace

SetOracle::SetOracle(std::size_t n, Eval f, std::vector<double> cost, double budget)
    : n_(n), f_(std::move(f)), cost_(std::move(cost)), budget_(budget) {
  if (cost_.empty()) cost_.assign(n_, 1.0);
  if (cost_.size() != n_) throw InputError("oracle cost vector size mismatch");
  for (double c : cost_)
    if (c <= 0.0) throw InputError("oracle costs must be positive");
}

double SetOracle::value(std::vector<std::uint32_t> elems) const {
  std::sort(elems.begin(), elems.end());
  auto it = memo_.find(elems);
  if (it != memo_.end()) return it->second;
  for (std::uint32_t e : elems)
    if (e >= n_) throw InputError("oracle element out of range");
  double v = f_(elems);
  ++evals_;
  memo_.emplace(std::move(elems), v);
  return v;
}

double SetOracle::cost_of(const std::vector<std::uint32_t>& elems) const {
  double c = 0.0;
  for (std::uint32_t e : elems) c += cost_[e];
  return c;
}

SolveResult brute_force_opt(const SetOracle& f) {
  std::size_t n = f.size();
  if (n > 20) throw SizeError("brute force capped at 20 elements, got " + std::to_string(n));
  SolveResult best;
  best.value = f.value({});
  bool first = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint32_t> elems;
    for (std::uint32_t e = 0; e < n; ++e)
      if (mask & (std::uint64_t{1} << e)) elems.push_back(e);
    double c = f.cost_of(elems);
    if (!within_budget(c, f.budget())) continue;
    double v = f.value(elems);
    bool better = first || v > best.value ||
                  (v == best.value && std::lexicographical_compare(
                                          elems.begin(), elems.end(), best.elems.begin(),
                                          best.elems.end()));
    if (better) best = {std::move(elems), v, c};
    first = false;
  }
  return best;
}

SolveResult usm_double_greedy_on(const SetOracle& f, const std::vector<std::uint32_t>& ground,
                                 bool randomized, std::uint64_t seed) {
  std::vector<std::uint32_t> x;
  std::vector<std::uint32_t> y(ground);
  std::sort(y.begin(), y.end());
  std::mt19937_64 rng(splitmix64(seed ^ 0x75736d75736d75ull));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double fx = f.value(x), fy = f.value(y);
  for (std::uint32_t e : std::vector<std::uint32_t>(y)) {
    double fxe = f.value(sorted_insert(x, e));
    std::vector<std::uint32_t> ye(y);
    ye.erase(std::find(ye.begin(), ye.end(), e));
    double fye = f.value(ye);
    double a = fxe - fx, b = fye - fy;
    bool keep;
    if (randomized) {
      double ap = std::max(a, 0.0), bp = std::max(b, 0.0);
      keep = (ap + bp <= 0.0) ? a >= b : unit(rng) < ap / (ap + bp);
    } else {
      keep = a >= b;
    }
    if (keep) {
      x = sorted_insert(std::move(x), e);
      fx = fxe;
    } else {
      y = std::move(ye);
      fy = fye;
    }
  }
  return {x, fx, f.cost_of(x)};
}

SolveResult usm_double_greedy(const SetOracle& f, bool randomized, std::uint64_t seed) {
  std::vector<std::uint32_t> ground(f.size());
  for (std::uint32_t e = 0; e < f.size(); ++e) ground[e] = e;
  return usm_double_greedy_on(f, ground, randomized, seed);
}

GreedyResult greedy_violating(const SetOracle& f, const std::vector<std::uint32_t>& universe) {
  GreedyResult res;
  std::vector<std::uint32_t> remaining(universe);
  std::sort(remaining.begin(), remaining.end());
  std::vector<std::uint32_t> sorted;
  res.value = f.value(sorted);
  while (!remaining.empty()) {
    double best_ratio = 0.0, best_value = 0.0;
    std::size_t best_idx = remaining.size();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      double v = f.value(sorted_insert(sorted, remaining[i]));
      double ratio = (v - res.value) / f.cost(remaining[i]);
      if (best_idx == remaining.size() || ratio > best_ratio) {
        best_ratio = ratio;
        best_value = v;
        best_idx = i;
      }
    }
    if (best_ratio < 0.0) break;  // all remaining marginals negative
    std::uint32_t e = remaining[best_idx];
    remaining.erase(remaining.begin() + best_idx);
    sorted = sorted_insert(std::move(sorted), e);
    res.elems.push_back(e);
    res.value = best_value;
    res.cost += f.cost(e);
    if (!within_budget(res.cost, f.budget())) {
      res.violated = true;
      res.violator = e;
      break;
    }
  }
  return res;
}

SolveResult smk_solve(const SetOracle& f, bool usm_randomized, std::uint64_t seed) {
  std::vector<std::uint32_t> universe(f.size());
  for (std::uint32_t e = 0; e < f.size(); ++e) universe[e] = e;

  GreedyResult g1 = greedy_violating(f, universe);
  std::vector<std::uint32_t> s1(g1.elems);
  std::sort(s1.begin(), s1.end());

  std::vector<std::uint32_t> rest;
  for (std::uint32_t e : universe)
    if (!std::binary_search(s1.begin(), s1.end(), e)) rest.push_back(e);
  GreedyResult g2 = greedy_violating(f, rest);
  std::vector<std::uint32_t> s2(g2.elems);
  std::sort(s2.begin(), s2.end());

  SolveResult s3 = usm_double_greedy_on(f, s1, usm_randomized, seed);

  struct Cand {
    std::vector<std::uint32_t> elems;
    double value;
    std::uint32_t violator;
  };
  // S3 is a subset of S1: if it exceeds the budget it must contain S1's
  // violator, since S1 without its violator is the feasible greedy prefix.
  std::vector<Cand> cands = {
      {s1, g1.value, g1.violated ? g1.violator : kNoId},
      {s2, g2.value, g2.violated ? g2.violator : kNoId},
      {s3.elems, s3.value,
       g1.violated && std::binary_search(s3.elems.begin(), s3.elems.end(), g1.violator)
           ? g1.violator
           : kNoId}};
  std::size_t pick = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (cands[i].value > cands[pick].value) pick = i;

  std::vector<std::uint32_t> repaired = cands[pick].elems;
  if (!within_budget(f.cost_of(repaired), f.budget())) {
    std::uint32_t drop = cands[pick].violator;
    if (drop == kNoId && !repaired.empty()) {
      // Defensive: no recorded violator on an infeasible set; drop the most
      // expensive element.
      drop = *std::max_element(repaired.begin(), repaired.end(),
                               [&](std::uint32_t a, std::uint32_t b) {
                                 return f.cost(a) < f.cost(b);
                               });
    }
    repaired.erase(std::remove(repaired.begin(), repaired.end(), drop), repaired.end());
  }
  SolveResult out{repaired, f.value(repaired), f.cost_of(repaired)};

  bool any_single = false;
  SolveResult single;
  for (std::uint32_t e = 0; e < f.size(); ++e) {
    if (!within_budget(f.cost(e), f.budget())) continue;
    double v = f.value({e});
    if (!any_single || v > single.value) {
      single = {{e}, v, f.cost(e)};
      any_single = true;
    }
  }
  if (any_single && single.value > out.value) return single;
  return out;
}

}  // namespace imdpp
