#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "imdpp/diffusion.hpp"
#include "imdpp/world.hpp"

namespace imdpp {

struct DysimParams {
  double theta = 1.0;  // market grouping: common-user count must exceed this
  double rho = 0.01;   // influenced-user exploration: path product must exceed this
  double beta = 1.0;   // clustering: weight of the hop-distance penalty
  int samples = 100;   // Monte Carlo samples for internal estimates
  std::uint64_t master = 1;
  int threads = 1;
};

struct Nominee {
  UserId u;
  ItemId x;
  bool operator==(const Nominee&) const = default;
  auto operator<=>(const Nominee&) const = default;
};

using NomineeSet = std::vector<Nominee>;  // sorted, unique

// Spread oracle for nominee selection: dynamics frozen at a reference state
// (campaign start by default) and nominees placed in a single promotion.
// Memoized; deterministic per master seed.
class FrozenSpread {
 public:
  FrozenSpread(const World& w, int samples, std::uint64_t master,
               const PerceptionState* start = nullptr);
  double value(NomineeSet n) const;
  double marginal(const NomineeSet& base, Nominee cand) const;
  const World& world() const { return fw_; }

 private:
  World fw_;
  PerceptionState start_;
  int samples_;
  std::uint64_t master_;
  mutable std::map<NomineeSet, double> memo_;
};

// Marginal contribution per unit cost of adding cand to base.
double mcp(const FrozenSpread& f, const NomineeSet& base, Nominee cand, double cost);

// Greedy nominee selection: repeatedly add the affordable pair with the
// largest marginal contribution per cost until none remains affordable. Lazy
// re-evaluation with recomputation before every commit; ties by (user, item).
NomineeSet select_nominees(const World& w, double budget, const FrozenSpread& f);

// Mean of per-user relevance over all users at campaign start.
PairRelevance average_relevance(const World& w);

// Mean relevance over `users` on the expected post-seeding state (Monte Carlo
// over full campaigns; collapses to the initial average when per-user
// relevance never changes).
PairRelevance market_relevance(const World& w, const SeedGroup& s,
                               const std::vector<UserId>& users, int samples,
                               std::uint64_t master);

struct Cluster {
  std::vector<Nominee> members;  // sorted
};

// Single-linkage agglomeration under affinity
//   (avg rc(x,y) - avg rs(x,y)) - beta * hops(u,v) / diameter,
// same-item pairs counting full complementary relevance; merging stops when
// no cross-cluster affinity is positive. Clusters ordered by smallest member.
std::vector<Cluster> cluster_nominees(const World& w, const NomineeSet& n,
                                      const PairRelevance& avg, double beta);

struct TargetMarket {
  std::size_t id = 0;
  std::vector<Nominee> nominees;
  std::vector<UserId> users;        // influenced users, sorted
  std::vector<std::uint8_t> mask;   // indicator over all users
  std::vector<ItemId> items;        // distinct promoted items, sorted
  std::uint32_t hop_diameter = 0;   // of the induced subgraph
  int duration = 1;                 // promotional duration
  double antagonism = 0.0;          // substitutable relevance vs grouped peers
};

struct MarketGroup {
  std::vector<std::size_t> markets;  // ids, antagonism ascending
};

struct Markets {
  std::vector<TargetMarket> markets;  // indexed by id (cluster order)
  std::vector<MarketGroup> groups;    // ordered by smallest market id
};

// Markets from clusters: influenced users kept when some path from a nominee
// user has influence product above rho; markets sharing more than theta
// common users are grouped transitively; within a group markets are ordered
// by antagonism (total substitutable relevance toward the other markets'
// items), and promotional durations split the campaign length in proportion
// to nominee counts (half-up, floor 1).
Markets identify_and_prioritize(const World& w, const std::vector<Cluster>& clusters,
                                const PairRelevance& avg, const DysimParams& p);

// Aggregated influence on (v,y) from in-neighbors that adopted y: the
// world's diffusion model picks the noisy-or or the clamped-sum form.
double aggregated_influence(const World& w, const PerceptionState& st, UserId v, ItemId y);

// Expected sum over masked users and their unadopted items of aggregated
// influence times preference, on the post-campaign state (Monte Carlo mean).
double future_likelihood(const World& w, const SeedGroup& s,
                         const std::vector<std::uint8_t>& mask, int samples,
                         std::uint64_t master);

struct Window {
  int lo = 1;
  int hi = 1;
};

// Search window for the next timing: starts at the latest timing already
// assigned (t_hat, 1 when none) and extends to min(t_hat+1, duration +
// latest timing of the previous market), clamped into [t_hat, T].
Window timing_window(int t_hat, int duration, int prev_market_max_t, int T);

// SI = marginal masked spread + ((T-t+1)/T) * marginal future likelihood.
double substantial_influence(const World& w, const SeedGroup& s, Seed cand,
                             const std::vector<std::uint8_t>& mask, int samples,
                             std::uint64_t master);

struct TdsiPick {
  Nominee n;
  int t;
  Window window;
  double si;
  std::size_t market;
};

struct DysimResult {
  SeedGroup seeds;
  Markets markets;
  std::vector<TdsiPick> picks;
};

// Full pipeline: nominee selection, clustering, market identification and
// prioritization, then per group / per market repeated best-reachability item
// extraction with timing assignment by substantial influence.
DysimResult dysim_solve(const World& w, const DysimParams& p);

// Pipeline stages after nominee selection, for a prescribed nominee set.
DysimResult dysim_schedule(const World& w, const DysimParams& p, const NomineeSet& noms);

struct AdaptiveRound {
  int t = 0;
  SeedGroup seeds;       // seeds committed while planning this round
  int rejected = 0;      // nominees rejected for substitutable market overlap
  double sigma = 0.0;    // realized importance-weighted adoptions of round t
};

struct AdaptiveResult {
  SeedGroup seeds;  // all committed seeds
  std::vector<AdaptiveRound> rounds;
  CampaignTrace trace;
  double realized_sigma = 0.0;
};

using ObserveFn =
    std::function<void(int t, const SeedGroup& round_seeds, const CampaignTrace& round_events)>;

// Round-by-round variant: each round nominates one pair at a time until
// grouped markets would promote substitutable items (the offending nominee is
// rejected), assigns timings searching only {t, t+1}, ends the round once a
// pick lands on t+1, then observes one realized propagation of round t before
// planning round t+1; the last round spends the remaining budget.
AdaptiveResult dysim_adaptive(const World& w, const DysimParams& p,
                              const ObserveFn& observe = {});

enum class Baseline { kDegree, kRandom, kGreedy1 };

// Benchmark seed-group builders: top-outdegree users on the most important
// item, uniform random affordable pairs, and the nominee greedy with every
// seed in the first promotion.
SeedGroup baseline_solve(const World& w, Baseline kind, const DysimParams& p);

}  // namespace imdpp
