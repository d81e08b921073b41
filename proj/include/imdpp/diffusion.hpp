#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "imdpp/perception.hpp"
#include "imdpp/world.hpp"

namespace imdpp {

struct Seed {
  UserId u;
  ItemId x;
  int t;
  bool operator==(const Seed&) const = default;
  auto operator<=>(const Seed&) const = default;
};

// Seed assignment with its total cost. `of` validates ids, timing range and
// duplicates; feasibility against the budget is checked where simulations
// start.
struct SeedGroup {
  std::vector<Seed> seeds;  // sorted (u,x,t)
  double total_cost = 0.0;

  static SeedGroup of(const World& w, std::vector<Seed> seeds);
  bool empty() const { return seeds.empty(); }
  std::size_t size() const { return seeds.size(); }
};

enum class AdoptionKind : std::uint8_t { kSeeded = 0, kPromoted = 1, kExtra = 2 };

struct TraceEvent {
  int t;
  int step;
  UserId u;
  ItemId x;
  AdoptionKind kind;
};

using CampaignTrace = std::vector<TraceEvent>;

// One Bernoulli decision of the process. kAttempt: u' (newly adopted x) tries
// to promote x to u, probability P_act(u',u)*P_pref(u,x). kExtraCoin: after a
// successful promotion of x by u', u extra-adopts y, probability
// P_act*P_pref(u,x)*r^C(u,x,y).
struct CoinKey {
  enum Kind : std::uint8_t { kAttempt = 0, kExtraCoin = 1 };
  Kind kind;
  int t;
  UserId promoter;
  UserId target;
  ItemId item;
  ItemId other;  // unused for kAttempt

  std::uint64_t hash() const;
  auto operator<=>(const CoinKey&) const = default;
};

class CoinSource {
 public:
  virtual ~CoinSource() = default;
  // p <= 0 and p >= 1 never reach the randomness behind the source.
  virtual bool flip(const CoinKey& key, double p) = 0;
};

// Counter-based coins: outcome = hash(master, stream, key) thresholded by p.
// Identical (master,stream) pairs give common random numbers across seed
// groups, independent of consult order.
class HashCoins : public CoinSource {
 public:
  HashCoins(std::uint64_t master, std::uint64_t stream) : base_(hash_combine(master, stream)) {}
  bool flip(const CoinKey& key, double p) override;

 private:
  std::uint64_t base_;
};

struct RunResult {
  double sigma = 0.0;         // sum of importance over all adoption events
  double sigma_masked = 0.0;  // restricted to users with mask set
};

struct RunOptions {
  const std::vector<std::uint8_t>* user_mask = nullptr;
  CampaignTrace* trace = nullptr;
  PerceptionState* final_state = nullptr;
  // Resume support: start from this perception state (default: initial) and
  // run promotions first_promotion..w.promotions. Seeds scheduled earlier are
  // ignored.
  const PerceptionState* start_state = nullptr;
  int first_promotion = 1;
};

// The campaign process: T promotions, each running steps until no new
// adoption. Seeds adopt at step 0 bypassing preference; at step z >= 1 users
// newly adopted at z-1 promote their new items; multi-promoter trials run
// independently in promoter-id order and the first success is credited; the
// credited promoter's association coins decide extra adoptions; perception
// updates apply at the end of every step. Budget feasibility is not checked
// here (solvers probe infeasible sets); simulate_campaign and the experiment
// layer enforce it.
RunResult run_campaign(const World& w, const SeedGroup& s, CoinSource& coins,
                       const RunOptions& opt = {});

CampaignTrace simulate_campaign(const World& w, const SeedGroup& s, std::uint64_t master,
                                std::uint64_t stream);

struct Estimate {
  double sigma = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo importance-weighted influence spread over `samples` runs with
// per-sample coin streams. Deterministic in (w, s, master) regardless of
// thread count: per-sample values land in an indexed buffer and are reduced
// in order with compensated summation.
Estimate sigma_estimate(const World& w, const SeedGroup& s, int samples, std::uint64_t master,
                        int threads = 1);

// Estimate restricted to a user mask (market spread); same machinery.
Estimate sigma_estimate_masked(const World& w, const SeedGroup& s,
                               const std::vector<std::uint8_t>& mask, int samples,
                               std::uint64_t master, int threads = 1);

inline constexpr std::size_t kDefaultOutcomeCap = std::size_t{1} << 20;

// Exact expectation of an arbitrary end-of-run functional under frozen
// dynamics, by branch-on-demand enumeration over consulted coins. Throws
// InputError when dynamics are not frozen, SizeError past the leaf cap.
double expectation_exact_static(
    const World& w, const SeedGroup& s,
    const std::function<double(const RunResult&, const PerceptionState&)>& value,
    std::size_t max_outcomes = kDefaultOutcomeCap);

// Exact sigma under frozen dynamics.
double sigma_exact_static(const World& w, const SeedGroup& s,
                          std::size_t max_outcomes = kDefaultOutcomeCap);

// Pre-enumerated coin space of a frozen-dynamics world: every coin the
// process could consult, with its static probability. Coins with probability
// 0 or 1 are resolved, not listed.
struct RealizationSpace {
  const World* world = nullptr;
  std::vector<CoinKey> keys;
  std::vector<double> probs;
  std::map<CoinKey, std::size_t> index;

  static RealizationSpace build(const World& w);
  std::size_t coin_count() const { return keys.size(); }
};

// Deterministic replay of one realization (bit i = outcome of coin i).
double sigma_on_realization(const RealizationSpace& space, std::uint64_t outcomes,
                            const SeedGroup& s);

void write_trace_jsonl(const World& w, const CampaignTrace& trace, const std::string& path);

}  // namespace imdpp
