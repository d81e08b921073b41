#include "imdpp/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include "json.hpp"

namespace imdpp {

SeedGroup SeedGroup::of(const World& w, std::vector<Seed> seeds) {
  std::sort(seeds.begin(), seeds.end());
  SeedGroup g;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Seed& s = seeds[i];
    if (s.u >= w.users()) throw InputError("seed references unknown user");
    if (s.x >= w.items()) throw InputError("seed references unknown item");
    if (s.t < 1 || s.t > w.promotions)
      throw InputError("seed timing outside [1," + std::to_string(w.promotions) +
                       "]: " + std::to_string(s.t));
    if (i > 0 && seeds[i - 1] == s)
      throw InputError("duplicate seed: " + w.sn.users().name(s.u) + "," +
                       w.catalog.items().name(s.x) + "," + std::to_string(s.t));
    g.total_cost += w.catalog.cost(s.u, s.x);
  }
  g.seeds = std::move(seeds);
  return g;
}

std::uint64_t CoinKey::hash() const {
  std::uint64_t h = 0x6d7072646966ull;  // namespace tag for coin hashing
  h = hash_combine(h, kind);
  h = hash_combine(h, static_cast<std::uint64_t>(t));
  h = hash_combine(h, promoter);
  h = hash_combine(h, target);
  h = hash_combine(h, item);
  h = hash_combine(h, other);
  return h;
}

bool HashCoins::flip(const CoinKey& key, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  std::uint64_t h = hash_combine(base_, key.hash());
  double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
  return unit < p;
}

namespace {

struct EndOfStep {
  const World& w;
  PerceptionState& st;

  void apply(const std::vector<ItemMask>& newly) {
    bool any = false;
    bool derive = !w.pin_override && !w.metas.empty();
    for (UserId u = 0; u < w.users(); ++u) {
      if (newly[u] == 0) continue;
      any = true;
      if (derive && w.dyn.eta != 0.0) {
        st.weights[u] = update_meta_weights(w, st.adopted[u], true, st.weights[u], w.dyn.eta);
        st.pins[u] = derive_pin(w, st.weights[u]);
      }
      update_preferences(st.pins[u], st.adopted[u], st.pref[u], w.dyn.lambda);
    }
    if (!any || w.dyn.mu == 0.0) return;
    for (std::uint32_t e = 0; e < w.sn.edge_count(); ++e) {
      const auto& ed = w.sn.edge(e);
      if (newly[ed.src] == 0 && newly[ed.dst] == 0) continue;
      st.pact[e] = updated_influence(ed.strength, st.adopted[ed.src], st.adopted[ed.dst],
                                     w.dyn.mu);
    }
  }
};

}  // namespace

RunResult run_campaign(const World& w, const SeedGroup& s, CoinSource& coins,
                       const RunOptions& opt) {
  PerceptionState owned;
  PerceptionState& st = opt.final_state ? *opt.final_state : owned;
  st = opt.start_state ? *opt.start_state : PerceptionState::initial(w);

  RunResult res;
  auto adopt = [&](int t, int step, UserId u, ItemId x, AdoptionKind kind) {
    st.adopted[u] = with_item(st.adopted[u], x);
    double wx = w.catalog.importance(x);
    res.sigma += wx;
    if (opt.user_mask && (*opt.user_mask)[u]) res.sigma_masked += wx;
    if (opt.trace) opt.trace->push_back({t, step, u, x, kind});
  };

  EndOfStep updater{w, st};
  std::vector<ItemMask> prev(w.users(), 0), cur(w.users(), 0);

  for (int t = std::max(1, opt.first_promotion); t <= w.promotions; ++t) {
    std::fill(prev.begin(), prev.end(), 0);
    for (const Seed& sd : s.seeds) {
      if (sd.t != t) continue;
      if (has_item(st.adopted[sd.u], sd.x)) continue;  // re-seeding an adopter is inert
      adopt(t, 0, sd.u, sd.x, AdoptionKind::kSeeded);
      prev[sd.u] = with_item(prev[sd.u], sd.x);
    }
    bool moved = std::any_of(prev.begin(), prev.end(), [](ItemMask m) { return m != 0; });
    if (moved) updater.apply(prev);

    int step = 0;
    while (moved) {
      ++step;
      moved = false;
      std::fill(cur.begin(), cur.end(), 0);
      for (UserId u = 0; u < w.users(); ++u) {
        for (ItemId x = 0; x < w.items(); ++x) {
          if (has_item(st.adopted[u], x)) continue;
          // Promotion trials in promoter-id order; first success is credited.
          std::uint32_t hit_edge = kNoId;
          for (auto e : w.sn.in_edges(u)) {
            UserId src = w.sn.edge(e).src;
            if (!has_item(prev[src], x)) continue;
            double p = st.pact[e] * st.pref[u][x];
            if (coins.flip({CoinKey::kAttempt, t, src, u, x, 0}, p)) {
              hit_edge = e;
              break;
            }
          }
          if (hit_edge == kNoId) continue;
          UserId promoter = w.sn.edge(hit_edge).src;
          double pref_x = st.pref[u][x];
          adopt(t, step, u, x, AdoptionKind::kPromoted);
          cur[u] = with_item(cur[u], x);
          moved = true;
          for (ItemId y = 0; y < w.items(); ++y) {
            if (y == x || has_item(st.adopted[u], y)) continue;
            double rc = st.pins[u].rc(x, y);
            if (rc <= 0.0) continue;
            double pext = ext_probability(st.pact[hit_edge], pref_x, rc);
            if (coins.flip({CoinKey::kExtraCoin, t, promoter, u, x, y}, pext)) {
              adopt(t, step, u, y, AdoptionKind::kExtra);
              cur[u] = with_item(cur[u], y);
            }
          }
        }
      }
      if (moved) updater.apply(cur);
      std::swap(prev, cur);
    }
  }
  return res;
}

CampaignTrace simulate_campaign(const World& w, const SeedGroup& s, std::uint64_t master,
                                std::uint64_t stream) {
  if (w.budget > 0.0 && s.total_cost > w.budget * (1.0 + 1e-12) + 1e-12)
    throw BudgetError("seed group cost " + fmt6(s.total_cost) + " exceeds budget " +
                      fmt6(w.budget));
  CampaignTrace trace;
  RunOptions opt;
  opt.trace = &trace;
  HashCoins coins(master, stream);
  run_campaign(w, s, coins, opt);
  return trace;
}

namespace {

Estimate estimate_impl(const World& w, const SeedGroup& s,
                       const std::vector<std::uint8_t>* mask, int samples, std::uint64_t master,
                       int threads) {
  if (samples <= 0) throw InputError("sample count must be positive");
  std::vector<double> vals(samples);
  auto body = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      HashCoins coins(master, static_cast<std::uint64_t>(i));
      RunOptions opt;
      opt.user_mask = mask;
      RunResult r = run_campaign(w, s, coins, opt);
      vals[i] = mask ? r.sigma_masked : r.sigma;
    }
  };
  threads = std::max(1, std::min(threads, samples));
  if (threads == 1) {
    body(0, samples);
  } else {
    std::vector<std::thread> pool;
    int chunk = (samples + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
      int lo = k * chunk, hi = std::min(samples, lo + chunk);
      if (lo < hi) pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  Kahan mean_acc;
  for (double v : vals) mean_acc.add(v);
  double mean = mean_acc.sum / samples;
  double se = 0.0;
  if (samples > 1) {
    Kahan var_acc;
    for (double v : vals) var_acc.add((v - mean) * (v - mean));
    se = std::sqrt(var_acc.sum / (samples - 1) / samples);
  }
  return {mean, se, samples, master};
}

}  // namespace

Estimate sigma_estimate(const World& w, const SeedGroup& s, int samples, std::uint64_t master,
                        int threads) {
  return estimate_impl(w, s, nullptr, samples, master, threads);
}

Estimate sigma_estimate_masked(const World& w, const SeedGroup& s,
                               const std::vector<std::uint8_t>& mask, int samples,
                               std::uint64_t master, int threads) {
  return estimate_impl(w, s, &mask, samples, master, threads);
}

namespace {

struct PendingCoin {};

// Replays a forced-outcome prefix; the first coin past the prefix aborts the
// run and reports its probability so the enumerator can branch on it.
class ScriptCoins : public CoinSource {
 public:
  ScriptCoins(const std::vector<bool>& script, std::vector<double>& probs)
      : script_(script), probs_(probs) {}
  bool flip(const CoinKey&, double p) override {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    if (pos_ < script_.size()) {
      if (probs_.size() <= pos_) probs_.resize(pos_ + 1);
      probs_[pos_] = p;
      return script_[pos_++];
    }
    if (probs_.size() <= pos_) probs_.resize(pos_ + 1);
    probs_[pos_] = p;
    throw PendingCoin{};
  }

 private:
  const std::vector<bool>& script_;
  std::vector<double>& probs_;
  std::size_t pos_ = 0;
};

}  // namespace

double expectation_exact_static(
    const World& w, const SeedGroup& s,
    const std::function<double(const RunResult&, const PerceptionState&)>& value,
    std::size_t max_outcomes) {
  if (!w.dyn.frozen())
    throw InputError("exact expectation requires frozen dynamics (eta=lambda=mu=0)");
  std::vector<bool> script;
  std::vector<double> probs;
  std::size_t leaves = 0;
  Kahan total;

  auto weight_of = [&]() {
    double wgt = 1.0;
    for (std::size_t i = 0; i < script.size(); ++i) wgt *= script[i] ? probs[i] : 1.0 - probs[i];
    return wgt;
  };

  std::function<void()> descend = [&]() {
    ScriptCoins coins(script, probs);
    PerceptionState st;
    RunOptions opt;
    opt.final_state = &st;
    try {
      RunResult r = run_campaign(w, s, coins, opt);
      if (++leaves > max_outcomes)
        throw SizeError("exact enumeration exceeds outcome cap of " +
                        std::to_string(max_outcomes));
      total.add(weight_of() * value(r, st));
    } catch (const PendingCoin&) {
      for (bool outcome : {true, false}) {
        script.push_back(outcome);
        descend();
        script.pop_back();
      }
    }
  };
  descend();
  return total.sum;
}

double sigma_exact_static(const World& w, const SeedGroup& s, std::size_t max_outcomes) {
  return expectation_exact_static(
      w, s, [](const RunResult& r, const PerceptionState&) { return r.sigma; }, max_outcomes);
}

RealizationSpace RealizationSpace::build(const World& w) {
  if (!w.dyn.frozen())
    throw InputError("realization space requires frozen dynamics (eta=lambda=mu=0)");
  RealizationSpace sp;
  sp.world = &w;
  PerceptionState st = PerceptionState::initial(w);
  auto consider = [&](const CoinKey& key, double p) {
    if (p <= 0.0 || p >= 1.0) return;
    sp.keys.push_back(key);
    sp.probs.push_back(p);
  };
  for (int t = 1; t <= w.promotions; ++t) {
    for (std::uint32_t e = 0; e < w.sn.edge_count(); ++e) {
      const auto& ed = w.sn.edge(e);
      for (ItemId x = 0; x < w.items(); ++x) {
        consider({CoinKey::kAttempt, t, ed.src, ed.dst, x, 0},
                 st.pact[e] * st.pref[ed.dst][x]);
        for (ItemId y = 0; y < w.items(); ++y) {
          if (y == x) continue;
          double rc = st.pins[ed.dst].rc(x, y);
          if (rc <= 0.0) continue;
          consider({CoinKey::kExtraCoin, t, ed.src, ed.dst, x, y},
                   ext_probability(st.pact[e], st.pref[ed.dst][x], rc));
        }
      }
    }
  }
  if (sp.keys.size() > 64)
    throw SizeError("realization space has " + std::to_string(sp.keys.size()) +
                    " coins; the replay mask caps at 64");
  for (std::size_t i = 0; i < sp.keys.size(); ++i) sp.index.emplace(sp.keys[i], i);
  return sp;
}

namespace {

class TableCoins : public CoinSource {
 public:
  TableCoins(const RealizationSpace& sp, std::uint64_t outcomes) : sp_(sp), out_(outcomes) {}
  bool flip(const CoinKey& key, double p) override {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    auto it = sp_.index.find(key);
    if (it == sp_.index.end())
      throw InputError("realization does not cover a consulted coin");
    return (out_ >> it->second) & 1u;
  }

 private:
  const RealizationSpace& sp_;
  std::uint64_t out_;
};

}  // namespace

double sigma_on_realization(const RealizationSpace& space, std::uint64_t outcomes,
                            const SeedGroup& s) {
  TableCoins coins(space, outcomes);
  return run_campaign(*space.world, s, coins).sigma;
}

void write_trace_jsonl(const World& w, const CampaignTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open trace output file: " + path);
  static const char* kKind[] = {"seeded", "promoted", "extra"};
  for (const auto& ev : trace) {
    nlohmann::json j{{"t", ev.t},
                     {"step", ev.step},
                     {"user", w.sn.users().name(ev.u)},
                     {"item", w.catalog.items().name(ev.x)},
                     {"kind", kKind[static_cast<int>(ev.kind)]}};
    out << j.dump() << "\n";
  }
}

}  // namespace imdpp
