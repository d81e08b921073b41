#include "imdpp/dysim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "imdpp/impact.hpp"
#include "imdpp/perception.hpp"

namespace imdpp {

namespace {

bool affordable(double cost, double remaining) {
  return cost <= remaining * (1.0 + 1e-12) + 1e-12;
}

}  // namespace

FrozenSpread::FrozenSpread(const World& w, int samples, std::uint64_t master,
                           const PerceptionState* start)
    : fw_(w), samples_(samples), master_(master) {
  if (samples <= 0) throw InputError("sample count must be positive");
  fw_.dyn = DynamicsParams{0.0, 0.0, 0.0};
  fw_.promotions = 1;
  start_ = start ? *start : PerceptionState::initial(w);
}

double FrozenSpread::value(NomineeSet n) const {
  std::sort(n.begin(), n.end());
  auto it = memo_.find(n);
  if (it != memo_.end()) return it->second;
  std::vector<Seed> seeds;
  seeds.reserve(n.size());
  for (const Nominee& nom : n) seeds.push_back({nom.u, nom.x, 1});
  SeedGroup sg = SeedGroup::of(fw_, std::move(seeds));
  Kahan acc;
  for (int i = 0; i < samples_; ++i) {
    HashCoins coins(master_, static_cast<std::uint64_t>(i));
    RunOptions opt;
    opt.start_state = &start_;
    acc.add(run_campaign(fw_, sg, coins, opt).sigma);
  }
  double v = acc.sum / samples_;
  memo_.emplace(std::move(n), v);
  return v;
}

double FrozenSpread::marginal(const NomineeSet& base, Nominee cand) const {
  NomineeSet with(base);
  with.push_back(cand);
  return value(std::move(with)) - value(base);
}

double mcp(const FrozenSpread& f, const NomineeSet& base, Nominee cand, double cost) {
  if (cost <= 0.0) throw InputError("marginal contribution per cost needs a positive cost");
  return f.marginal(base, cand) / cost;
}

NomineeSet select_nominees(const World& w, double budget, const FrozenSpread& f) {
  struct Entry {
    double ratio;
    Nominee n;
    std::size_t round;
  };
  auto lower = [](const Entry& a, const Entry& b) {
    return a.ratio < b.ratio || (a.ratio == b.ratio && b.n < a.n);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);

  NomineeSet chosen;
  for (UserId u = 0; u < w.users(); ++u)
    for (ItemId x = 0; x < w.items(); ++x) {
      Nominee n{u, x};
      double c = w.catalog.cost(u, x);
      if (!affordable(c, budget)) continue;
      heap.push({mcp(f, chosen, n, c), n, 0});
    }

  double remaining = budget;
  std::size_t round = 0;
  while (!heap.empty()) {
    Entry e = heap.top();
    heap.pop();
    double c = w.catalog.cost(e.n.u, e.n.x);
    if (!affordable(c, remaining)) continue;  // budget only shrinks: gone for good
    if (e.round != round) {
      // Stale cached ratio is an upper bound (spread is submodular in the
      // static regime); refresh and reconsider.
      heap.push({mcp(f, chosen, e.n, c), e.n, round});
      continue;
    }
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), e.n), e.n);
    remaining -= c;
    ++round;
  }
  return chosen;
}

PairRelevance average_relevance(const World& w) {
  PairRelevance avg(w.items());
  if (w.users() == 0) return avg;
  for (UserId u = 0; u < w.users(); ++u) {
    PairRelevance pin = w.initial_pin(u);
    if (pin.item_count() == 0) continue;
    for (ItemId x = 0; x < w.items(); ++x)
      for (ItemId y = x + 1; y < w.items(); ++y) {
        avg.set_rc(x, y, avg.rc(x, y) + pin.rc(x, y));
        avg.set_rs(x, y, avg.rs(x, y) + pin.rs(x, y));
      }
  }
  for (ItemId x = 0; x < w.items(); ++x)
    for (ItemId y = x + 1; y < w.items(); ++y) {
      avg.set_rc(x, y, avg.rc(x, y) / w.users());
      avg.set_rs(x, y, avg.rs(x, y) / w.users());
    }
  return avg;
}

namespace {

PairRelevance mean_pins(const World& w, const std::vector<PairRelevance>& pins,
                        const std::vector<UserId>& users) {
  PairRelevance out(w.items());
  if (users.empty()) return out;
  for (UserId u : users) {
    if (pins[u].item_count() == 0) continue;
    for (ItemId x = 0; x < w.items(); ++x)
      for (ItemId y = x + 1; y < w.items(); ++y) {
        out.set_rc(x, y, out.rc(x, y) + pins[u].rc(x, y));
        out.set_rs(x, y, out.rs(x, y) + pins[u].rs(x, y));
      }
  }
  for (ItemId x = 0; x < w.items(); ++x)
    for (ItemId y = x + 1; y < w.items(); ++y) {
      out.set_rc(x, y, out.rc(x, y) / users.size());
      out.set_rs(x, y, out.rs(x, y) / users.size());
    }
  return out;
}

bool pins_static(const World& w) {
  return w.pin_override.has_value() || w.metas.empty() || w.dyn.eta == 0.0;
}

}  // namespace

PairRelevance market_relevance(const World& w, const SeedGroup& s,
                               const std::vector<UserId>& users, int samples,
                               std::uint64_t master) {
  if (users.empty()) return PairRelevance(w.items());
  if (pins_static(w) || s.empty()) {
    std::vector<PairRelevance> pins(w.users());
    for (UserId u : users) pins[u] = w.initial_pin(u);
    return mean_pins(w, pins, users);
  }
  PairRelevance out(w.items());
  std::vector<double> rc_sum(w.items() * w.items(), 0.0), rs_sum(rc_sum);
  for (int i = 0; i < samples; ++i) {
    HashCoins coins(master, static_cast<std::uint64_t>(i));
    PerceptionState st;
    RunOptions opt;
    opt.final_state = &st;
    run_campaign(w, s, coins, opt);
    PairRelevance mean = mean_pins(w, st.pins, users);
    for (ItemId x = 0; x < w.items(); ++x)
      for (ItemId y = x + 1; y < w.items(); ++y) {
        rc_sum[x * w.items() + y] += mean.rc(x, y);
        rs_sum[x * w.items() + y] += mean.rs(x, y);
      }
  }
  for (ItemId x = 0; x < w.items(); ++x)
    for (ItemId y = x + 1; y < w.items(); ++y) {
      out.set_rc(x, y, rc_sum[x * w.items() + y] / samples);
      out.set_rs(x, y, rs_sum[x * w.items() + y] / samples);
    }
  return out;
}

std::vector<Cluster> cluster_nominees(const World& w, const NomineeSet& n,
                                      const PairRelevance& avg, double beta) {
  if (n.empty()) return {};
  NomineeSet noms(n);
  std::sort(noms.begin(), noms.end());

  std::uint32_t diam = w.sn.diameter();
  std::map<UserId, std::vector<std::uint32_t>> hops;
  for (const Nominee& nom : noms)
    if (!hops.count(nom.u)) hops.emplace(nom.u, w.sn.undirected_hops(nom.u));

  auto affinity = [&](const Nominee& a, const Nominee& b) {
    double rel = (a.x == b.x) ? 1.0 : avg.rc(a.x, b.x) - avg.rs(a.x, b.x);
    std::uint32_t hop = hops.at(a.u)[b.u];
    if (hop == SocialNetwork::kNoHop) hop = diam;
    double pen = diam > 0 ? beta * static_cast<double>(hop) / diam : 0.0;
    return rel - pen;
  };

  std::size_t k = noms.size();
  std::vector<std::vector<Nominee>> cl(k);
  std::vector<bool> alive(k, true);
  for (std::size_t i = 0; i < k; ++i) cl[i] = {noms[i]};
  std::vector<std::vector<double>> aff(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) aff[i][j] = affinity(noms[i], noms[j]);

  while (true) {
    double best = 0.0;
    std::size_t bi = k, bj = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!alive[j]) continue;
        if (bi == k || aff[i][j] > best) {
          best = aff[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == k || best <= 0.0) break;
    cl[bi].insert(cl[bi].end(), cl[bj].begin(), cl[bj].end());
    std::sort(cl[bi].begin(), cl[bi].end());
    alive[bj] = false;
    for (std::size_t m = 0; m < k; ++m) {
      if (!alive[m] || m == bi) continue;
      std::size_t lo = std::min(m, bi), hi = std::max(m, bi);
      std::size_t lj = std::min(m, bj), hj = std::max(m, bj);
      aff[lo][hi] = std::max(aff[lo][hi], aff[lj][hj]);  // single linkage
    }
  }

  std::vector<Cluster> out;
  for (std::size_t i = 0; i < k; ++i)
    if (alive[i]) out.push_back({cl[i]});
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    return a.members.front() < b.members.front();
  });
  return out;
}

namespace {

std::vector<UserId> influenced_users(const World& w, const std::vector<Nominee>& noms,
                                     double rho) {
  std::vector<double> best(w.users(), 0.0);
  using Q = std::pair<double, UserId>;
  std::priority_queue<Q> heap;
  for (const Nominee& n : noms)
    if (best[n.u] < 1.0) {
      best[n.u] = 1.0;
      heap.push({1.0, n.u});
    }
  while (!heap.empty()) {
    auto [pr, u] = heap.top();
    heap.pop();
    if (pr < best[u]) continue;
    for (std::uint32_t e : w.sn.out_edges(u)) {
      const auto& ed = w.sn.edge(e);
      double np = pr * ed.strength;
      if (np > best[ed.dst]) {
        best[ed.dst] = np;
        heap.push({np, ed.dst});
      }
    }
  }
  std::vector<std::uint8_t> keep(w.users(), 0);
  for (UserId u = 0; u < w.users(); ++u)
    if (best[u] > rho) keep[u] = 1;
  for (const Nominee& n : noms) keep[n.u] = 1;  // nominees always belong
  std::vector<UserId> users;
  for (UserId u = 0; u < w.users(); ++u)
    if (keep[u]) users.push_back(u);
  return users;
}

std::uint32_t induced_hop_diameter(const World& w, const std::vector<UserId>& users,
                                   const std::vector<std::uint8_t>& mask) {
  if (users.size() < 2) return 0;
  std::uint32_t guard = static_cast<std::uint32_t>(users.size()) - 1;
  std::uint32_t diam = 0;
  for (UserId src : users) {
    std::vector<std::uint32_t> dist(w.users(), SocialNetwork::kNoHop);
    std::queue<UserId> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
      UserId u = q.front();
      q.pop();
      auto relax = [&](UserId v) {
        if (mask[v] && dist[v] == SocialNetwork::kNoHop) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
      };
      for (std::uint32_t e : w.sn.out_edges(u)) relax(w.sn.edge(e).dst);
      for (std::uint32_t e : w.sn.in_edges(u)) relax(w.sn.edge(e).src);
    }
    for (UserId dst : users) {
      if (dst == src) continue;
      diam = std::max(diam, dist[dst] == SocialNetwork::kNoHop ? guard : dist[dst]);
    }
  }
  return diam;
}

std::size_t common_users(const std::vector<UserId>& a, const std::vector<UserId>& b) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

int round_half_up(double q) { return static_cast<int>(std::floor(q + 0.5)); }

}  // namespace

Markets identify_and_prioritize(const World& w, const std::vector<Cluster>& clusters,
                                const PairRelevance& avg, const DysimParams& p) {
  Markets out;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    TargetMarket m;
    m.id = i;
    m.nominees = clusters[i].members;
    m.users = influenced_users(w, m.nominees, p.rho);
    m.mask.assign(w.users(), 0);
    for (UserId u : m.users) m.mask[u] = 1;
    std::set<ItemId> items;
    for (const Nominee& n : m.nominees) items.insert(n.x);
    m.items.assign(items.begin(), items.end());
    m.hop_diameter = induced_hop_diameter(w, m.users, m.mask);
    out.markets.push_back(std::move(m));
  }

  std::size_t k = out.markets.size();
  std::vector<std::size_t> parent(k);
  for (std::size_t i = 0; i < k; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (static_cast<double>(common_users(out.markets[i].users, out.markets[j].users)) >
          p.theta)
        parent[find(i)] = find(j);

  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < k; ++i) by_root[find(i)].push_back(i);

  std::vector<std::vector<std::size_t>> groups;
  for (auto& [root, ids] : by_root) groups.push_back(ids);
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  for (auto& ids : groups) {
    for (std::size_t i : ids) {
      double ae = 0.0;
      for (std::size_t j : ids) {
        if (j == i) continue;
        for (ItemId x : out.markets[i].items)
          for (ItemId y : out.markets[j].items)
            if (x != y) ae += avg.rs(x, y);
      }
      out.markets[i].antagonism = ae;
    }
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      if (out.markets[a].antagonism != out.markets[b].antagonism)
        return out.markets[a].antagonism < out.markets[b].antagonism;
      return a < b;
    });
    std::size_t total = 0;
    for (std::size_t i : ids) total += out.markets[i].nominees.size();
    for (std::size_t i : ids) {
      double q = static_cast<double>(out.markets[i].nominees.size()) * w.promotions /
                 static_cast<double>(total);
      out.markets[i].duration = std::max(1, round_half_up(q));
    }
    out.groups.push_back({ids});
  }
  return out;
}

double aggregated_influence(const World& w, const PerceptionState& st, UserId v, ItemId y) {
  if (w.model == DiffusionModel::kIC) {
    double miss = 1.0;
    for (std::uint32_t e : w.sn.in_edges(v))
      if (has_item(st.adopted[w.sn.edge(e).src], y)) miss *= 1.0 - st.pact[e];
    return 1.0 - miss;
  }
  double sum = 0.0;
  for (std::uint32_t e : w.sn.in_edges(v))
    if (has_item(st.adopted[w.sn.edge(e).src], y)) sum += st.pact[e];
  return std::min(1.0, sum);
}

namespace {

double pi_of_state(const World& w, const PerceptionState& st,
                   const std::vector<std::uint8_t>& mask) {
  double pi = 0.0;
  for (UserId v = 0; v < w.users(); ++v) {
    if (!mask[v]) continue;
    for (ItemId y = 0; y < w.items(); ++y) {
      if (has_item(st.adopted[v], y)) continue;
      pi += aggregated_influence(w, st, v, y) * st.pref[v][y];
    }
  }
  return pi;
}

struct MarketEval {
  double sigma = 0.0;
  double pi = 0.0;
};

// Shared-run Monte Carlo of masked spread and future likelihood; optionally
// conditioned on a mid-campaign state starting at promotion t0.
MarketEval market_eval(const World& w, const SeedGroup& s,
                       const std::vector<std::uint8_t>& mask, int samples,
                       std::uint64_t master, const PerceptionState* start = nullptr,
                       int t0 = 1) {
  Kahan sig, pi;
  for (int i = 0; i < samples; ++i) {
    HashCoins coins(master, static_cast<std::uint64_t>(i));
    PerceptionState st;
    RunOptions opt;
    opt.user_mask = &mask;
    opt.final_state = &st;
    opt.start_state = start;
    opt.first_promotion = t0;
    RunResult r = run_campaign(w, s, coins, opt);
    sig.add(r.sigma_masked);
    pi.add(pi_of_state(w, st, mask));
  }
  return {sig.sum / samples, pi.sum / samples};
}

}  // namespace

double future_likelihood(const World& w, const SeedGroup& s,
                         const std::vector<std::uint8_t>& mask, int samples,
                         std::uint64_t master) {
  if (samples <= 0) throw InputError("sample count must be positive");
  return market_eval(w, s, mask, samples, master).pi;
}

Window timing_window(int t_hat, int duration, int prev_market_max_t, int T) {
  int lo = std::clamp(t_hat, 1, T);
  int hi = std::min(t_hat + 1, duration + prev_market_max_t);
  hi = std::clamp(hi, lo, T);
  return {lo, hi};
}

double substantial_influence(const World& w, const SeedGroup& s, Seed cand,
                             const std::vector<std::uint8_t>& mask, int samples,
                             std::uint64_t master) {
  if (std::binary_search(s.seeds.begin(), s.seeds.end(), cand)) return 0.0;
  MarketEval base = market_eval(w, s, mask, samples, master);
  std::vector<Seed> seeds(s.seeds);
  seeds.push_back(cand);
  MarketEval plus = market_eval(w, SeedGroup::of(w, std::move(seeds)), mask, samples, master);
  double weight = static_cast<double>(w.promotions - cand.t + 1) / w.promotions;
  return (plus.sigma - base.sigma) + weight * (plus.pi - base.pi);
}

namespace {

struct TdsiState {
  std::vector<Seed> group_seeds;
  int prev_market_max = 0;
};

int max_timing(const std::vector<Seed>& seeds) {
  int t = 0;
  for (const Seed& s : seeds) t = std::max(t, s.t);
  return t;
}

}  // namespace

DysimResult dysim_solve(const World& w, const DysimParams& p) {
  FrozenSpread spread(w, p.samples, hash_combine(p.master, 0x746d69));
  return dysim_schedule(w, p, select_nominees(w, w.budget, spread));
}

DysimResult dysim_schedule(const World& w, const DysimParams& p, const NomineeSet& noms) {
  DysimResult res;
  res.seeds = SeedGroup::of(w, {});
  if (noms.empty()) return res;

  PairRelevance avg = average_relevance(w);
  std::vector<Cluster> clusters = cluster_nominees(w, noms, avg, p.beta);
  res.markets = identify_and_prioritize(w, clusters, avg, p);

  std::uint64_t eval_master = hash_combine(p.master, 0x657661);
  std::uint64_t rel_master = hash_combine(p.master, 0x72656c);

  std::vector<Seed> all;
  for (const MarketGroup& g : res.markets.groups) {
    TdsiState ts;
    for (std::size_t mid : g.markets) {
      const TargetMarket& m = res.markets.markets[mid];
      int market_max = 0;
      // The window start marches one promotion forward per assignment; it
      // re-anchors to the latest scheduled timing when the market is entered.
      int t_hat = ts.group_seeds.empty() ? 1 : max_timing(ts.group_seeds);
      std::vector<ItemId> pending = m.items;
      std::vector<Nominee> unassigned = m.nominees;
      while (!pending.empty()) {
        SeedGroup sg = SeedGroup::of(w, ts.group_seeds);
        PairRelevance rel = market_relevance(w, sg, m.users, p.samples, rel_master);
        ImpactEvaluator impact(rel, w.catalog.importances());
        std::size_t best = 0;
        double best_dr = 0.0;
        for (std::size_t i = 0; i < pending.size(); ++i) {
          double dr = impact.dynamic_reachability(pending[i], m.hop_diameter);
          if (i == 0 || dr > best_dr) {
            best_dr = dr;
            best = i;
          }
        }
        ItemId x = pending[best];
        pending.erase(pending.begin() + best);

        std::vector<UserId> cands;
        for (const Nominee& n : unassigned)
          if (n.x == x) cands.push_back(n.u);
        while (!cands.empty()) {
          Window win = timing_window(t_hat, m.duration, ts.prev_market_max, w.promotions);
          SeedGroup base_sg = SeedGroup::of(w, ts.group_seeds);
          MarketEval base = market_eval(w, base_sg, m.mask, p.samples, eval_master);
          double best_si = 0.0;
          UserId best_u = kNoId;
          int best_t = win.lo;
          for (UserId u : cands) {
            for (int t = win.lo; t <= win.hi; ++t) {
              Seed cand{u, x, t};
              double si;
              if (std::binary_search(ts.group_seeds.begin(), ts.group_seeds.end(), cand)) {
                si = 0.0;
              } else {
                std::vector<Seed> seeds(ts.group_seeds);
                seeds.push_back(cand);
                MarketEval plus =
                    market_eval(w, SeedGroup::of(w, std::move(seeds)), m.mask, p.samples,
                                eval_master);
                double weight =
                    static_cast<double>(w.promotions - t + 1) / w.promotions;
                si = (plus.sigma - base.sigma) + weight * (plus.pi - base.pi);
              }
              if (best_u == kNoId || si > best_si) {
                best_si = si;
                best_u = u;
                best_t = t;
              }
            }
          }
          Seed picked{best_u, x, best_t};
          ts.group_seeds.insert(
              std::upper_bound(ts.group_seeds.begin(), ts.group_seeds.end(), picked), picked);
          market_max = std::max(market_max, best_t);
          t_hat += 1;
          cands.erase(std::find(cands.begin(), cands.end(), best_u));
          res.picks.push_back({{best_u, x}, best_t, win, best_si, mid});
        }
      }
      ts.prev_market_max = market_max;
    }
    all.insert(all.end(), ts.group_seeds.begin(), ts.group_seeds.end());
  }
  res.seeds = SeedGroup::of(w, all);
  return res;
}

namespace {

PairRelevance realized_average(const World& w, const PerceptionState& st) {
  std::vector<UserId> users(w.users());
  for (UserId u = 0; u < w.users(); ++u) users[u] = u;
  return mean_pins(w, st.pins, users);
}

bool substitutable_clash(const Markets& mk, const PairRelevance& avg) {
  for (const MarketGroup& g : mk.groups) {
    for (std::size_t a = 0; a < g.markets.size(); ++a)
      for (std::size_t b = 0; b < g.markets.size(); ++b) {
        if (a == b) continue;
        for (ItemId x : mk.markets[g.markets[a]].items)
          for (ItemId y : mk.markets[g.markets[b]].items)
            if (x != y && avg.rs(x, y) > 0.0) return true;
      }
  }
  return false;
}

}  // namespace

AdaptiveResult dysim_adaptive(const World& w, const DysimParams& p, const ObserveFn& observe) {
  AdaptiveResult res;
  int T = w.promotions;
  double remaining = w.budget;
  PerceptionState realized = PerceptionState::initial(w);
  std::vector<std::vector<Seed>> scheduled(static_cast<std::size_t>(T) + 2);
  std::vector<Seed> committed;
  std::uint64_t plan_master = hash_combine(p.master, 0x706c616e);
  std::uint64_t real_master = hash_combine(p.master, 0x7265616c);
  std::uint64_t eval_master = hash_combine(p.master, 0x61657661);

  for (int t = 1; t <= T; ++t) {
    AdaptiveRound round;
    round.t = t;
    std::vector<Seed> round_new;
    FrozenSpread spread(w, p.samples, hash_combine(plan_master, static_cast<std::uint64_t>(t)),
                        &realized);
    PairRelevance avg = realized_average(w, realized);

    // Pairs deferred by earlier rounds are already bought and scheduled;
    // renominating one would double-pay and clash with its pending seed.
    std::set<Nominee> pending;
    for (int tt = t; tt <= T; ++tt)
      for (const Seed& sd : scheduled[static_cast<std::size_t>(tt)])
        pending.insert({sd.u, sd.x});

    auto next_nominee = [&](const NomineeSet& noms, const std::set<Nominee>& banned,
                            double rem) {
      Nominee best{kNoId, 0};
      double best_ratio = 0.0;
      for (UserId u = 0; u < w.users(); ++u)
        for (ItemId x = 0; x < w.items(); ++x) {
          Nominee n{u, x};
          if (has_item(realized.adopted[u], x)) continue;
          if (pending.count(n) || banned.count(n) ||
              std::binary_search(noms.begin(), noms.end(), n))
            continue;
          double c = w.catalog.cost(u, x);
          if (!affordable(c, rem)) continue;
          double ratio = mcp(spread, noms, n, c);
          if (best.u == kNoId || ratio > best_ratio) {
            best = n;
            best_ratio = ratio;
          }
        }
      return best;
    };

    if (t < T) {
      NomineeSet noms;
      std::set<Nominee> banned;
      double tentative = 0.0;
      while (true) {
        Nominee cand = next_nominee(noms, banned, remaining - tentative);
        if (cand.u == kNoId) break;
        noms.insert(std::upper_bound(noms.begin(), noms.end(), cand), cand);
        tentative += w.catalog.cost(cand.u, cand.x);
        Markets mk = identify_and_prioritize(w, cluster_nominees(w, noms, avg, p.beta), avg, p);
        if (substitutable_clash(mk, avg)) {
          noms.erase(std::find(noms.begin(), noms.end(), cand));
          tentative -= w.catalog.cost(cand.u, cand.x);
          banned.insert(cand);
          ++round.rejected;
          break;  // proceed to timing with what we have
        }
      }
      if (!noms.empty()) {
        Markets mk = identify_and_prioritize(w, cluster_nominees(w, noms, avg, p.beta), avg, p);
        bool stop_round = false;
        for (const MarketGroup& g : mk.groups) {
          if (stop_round) break;
          for (std::size_t mid : g.markets) {
            if (stop_round) break;
            const TargetMarket& m = mk.markets[mid];
            std::vector<ItemId> items = m.items;
            std::vector<Nominee> unassigned = m.nominees;
            PairRelevance rel = mean_pins(w, realized.pins, m.users);
            ImpactEvaluator impact(rel, w.catalog.importances());
            std::sort(items.begin(), items.end(), [&](ItemId a, ItemId b) {
              double da = impact.dynamic_reachability(a, m.hop_diameter);
              double db = impact.dynamic_reachability(b, m.hop_diameter);
              if (da != db) return da > db;
              return a < b;
            });
            for (ItemId x : items) {
              if (stop_round) break;
              std::vector<UserId> cands;
              for (const Nominee& n : unassigned)
                if (n.x == x) cands.push_back(n.u);
              while (!cands.empty() && !stop_round) {
                // Timing search limited to this round and the next. The
                // conditional evaluations carry every committed seed not yet
                // realized (this round's picks and any deferred to t from the
                // previous round).
                Window win{t, std::min(t + 1, T)};
                std::vector<Seed> this_round;
                for (int tt = t; tt <= T; ++tt)
                  this_round.insert(this_round.end(),
                                    scheduled[static_cast<std::size_t>(tt)].begin(),
                                    scheduled[static_cast<std::size_t>(tt)].end());
                SeedGroup base_sg = SeedGroup::of(w, this_round);
                MarketEval base = market_eval(w, base_sg, m.mask, p.samples, eval_master,
                                              &realized, t);
                double best_si = 0.0;
                UserId best_u = kNoId;
                int best_t = win.lo;
                for (UserId u : cands) {
                  if (!affordable(w.catalog.cost(u, x), remaining)) continue;
                  for (int tt = win.lo; tt <= win.hi; ++tt) {
                    std::vector<Seed> seeds(this_round);
                    seeds.push_back({u, x, tt});
                    MarketEval plus = market_eval(w, SeedGroup::of(w, std::move(seeds)),
                                                  m.mask, p.samples, eval_master, &realized, t);
                    double weight = static_cast<double>(T - tt + 1) / T;
                    double si =
                        (plus.sigma - base.sigma) + weight * (plus.pi - base.pi);
                    if (best_u == kNoId || si > best_si) {
                      best_si = si;
                      best_u = u;
                      best_t = tt;
                    }
                  }
                }
                if (best_u == kNoId) break;  // nobody affordable
                Seed picked{best_u, x, best_t};
                remaining -= w.catalog.cost(best_u, x);
                committed.push_back(picked);
                round_new.push_back(picked);
                scheduled[static_cast<std::size_t>(best_t)].push_back(picked);
                cands.erase(std::find(cands.begin(), cands.end(), best_u));
                if (best_t > t) stop_round = true;  // assigned to t+1: end the round
              }
            }
          }
        }
      }
    } else {
      // Last round: spend what is left, all seeds at T.
      NomineeSet noms;
      std::set<Nominee> banned;
      while (true) {
        Nominee cand = next_nominee(noms, banned, remaining);
        if (cand.u == kNoId) break;
        noms.insert(std::upper_bound(noms.begin(), noms.end(), cand), cand);
        Seed picked{cand.u, cand.x, T};
        remaining -= w.catalog.cost(cand.u, cand.x);
        committed.push_back(picked);
        round_new.push_back(picked);
        scheduled[static_cast<std::size_t>(T)].push_back(picked);
      }
    }

    // Realize promotion t with everything scheduled for it.
    World wt = w;
    wt.promotions = t;
    SeedGroup now = SeedGroup::of(wt, scheduled[static_cast<std::size_t>(t)]);
    CampaignTrace round_trace;
    PerceptionState next;
    RunOptions opt;
    opt.trace = &round_trace;
    opt.final_state = &next;
    opt.start_state = &realized;
    opt.first_promotion = t;
    HashCoins coins(hash_combine(real_master, static_cast<std::uint64_t>(t)), 0);
    RunResult r = run_campaign(wt, now, coins, opt);
    realized = std::move(next);
    round.sigma = r.sigma;
    res.realized_sigma += r.sigma;
    res.trace.insert(res.trace.end(), round_trace.begin(), round_trace.end());
    round.seeds = SeedGroup::of(w, round_new);
    if (observe) observe(t, round.seeds, round_trace);
    res.rounds.push_back(std::move(round));
  }
  res.seeds = SeedGroup::of(w, committed);
  return res;
}

SeedGroup baseline_solve(const World& w, Baseline kind, const DysimParams& p) {
  std::vector<Seed> seeds;
  double remaining = w.budget;
  switch (kind) {
    case Baseline::kDegree: {
      ItemId item = 0;
      for (ItemId x = 1; x < w.items(); ++x)
        if (w.catalog.importance(x) > w.catalog.importance(item)) item = x;
      std::vector<UserId> users(w.users());
      for (UserId u = 0; u < w.users(); ++u) users[u] = u;
      std::sort(users.begin(), users.end(), [&](UserId a, UserId b) {
        if (w.sn.out_degree(a) != w.sn.out_degree(b))
          return w.sn.out_degree(a) > w.sn.out_degree(b);
        return a < b;
      });
      for (UserId u : users) {
        double c = w.catalog.cost(u, item);
        if (!affordable(c, remaining)) continue;
        seeds.push_back({u, item, 1});
        remaining -= c;
      }
      break;
    }
    case Baseline::kRandom: {
      std::mt19937_64 rng(splitmix64(p.master ^ 0x72616e646f6dull));
      std::vector<Nominee> pairs;
      for (UserId u = 0; u < w.users(); ++u)
        for (ItemId x = 0; x < w.items(); ++x) pairs.push_back({u, x});
      while (true) {
        std::vector<std::size_t> ok;
        for (std::size_t i = 0; i < pairs.size(); ++i)
          if (affordable(w.catalog.cost(pairs[i].u, pairs[i].x), remaining)) ok.push_back(i);
        if (ok.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, ok.size() - 1);
        std::size_t i = ok[pick(rng)];
        seeds.push_back({pairs[i].u, pairs[i].x, 1});
        remaining -= w.catalog.cost(pairs[i].u, pairs[i].x);
        pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(i));
      }
      break;
    }
    case Baseline::kGreedy1: {
      FrozenSpread spread(w, p.samples, hash_combine(p.master, 0x746d69));
      for (const Nominee& n : select_nominees(w, w.budget, spread))
        seeds.push_back({n.u, n.x, 1});
      break;
    }
  }
  return SeedGroup::of(w, seeds);
}

}  // namespace imdpp
