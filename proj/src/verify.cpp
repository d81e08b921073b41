#include "imdpp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "imdpp/diffusion.hpp"
#include "imdpp/dysim.hpp"
#include "imdpp/impact.hpp"
#include "imdpp/solvers.hpp"
#include "imdpp/synthetic.hpp"
#include "imdpp/world.hpp"

namespace imdpp {
namespace {

const char* const kCheckNames[] = {
    "",
    "first-hop-impact-terms",
    "spread-non-monotone",
    "realization-submodularity",
    "violating-greedy-half-bound",
    "knapsack-twelfth-bound",
    "double-greedy-third-bound",
    "estimator-consistency",
    "market-pipeline-trace",
    "multi-promotion-dominance",
    "guarantee-floor",
};

// Stated runtime budgets per check, milliseconds.
const double kBudgetMs[] = {0,      1000,   5000,   120000, 120000, 300000,
                            120000, 120000, 10000,  600000, 300000};

bool affordable(double cost, double budget) {
  return cost <= budget * (1.0 + 1e-12) + 1e-12;
}

std::string seed_str(const Seed& s) {
  std::ostringstream ss;
  ss << "(" << s.u << "," << s.x << ",t" << s.t << ")";
  return ss.str();
}

double mean_of(const std::vector<double>& v) {
  Kahan k;
  for (double x : v) k.add(x);
  return v.empty() ? 0.0 : k.sum / static_cast<double>(v.size());
}

double stderr_of_mean(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  Kahan k;
  for (double x : v) k.add((x - m) * (x - m));
  double var = k.sum / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

// ---------------------------------------------------------------------------
// Random tiny worlds (frozen or drifting dynamics) for the property checks.

struct TinyKnobs {
  int users_lo = 2, users_hi = 5;
  int items_lo = 1, items_hi = 2;
  int t_lo = 1, t_hi = 2;
  double edge_p = 0.5;
  bool lattice = false;  // coarse probabilities including sure edges
  double strength_lo = 0.25, strength_hi = 0.85;
  double pref_zero_p = 0.2;
  double pref_lo = 0.15, pref_hi = 0.85;
  double rc_p = 0.4;
  double rc_lo = 0.2, rc_hi = 0.7;
  double imp_lo = 0.3, imp_hi = 1.3;
  double cost_lo = 0.6, cost_hi = 1.4;
  double budget = 1e9;
  DynamicsParams dyn{0.0, 0.0, 0.0};  // frozen unless a check opts in
};

World tiny_random_world(std::mt19937_64& rng, const TinyKnobs& k) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  int users = k.users_lo + static_cast<int>(rng() % (k.users_hi - k.users_lo + 1));
  int items = k.items_lo + static_cast<int>(rng() % (k.items_hi - k.items_lo + 1));
  int T = k.t_lo + static_cast<int>(rng() % (k.t_hi - k.t_lo + 1));

  World w;
  for (int u = 0; u < users; ++u) w.sn.add_user("u" + std::to_string(u));
  int edges = 0;
  for (int a = 0; a < users; ++a)
    for (int b = 0; b < users; ++b) {
      if (a == b || unit(rng) >= k.edge_p) continue;
      double s = k.lattice ? (unit(rng) < 0.5 ? 0.5 : 1.0) : uni(k.strength_lo, k.strength_hi);
      w.sn.add_edge(static_cast<UserId>(a), static_cast<UserId>(b), s);
      ++edges;
    }
  if (edges == 0 && users >= 2)
    w.sn.add_edge(UserId{0}, UserId{1}, k.lattice ? 1.0 : uni(k.strength_lo, k.strength_hi));

  for (int x = 0; x < items; ++x) {
    double imp = k.lattice ? (unit(rng) < 0.5 ? 0.5 : 1.0) : uni(k.imp_lo, k.imp_hi);
    w.catalog.add_item("i" + std::to_string(x), imp);
  }
  for (int u = 0; u < users; ++u)
    for (int x = 0; x < items; ++x)
      w.catalog.set_cost(static_cast<UserId>(u), static_cast<ItemId>(x),
                         uni(k.cost_lo, k.cost_hi));

  w.pref0.assign(users, std::vector<double>(items, 0.0));
  for (int u = 0; u < users; ++u)
    for (int x = 0; x < items; ++x) {
      if (k.lattice) {
        double r = unit(rng);
        w.pref0[u][x] = r < 0.25 ? 0.0 : (r < 0.65 ? 0.5 : 1.0);
      } else {
        w.pref0[u][x] = unit(rng) < k.pref_zero_p ? 0.0 : uni(k.pref_lo, k.pref_hi);
      }
    }

  std::vector<PairRelevance> pins(users, PairRelevance(static_cast<std::uint32_t>(items)));
  for (int u = 0; u < users; ++u)
    for (int x = 0; x < items; ++x)
      for (int y = x + 1; y < items; ++y) {
        double rc = 0.0;
        if (k.lattice) {
          double r = unit(rng);
          rc = r < 0.5 ? 0.0 : (r < 0.75 ? 0.5 : 1.0);
        } else if (unit(rng) < k.rc_p) {
          rc = uni(k.rc_lo, k.rc_hi);
        }
        if (rc > 0.0) pins[u].set_rc(static_cast<ItemId>(x), static_cast<ItemId>(y), rc);
      }
  w.pin_override = std::move(pins);

  w.budget = k.budget;
  w.promotions = T;
  w.dyn = k.dyn;
  w.model = DiffusionModel::kIC;
  w.finalize();
  return w;
}

std::vector<Seed> all_triples(const World& w) {
  std::vector<Seed> out;
  for (UserId u = 0; u < w.users(); ++u)
    for (ItemId x = 0; x < w.items(); ++x)
      for (int t = 1; t <= w.promotions; ++t) out.push_back({u, x, t});
  return out;
}

// ---------------------------------------------------------------------------
// Random nonnegative submodular oracles: weighted coverage, directed cut, or
// their sum; optional knapsack costs.

SetOracle random_submodular(std::mt19937_64& rng, std::size_t n, bool with_budget) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int kind = static_cast<int>(rng() % 3);  // 0 coverage, 1 cut, 2 blend
  std::size_t m = n + rng() % (n + 1);
  std::vector<double> wgt(m);
  for (auto& v : wgt) v = 0.1 + 0.9 * unit(rng);
  std::vector<std::uint64_t> covers(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (unit(rng) < 0.35) covers[i] |= std::uint64_t{1} << j;
    if (covers[i] == 0) covers[i] |= std::uint64_t{1} << (rng() % m);
  }
  std::vector<std::vector<double>> cut(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && unit(rng) < 0.45) cut[i][j] = 0.1 + 0.9 * unit(rng);
  double cov_scale = kind == 1 ? 0.0 : 1.0;
  double cut_scale = kind == 0 ? 0.0 : 1.0;

  auto eval = [n, m, wgt, covers, cut, cov_scale, cut_scale](
                  const std::vector<std::uint32_t>& s) {
    double v = 0.0;
    if (cov_scale > 0.0) {
      std::uint64_t covered = 0;
      for (std::uint32_t e : s) covered |= covers[e];
      for (std::size_t j = 0; j < m; ++j)
        if (covered & (std::uint64_t{1} << j)) v += cov_scale * wgt[j];
    }
    if (cut_scale > 0.0) {
      std::vector<char> in(n, 0);
      for (std::uint32_t e : s) in[e] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (!in[i]) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (!in[j]) v += cut_scale * cut[i][j];
      }
    }
    return v;
  };

  if (!with_budget) return SetOracle(n, eval);
  std::vector<double> cost(n);
  double total = 0.0, cmin = 1e18;
  for (auto& c : cost) {
    c = 0.5 + 1.5 * unit(rng);
    total += c;
    cmin = std::min(cmin, c);
  }
  double budget = std::max((0.25 + 0.35 * unit(rng)) * total, cmin);
  return SetOracle(n, eval, cost, budget);
}

// ---------------------------------------------------------------------------
// Check 1: first-hop impact terms on the three-item demo table plus
// traversal equivalence against an independent stack-based walker.

PairRelevance demo_relevance() {
  PairRelevance r(3);  // items: phone 0, tablet 1, earbuds 2
  r.set_rc(0, 1, 0.2);
  r.set_rs(0, 1, 0.4);
  r.set_rc(0, 2, 0.4);
  return r;
}

double reference_walk(const PairRelevance& rel, const std::vector<double>& imp, ItemId root,
                      int depth, bool proactive, double mutation) {
  struct Frame {
    ItemId node;
    int remaining;
    std::vector<ItemId> kids;
    std::size_t next = 0;
  };
  std::vector<char> claimed(rel.item_count(), 0);
  claimed[root] = 1;
  auto open_frame = [&](ItemId node, int remaining) {
    Frame fr{node, remaining, {}, 0};
    if (remaining > 0) {
      for (ItemId y = 0; y < rel.item_count(); ++y)
        if (!claimed[y] && rel.relevant(node, y)) fr.kids.push_back(y);
      for (ItemId y : fr.kids) claimed[y] = 1;
    }
    return fr;
  };
  double total = 0.0;
  std::vector<Frame> stack;
  stack.push_back(open_frame(root, depth));
  while (!stack.empty()) {
    Frame& fr = stack.back();
    if (fr.remaining <= 0 || fr.next == fr.kids.size()) {
      stack.pop_back();
      continue;
    }
    ItemId y = fr.kids[fr.next++];
    double rc = rel.rc(fr.node, y), rs = rel.rs(fr.node, y);
    double lc = 0.0, ls = 0.0;
    if (rc + rs > 0.0) {
      lc = rc / (rc + rs);
      ls = rs / (rc + rs);
    }
    double wy = proactive ? imp[y] : imp[root];
    total += lc * rc * wy - ls * rs * wy + mutation;
    stack.push_back(open_frame(y, fr.remaining - 1));
  }
  return total;
}

CheckResult check_first_hop(const VerifyOptions& opt) {
  CheckResult r{1, kCheckNames[1], true, "", 0.0};
  PairRelevance rel = demo_relevance();
  std::vector<double> imp = {1.0, 1.0, 0.5};
  ImpactEvaluator ev(rel, imp, opt.dr_mutation);

  double pi_tablet = 0.0, pi_earbuds = 0.0, ri_earbuds = 0.0;
  for (const auto& t : ev.proactive_terms(0)) {
    if (t.other == 1) pi_tablet = t.value;
    if (t.other == 2) pi_earbuds = t.value;
  }
  for (const auto& t : ev.reactive_terms(0))
    if (t.other == 2) ri_earbuds = t.value;

  std::ostringstream d;
  d << "pi_pair_terms=" << fmt6(pi_tablet) << "," << fmt6(pi_earbuds)
    << " ri_term=" << fmt6(ri_earbuds);
  if (std::abs(pi_tablet - (-0.2)) > 1e-12 || std::abs(pi_earbuds - 0.2) > 1e-12 ||
      std::abs(ri_earbuds - 0.4) > 1e-12) {
    r.pass = false;
    d << " expected=-0.2,0.2,0.4";
  }

  // Traversal equivalence on random item graphs, both walk directions, all
  // roots and depths 0..4.
  std::mt19937_64 rng(splitmix64(0xC1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int graphs = 0, mismatches = 0;
  double worst = 0.0;
  for (int g = 0; g < 50; ++g) {
    std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 5);
    PairRelevance rr(n);
    std::vector<double> im(n);
    for (auto& v : im) v = 0.2 + 1.3 * unit(rng);
    for (ItemId x = 0; x < n; ++x)
      for (ItemId y = x + 1; y < n; ++y) {
        if (unit(rng) < 0.45) rr.set_rc(x, y, 0.05 + 0.95 * unit(rng));
        if (unit(rng) < 0.35) rr.set_rs(x, y, 0.05 + 0.95 * unit(rng));
      }
    ImpactEvaluator e2(rr, im, opt.dr_mutation);
    for (ItemId x = 0; x < n; ++x)
      for (int depth = 0; depth <= 4; ++depth) {
        double a1 = e2.proactive(x, depth);
        double b1 = reference_walk(rr, im, x, depth, true, 0.0);
        double a2 = e2.reactive(x, depth);
        double b2 = reference_walk(rr, im, x, depth, false, 0.0);
        worst = std::max({worst, std::abs(a1 - b1), std::abs(a2 - b2)});
        if (std::abs(a1 - b1) > 1e-12 || std::abs(a2 - b2) > 1e-12) ++mismatches;
      }
    ++graphs;
  }
  d << " equiv_graphs=" << graphs << " mismatches=" << mismatches
    << " max_dev=" << fmt6(worst);
  if (mismatches > 0) r.pass = false;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 2: two-promotion relay where adding an early seed pre-delivers the
// relay's middle node and lowers the exact spread.

World relay_world(int promotions) {
  World w;
  UserId s1 = w.sn.add_user("s1");
  UserId s2 = w.sn.add_user("s2");
  UserId a = w.sn.add_user("a");
  UserId b = w.sn.add_user("b");
  UserId u = w.sn.add_user("u");
  // q solves q*(1-q) = 1 - 0.74/0.8352, which makes the first-promotion
  // adoption probability land on 0.74 exactly.
  double k = 1.0 - 0.74 / 0.8352;
  double q = (1.0 - std::sqrt(1.0 - 4.0 * k)) / 2.0;
  w.sn.add_edge(s1, a, 0.87);
  w.sn.add_edge(a, u, q);
  w.sn.add_edge(a, b, 1.0);
  w.sn.add_edge(s2, b, 1.0);
  w.sn.add_edge(b, u, 1.0);

  ItemId y = w.catalog.add_item("y", 0.0);
  ItemId x = w.catalog.add_item("x", 1.0);
  for (UserId v = 0; v < 5; ++v) {
    w.catalog.set_cost(v, y, 1.0);
    w.catalog.set_cost(v, x, 1.0);
  }
  w.pref0.assign(5, std::vector<double>{1.0, 0.0});
  w.pref0[u][x] = 1.0;
  std::vector<PairRelevance> pins(5, PairRelevance(2));
  pins[u].set_rc(y, x, 0.96);
  w.pin_override = std::move(pins);

  w.budget = 2.0;
  w.promotions = promotions;
  w.dyn = DynamicsParams{0.0, 0.0, 0.0};
  w.model = DiffusionModel::kIC;
  w.finalize();
  return w;
}

CheckResult check_non_monotone(const VerifyOptions&) {
  CheckResult r{2, kCheckNames[2], true, "", 0.0};
  World w = relay_world(2);
  UserId s1 = 0, s2 = 1;
  ItemId y = 0;

  double sig_small = sigma_exact_static(w, SeedGroup::of(w, {{s2, y, 2}}));
  double sig_super = sigma_exact_static(w, SeedGroup::of(w, {{s1, y, 1}, {s2, y, 2}}));

  World w1 = relay_world(1);
  double pr1 = sigma_exact_static(w1, SeedGroup::of(w1, {}));
  double pr1p = sigma_exact_static(w1, SeedGroup::of(w1, {{s1, y, 1}}));
  double pr2 = sig_small;  // no first-promotion seed, so unconditional
  double pr2p = (sig_super - pr1p) / (1.0 - pr1p);

  std::ostringstream d;
  d << "sigma_small=" << fmt6(sig_small) << " sigma_super=" << fmt6(sig_super)
    << " pr1=" << fmt6(pr1) << " pr1'=" << fmt6(pr1p) << " pr2=" << fmt6(pr2)
    << " pr2'=" << fmt6(pr2p);
  if (std::abs(sig_small - 0.96) > 1e-9 || std::abs(sig_super - 0.8648) > 1e-9 ||
      !(sig_super < sig_small) || std::abs(pr1) > 1e-9 ||
      std::abs(pr1p - 0.74) > 1e-9 || std::abs(pr2 - 0.96) > 1e-9 ||
      std::abs(pr2p - 0.48) > 1e-9) {
    r.pass = false;
    d << " expected sigma 0.96 > 0.8648 with pr 0, 0.74, 0.96, 0.48";
  }
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 3: exhaustive submodularity of the per-realization spread. Every
// realization of 30 random frozen-dynamics instances is replayed for every
// subset of a small seed ground set.

CheckResult check_realization_submodularity(const VerifyOptions&) {
  CheckResult r{3, kCheckNames[3], true, "", 0.0};
  std::mt19937_64 rng(splitmix64(0xC3));
  TinyKnobs k;
  k.lattice = true;
  k.edge_p = 0.45;

  int checked = 0;
  long long pairs_checked = 0;
  std::string witness;
  for (int inst = 0; inst < 30 && r.pass; ++inst) {
    World w;
    RealizationSpace space;
    int tries = 0;
    for (;; ++tries) {
      if (tries > 2000) throw SizeError("no tiny instance with at most 12 coins");
      w = tiny_random_world(rng, k);
      space = RealizationSpace::build(w);
      if (space.coin_count() >= 2 && space.coin_count() <= 12) break;
    }

    std::vector<Seed> ground = all_triples(w);
    if (ground.size() > 6) {
      std::shuffle(ground.begin(), ground.end(), rng);
      ground.resize(6);
      std::sort(ground.begin(), ground.end());
    }
    int g = static_cast<int>(ground.size());

    std::vector<SeedGroup> groups(std::size_t{1} << g);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << g); ++mask) {
      std::vector<Seed> sel;
      for (int e = 0; e < g; ++e)
        if (mask & (1u << e)) sel.push_back(ground[e]);
      groups[mask] = SeedGroup::of(w, sel);
    }

    std::vector<double> val(std::size_t{1} << g, 0.0);
    std::uint64_t realizations = std::uint64_t{1} << space.coin_count();
    for (std::uint64_t out = 0; out < realizations && r.pass; ++out) {
      for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << g); ++mask)
        val[mask] = sigma_on_realization(space, out, groups[mask]);
      for (std::uint32_t Y = 0; Y < (std::uint32_t{1} << g) && r.pass; ++Y) {
        for (int e = 0; e < g && r.pass; ++e) {
          if (Y & (1u << e)) continue;
          double dY = val[Y | (1u << e)] - val[Y];
          std::uint32_t X = Y;
          while (true) {
            double dX = val[X | (1u << e)] - val[X];
            ++pairs_checked;
            if (dY > dX + 1e-12) {
              r.pass = false;
              std::ostringstream ws;
              ws << " witness: instance=" << inst << " realization=" << out
                 << " e=" << seed_str(ground[e]) << " gain_small=" << fmt6(dX)
                 << " gain_large=" << fmt6(dY) << " X={";
              for (int i = 0; i < g; ++i)
                if (X & (1u << i)) ws << seed_str(ground[i]);
              ws << "} Y={";
              for (int i = 0; i < g; ++i)
                if (Y & (1u << i)) ws << seed_str(ground[i]);
              ws << "}";
              witness = ws.str();
              break;
            }
            if (X == 0) break;
            X = (X - 1) & Y;
          }
        }
      }
    }
    ++checked;
  }
  std::ostringstream d;
  d << "instances=" << checked << "/30 inequalities=" << pairs_checked;
  if (!r.pass) d << witness;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 4: budget-violating greedy against every feasible competitor set.

CheckResult check_greedy_half_bound(const VerifyOptions&) {
  CheckResult r{4, kCheckNames[4], true, "", 0.0};
  std::mt19937_64 rng(splitmix64(0xC4));
  double worst = 1e18;
  int violations = 0;
  for (int inst = 0; inst < 50; ++inst) {
    std::size_t n = 4 + rng() % 7;  // 4..10
    SetOracle f = random_submodular(rng, n, true);
    std::vector<std::uint32_t> universe(n);
    for (std::uint32_t e = 0; e < n; ++e) universe[e] = e;
    GreedyResult g = greedy_violating(f, universe);
    std::vector<std::uint32_t> s(g.elems);
    std::sort(s.begin(), s.end());
    double fs = f.value(s);

    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
      std::vector<std::uint32_t> c;
      for (std::uint32_t e = 0; e < n; ++e)
        if (mask & (1u << e)) c.push_back(e);
      if (!affordable(f.cost_of(c), f.budget())) continue;
      std::vector<std::uint32_t> uni(s);
      for (std::uint32_t e : c)
        if (std::find(uni.begin(), uni.end(), e) == uni.end()) uni.push_back(e);
      std::sort(uni.begin(), uni.end());
      double fu = f.value(uni);
      if (fu > 0.0) worst = std::min(worst, fs / fu);
      if (fs < 0.5 * fu - 1e-9) ++violations;
    }
  }
  std::ostringstream d;
  d << "instances=50 violations=" << violations << " worst_ratio=" << fmt6(worst);
  if (violations > 0) r.pass = false;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 5: composite knapsack maximizer against the exact optimum on tiny
// frozen-dynamics spread instances.

CheckResult check_knapsack_bound(const VerifyOptions&) {
  CheckResult r{5, kCheckNames[5], true, "", 0.0};
  std::mt19937_64 rng(splitmix64(0xC5));
  TinyKnobs k;
  k.users_lo = 2;
  k.users_hi = 3;
  k.edge_p = 0.6;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> ratios;
  int violations = 0;
  for (int inst = 0; inst < 200; ++inst) {
    for (;;) {
      World w = tiny_random_world(rng, k);
      // Budget around one to three seeds.
      double cmin = 1e18, csum = 0.0;
      for (UserId u = 0; u < w.users(); ++u)
        for (ItemId x = 0; x < w.items(); ++x) {
          cmin = std::min(cmin, w.catalog.cost(u, x));
          csum += w.catalog.cost(u, x);
        }
      double cmean = csum / (w.users() * w.items());
      w.budget = std::max(cmin, (1.0 + 2.5 * unit(rng)) * cmean);

      std::vector<Seed> ground = all_triples(w);
      std::vector<double> cost(ground.size());
      for (std::size_t e = 0; e < ground.size(); ++e)
        cost[e] = w.catalog.cost(ground[e].u, ground[e].x);
      auto eval = [&w, &ground](const std::vector<std::uint32_t>& s) {
        std::vector<Seed> sel;
        for (std::uint32_t e : s) sel.push_back(ground[e]);
        return sigma_exact_static(w, SeedGroup::of(w, sel));
      };
      SetOracle f(ground.size(), eval, cost, w.budget);
      try {
        SolveResult opt = brute_force_opt(f);
        SolveResult got = smk_solve(f);
        if (opt.value <= 1e-12) continue;  // nothing affordable adds spread
        double ratio = got.value / opt.value;
        ratios.push_back(ratio);
        if (got.value < opt.value / 12.0 - 1e-9) ++violations;
        break;
      } catch (const SizeError&) {
        continue;  // coin space too deep for exact evaluation; redraw
      }
    }
  }
  std::sort(ratios.begin(), ratios.end());
  double median = ratios[ratios.size() / 2];
  std::ostringstream d;
  d << "instances=" << ratios.size() << " violations=" << violations
    << " ratio_min=" << fmt6(ratios.front()) << " ratio_median=" << fmt6(median);
  if (violations > 0 || ratios.size() != 200) r.pass = false;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 6: deterministic double greedy against the unconstrained optimum.

CheckResult check_double_greedy(const VerifyOptions&) {
  CheckResult r{6, kCheckNames[6], true, "", 0.0};
  std::mt19937_64 rng(splitmix64(0xC6));
  double worst = 1e18;
  int violations = 0;
  for (int inst = 0; inst < 200; ++inst) {
    std::size_t n = 4 + rng() % 9;  // 4..12
    SetOracle f = random_submodular(rng, n, false);
    SolveResult opt = brute_force_opt(f);
    SolveResult dg = usm_double_greedy(f);
    double ratio = opt.value > 1e-12 ? dg.value / opt.value : 1.0;
    worst = std::min(worst, ratio);
    if (dg.value < opt.value / 3.0 - 1e-9) ++violations;
  }
  std::ostringstream d;
  d << "instances=200 violations=" << violations << " worst_ratio=" << fmt6(worst);
  if (violations > 0) r.pass = false;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 7: Monte Carlo estimator against the exact spread, plus the
// stderr scaling when the sample count quadruples.

CheckResult check_estimator(const VerifyOptions& opt) {
  CheckResult r{7, kCheckNames[7], true, "", 0.0};
  std::mt19937_64 rng(splitmix64(0xC7));
  TinyKnobs k;
  k.users_lo = 3;
  k.users_hi = 4;
  k.edge_p = 0.6;
  k.pref_zero_p = 0.0;

  int hits = 0;
  std::vector<double> ratios;
  for (int inst = 0; inst < 20; ++inst) {
    for (;;) {
      World w = tiny_random_world(rng, k);
      std::vector<Seed> ground = all_triples(w);
      std::shuffle(ground.begin(), ground.end(), rng);
      std::vector<Seed> sel(ground.begin(), ground.begin() + 1 + rng() % 2);
      SeedGroup s = SeedGroup::of(w, sel);
      double exact;
      try {
        exact = sigma_exact_static(w, s);
      } catch (const SizeError&) {
        continue;
      }
      Estimate e1 = sigma_estimate(w, s, 1000, hash_combine(0xC7E, 2 * inst), opt.threads);
      if (e1.stderr_ <= 1e-12) continue;  // degenerate draw, no noise to halve
      Estimate e2 = sigma_estimate(w, s, 4000, hash_combine(0xC7E, 2 * inst + 1), opt.threads);
      if (std::abs(e1.sigma - exact) <= 3.0 * e1.stderr_ + 1e-12) ++hits;
      ratios.push_back(e2.stderr_ / e1.stderr_);
      break;
    }
  }
  double mean_ratio = mean_of(ratios);
  auto mm = std::minmax_element(ratios.begin(), ratios.end());
  std::ostringstream d;
  d << "within_3se=" << hits << "/20 stderr_ratio_mean=" << fmt6(mean_ratio)
    << " ratio_min=" << fmt6(*mm.first) << " ratio_max=" << fmt6(*mm.second);
  if (hits < 19 || mean_ratio < 0.4 || mean_ratio > 0.6) r.pass = false;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 8: full market pipeline on a five-nominee fixture: clustering,
// grouping, antagonism ordering, durations, timing windows and pick order.

World market_world() {
  World w;
  UserId u1 = w.sn.add_user("u1");
  UserId u2 = w.sn.add_user("u2");
  UserId u4 = w.sn.add_user("u4");
  UserId u6 = w.sn.add_user("u6");
  UserId u7 = w.sn.add_user("u7");
  UserId u8 = w.sn.add_user("u8");
  w.sn.add_edge(u1, u2, 0.7);
  w.sn.add_edge(u2, u4, 0.7);
  w.sn.add_edge(u4, u6, 0.7);
  w.sn.add_edge(u6, u7, 0.7);
  // Dead-end listener with zero preferences: ties the last two markets into
  // one group without adding any randomness.
  w.sn.add_edge(u6, u8, 0.5);
  w.sn.add_edge(u7, u8, 0.5);

  ItemId phone = w.catalog.add_item("phone", 1.0);
  ItemId tablet = w.catalog.add_item("tablet", 1.0);
  ItemId earbuds = w.catalog.add_item("earbuds", 0.5);
  for (UserId v = 0; v < 6; ++v)
    for (ItemId x = 0; x < 3; ++x) w.catalog.set_cost(v, x, 1.0);

  PairRelevance pin(3);
  pin.set_rc(phone, tablet, 0.2);
  pin.set_rs(phone, tablet, 0.5);
  pin.set_rc(phone, earbuds, 0.4);
  pin.set_rc(tablet, earbuds, 0.2);
  w.pin_override = std::vector<PairRelevance>(6, pin);

  w.pref0 = {
      {0.4, 0.85, 0.1},   // u1
      {0.4, 0.85, 0.3},   // u2
      {0.4, 0.85, 0.1},   // u4
      {0.4, 0.85, 0.3},   // u6
      {0.4, 0.95, 0.8},   // u7
      {0.0, 0.0, 0.0},    // u8
  };

  w.budget = 5.0;
  w.promotions = 5;
  w.dyn = DynamicsParams{0.0, 0.0, 0.0};
  w.model = DiffusionModel::kIC;
  w.finalize();
  return w;
}

CheckResult check_market_pipeline(const VerifyOptions& opt) {
  CheckResult r{8, kCheckNames[8], true, "", 0.0};
  World w = market_world();
  DysimParams p;
  p.theta = 1.0;
  p.rho = 0.01;
  p.beta = 1.0;
  p.samples = 800;
  p.master = 0xC8;
  p.threads = opt.threads;

  NomineeSet noms = {{0, 1}, {1, 2}, {2, 0}, {3, 2}, {4, 1}};
  std::ostringstream d;
  auto fail = [&](const std::string& msg) {
    r.pass = false;
    d << " [" << msg << "]";
  };

  PairRelevance avg = average_relevance(w);
  std::vector<Cluster> clusters = cluster_nominees(w, noms, avg, p.beta);
  d << "clusters=" << clusters.size();
  std::vector<std::vector<Nominee>> want = {
      {{0, 1}}, {{1, 2}, {2, 0}, {3, 2}}, {{4, 1}}};
  if (clusters.size() != 3) {
    fail("expected 3 clusters");
  } else {
    for (int i = 0; i < 3; ++i)
      if (clusters[i].members != want[i]) fail("cluster " + std::to_string(i) + " members");
  }

  Markets mk = identify_and_prioritize(w, clusters, avg, p);
  d << " groups=" << mk.groups.size();
  if (mk.groups.size() != 1 || mk.groups[0].markets.size() != 3) {
    fail("expected one group of three markets");
  } else {
    d << " order=";
    for (std::size_t id : mk.groups[0].markets) d << id;
    d << " ae=";
    for (std::size_t id : mk.groups[0].markets) d << fmt6(mk.markets[id].antagonism) << ",";
    std::vector<std::size_t> order = mk.groups[0].markets;
    if (order != std::vector<std::size_t>{0, 2, 1}) fail("group order");
    if (std::abs(mk.markets[0].antagonism - 0.5) > 1e-12 ||
        std::abs(mk.markets[2].antagonism - 0.5) > 1e-12 ||
        std::abs(mk.markets[1].antagonism - 1.0) > 1e-12)
      fail("antagonism values");
    if (mk.markets[0].duration != 1 || mk.markets[1].duration != 3 ||
        mk.markets[2].duration != 1)
      fail("durations");
  }

  DysimResult res = dysim_schedule(w, p, noms);
  d << " picks=";
  for (const auto& pk : res.picks)
    d << "(u" << pk.n.u << ",i" << pk.n.x << ",t" << pk.t << ",[" << pk.window.lo << ","
      << pk.window.hi << "])";
  if (res.picks.size() != 5) {
    fail("expected 5 picks");
  } else {
    const auto& pk = res.picks;
    if (!(pk[0].n == Nominee{0, 1}) || pk[0].t != 1) fail("first pick");
    if (!(pk[1].n == Nominee{4, 1}) || pk[1].t != 2 || pk[1].window.lo != 1 ||
        pk[1].window.hi != 2)
      fail("second pick: later timing inside [1,2]");
    if (!(pk[2].n == Nominee{3, 2}) || pk[2].window.lo != 2 || pk[2].window.hi != 3)
      fail("third pick window [2,3]");
    if (!(pk[3].n == Nominee{1, 2}) || pk[3].window.lo != 3 || pk[3].window.hi != 4)
      fail("fourth pick window [3,4]");
    if (!(pk[4].n == Nominee{2, 0})) fail("last pick phone");
  }
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 9: multi-promotion scheduling against single-promotion greedy and
// degree seeding on drifting-perception synthetic worlds, paired evaluation.

CheckResult check_dominance(const VerifyOptions& opt) {
  CheckResult r{9, kCheckNames[9], true, "", 0.0};
  SyntheticSpec spec;
  spec.users = 16;
  spec.edge_density = 0.30;
  spec.items = 6;
  spec.features = 2;
  spec.brands = 1;
  spec.categories = 2;
  spec.complementary_metas = 3;
  spec.substitutable_metas = 0;
  spec.importance_lo = 0.8;
  spec.importance_hi = 1.2;
  spec.pref_lo = 0.10;
  spec.pref_hi = 0.20;
  spec.strength_lo = 0.55;
  spec.strength_hi = 0.85;
  spec.cost_alpha = 0.2;

  std::vector<double> d_greedy, d_degree, s_dysim;
  int complementary_ok = 0;
  for (int inst = 0; inst < 20; ++inst) {
    World w = generate_synthetic(spec, 9100 + inst);
    w.budget = 6.0;
    w.promotions = 5;
    w.dyn = DynamicsParams{0.5, 0.5, 0.3};
    w.model = DiffusionModel::kIC;

    PairRelevance avg = average_relevance(w);
    int rc_pairs = 0;
    for (ItemId x = 0; x < w.items(); ++x)
      for (ItemId y = x + 1; y < w.items(); ++y)
        if (avg.rc(x, y) > 0.0) ++rc_pairs;
    if (rc_pairs >= 1) ++complementary_ok;

    DysimParams p;
    p.samples = 60;
    p.master = hash_combine(0xC9, inst);
    p.threads = opt.threads;

    SeedGroup dy = dysim_solve(w, p).seeds;
    SeedGroup g1 = baseline_solve(w, Baseline::kGreedy1, p);
    SeedGroup dg = baseline_solve(w, Baseline::kDegree, p);

    std::uint64_t em = hash_combine(0xC9E, inst);
    double sd = sigma_estimate(w, dy, 300, em, opt.threads).sigma;
    double sg = sigma_estimate(w, g1, 300, em, opt.threads).sigma;
    double sdeg = sigma_estimate(w, dg, 300, em, opt.threads).sigma;
    s_dysim.push_back(sd);
    d_greedy.push_back(sd - sg);
    d_degree.push_back(sd - sdeg);
  }

  double m1 = mean_of(d_greedy), se1 = stderr_of_mean(d_greedy);
  double m2 = mean_of(d_degree), se2 = stderr_of_mean(d_degree);
  bool ok1 = se1 > 0.0 ? m1 >= 3.0 * se1 : m1 >= 0.0;
  bool ok2 = se2 > 0.0 ? m2 >= 3.0 * se2 : m2 >= 0.0;
  std::ostringstream d;
  d << "worlds=20 complementary_ok=" << complementary_ok
    << " mean_sigma=" << fmt6(mean_of(s_dysim)) << " vs_greedy1=" << fmt6(m1) << "+-"
    << fmt6(se1) << " vs_degree=" << fmt6(m2) << "+-" << fmt6(se2);
  if (!ok1 || !ok2 || complementary_ok != 20) r.pass = false;
  r.detail = d.str();
  return r;
}

// ---------------------------------------------------------------------------
// Check 10: guarantee floor with the probability-product factor on tiny
// all-positive instances under drifting dynamics (drift only raises the
// probabilities, so the initial minima stay valid).

CheckResult check_guarantee_floor(const VerifyOptions& opt) {
  CheckResult r{10, kCheckNames[10], true, "", 0.0};
  std::mt19937_64 rng(splitmix64(0xCA));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  double min_slack = 1e18;
  int failures = 0;
  for (int inst = 0; inst < 10; ++inst) {
    int users = 2 + static_cast<int>(rng() % 2);
    World w;
    for (int u = 0; u < users; ++u) w.sn.add_user("u" + std::to_string(u));
    for (int a = 0; a < users; ++a)
      for (int b = 0; b < users; ++b)
        if (a != b)
          w.sn.add_edge(static_cast<UserId>(a), static_cast<UserId>(b), uni(0.3, 0.7));
    w.catalog.add_item("i0", uni(0.5, 1.5));
    w.catalog.add_item("i1", uni(0.5, 1.5));
    for (UserId u = 0; u < w.sn.user_count(); ++u)
      for (ItemId x = 0; x < 2; ++x) w.catalog.set_cost(u, x, uni(0.9, 1.1));
    w.pref0.assign(users, std::vector<double>(2, 0.0));
    for (int u = 0; u < users; ++u)
      for (int x = 0; x < 2; ++x) w.pref0[u][x] = uni(0.25, 0.55);
    std::vector<PairRelevance> pins(users, PairRelevance(2));
    for (int u = 0; u < users; ++u) pins[u].set_rc(0, 1, uni(0.3, 0.7));
    w.pin_override = std::move(pins);
    w.budget = 2.1;
    w.promotions = 2;
    w.dyn = DynamicsParams{0.1, 0.3, 0.2};
    w.model = DiffusionModel::kIC;
    w.finalize();

    double minpref = 1.0, minact = 1.0, minext = 1.0;
    for (int u = 0; u < users; ++u)
      for (int x = 0; x < 2; ++x) minpref = std::min(minpref, w.pref0[u][x]);
    for (std::uint32_t e = 0; e < w.sn.edge_count(); ++e)
      minact = std::min(minact, w.sn.edge(e).strength);
    for (std::uint32_t e = 0; e < w.sn.edge_count(); ++e) {
      UserId tgt = w.sn.edge(e).dst;
      for (ItemId x = 0; x < 2; ++x)
        minext = std::min(minext, w.sn.edge(e).strength * w.pref0[tgt][x] *
                                      w.initial_pin(tgt).rc(x, 1 - x));
    }
    int c = static_cast<int>(w.sn.diameter());
    double gamma = std::min(std::pow(minpref * minact, c), std::pow(minext, c));

    std::uint64_t m = hash_combine(0xCAE, inst);
    std::vector<Seed> ground = all_triples(w);
    std::vector<double> cost(ground.size());
    for (std::size_t e = 0; e < ground.size(); ++e)
      cost[e] = w.catalog.cost(ground[e].u, ground[e].x);
    auto eval = [&w, &ground, m, &opt](const std::vector<std::uint32_t>& s) {
      std::vector<Seed> sel;
      for (std::uint32_t e : s) sel.push_back(ground[e]);
      return sigma_estimate(w, SeedGroup::of(w, sel), 400, m, opt.threads).sigma;
    };
    SetOracle f(ground.size(), eval, cost, w.budget);
    SolveResult opt_res = brute_force_opt(f);
    std::vector<Seed> opt_seeds;
    for (std::uint32_t e : opt_res.elems) opt_seeds.push_back(ground[e]);
    Estimate e_opt = sigma_estimate(w, SeedGroup::of(w, opt_seeds), 400, m, opt.threads);

    DysimParams p;
    p.samples = 80;
    p.master = hash_combine(0xCA5, inst);
    p.threads = opt.threads;
    SeedGroup dy = dysim_solve(w, p).seeds;
    Estimate e_dy = sigma_estimate(w, dy, 400, m, opt.threads);

    double eps = e_opt.sigma > 1e-12
                     ? 3.0 * (e_dy.stderr_ + e_opt.stderr_) / e_opt.sigma
                     : 0.0;
    double factor = 1.0 - 1.0 / std::sqrt(std::exp(1.0)) - eps;
    double floor = std::max(factor, 0.0) * gamma * e_opt.sigma;
    double slack = floor > 0.0 ? e_dy.sigma / floor : 1e18;
    min_slack = std::min(min_slack, slack);
    if (e_dy.sigma + 1e-12 < floor) ++failures;
  }
  std::ostringstream d;
  d << "instances=10 failures=" << failures << " min_margin=" << fmt6(min_slack);
  if (failures > 0) r.pass = false;
  r.detail = d.str();
  return r;
}

}  // namespace

CheckResult run_check(int id, const VerifyOptions& opt) {
  if (id < 1 || id > 10) throw ConfigError("unknown check id: " + std::to_string(id));
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    switch (id) {
      case 1: r = check_first_hop(opt); break;
      case 2: r = check_non_monotone(opt); break;
      case 3: r = check_realization_submodularity(opt); break;
      case 4: r = check_greedy_half_bound(opt); break;
      case 5: r = check_knapsack_bound(opt); break;
      case 6: r = check_double_greedy(opt); break;
      case 7: r = check_estimator(opt); break;
      case 8: r = check_market_pipeline(opt); break;
      case 9: r = check_dominance(opt); break;
      default: r = check_guarantee_floor(opt); break;
    }
  } catch (const std::exception& e) {
    r.id = id;
    r.name = kCheckNames[id];
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  auto t1 = std::chrono::steady_clock::now();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (r.elapsed_ms > kBudgetMs[id]) {
    r.pass = false;
    r.detail += " [over runtime budget " + fmt6(kBudgetMs[id]) + " ms]";
  }
  return r;
}

std::vector<CheckResult> verify_suite(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_check(id, opt));
  return out;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream ss;
  ss << (r.pass ? "[PASS]" : "[FAIL]") << " criterion-" << r.id << " " << r.name << ": "
     << r.detail << " (" << fmt6(r.elapsed_ms) << " ms)";
  return ss.str();
}

}  // namespace imdpp
