#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "imdpp/world.hpp"

namespace testsupport {

// Directed chain u0 -> u1 -> ... with one item; strengths and preferences are
// uniform so expected spreads have closed forms the tests compute by hand.
inline imdpp::World line_world(int users, double strength, double pref, double importance = 1.0,
                               int promotions = 1) {
  imdpp::World w;
  for (int u = 0; u < users; ++u) w.sn.add_user("u" + std::to_string(u));
  for (int u = 0; u + 1 < users; ++u)
    w.sn.add_edge(static_cast<imdpp::UserId>(u), static_cast<imdpp::UserId>(u + 1), strength);
  w.catalog.add_item("x", importance);
  for (int u = 0; u < users; ++u) w.catalog.set_cost(static_cast<imdpp::UserId>(u), 0, 1.0);
  w.pref0.assign(users, std::vector<double>(1, pref));
  w.pref0[0][0] = 0.0;  // the usual seed node carries no organic preference
  w.budget = 1e9;
  w.promotions = promotions;
  w.dyn = imdpp::DynamicsParams{0.0, 0.0, 0.0};
  w.finalize();
  return w;
}

// Independent meta-graph instance counter: enumerates every injective,
// type- and direction-respecting role assignment whose endpoint roles bind
// {x, y}, deduplicated by the bound node set.
inline std::size_t brute_meta_instances(const imdpp::KnowledgeGraph& kg, const imdpp::MetaGraph& m,
                                        imdpp::NodeId x, imdpp::NodeId y) {
  std::size_t roles = m.role_names.size();
  std::vector<imdpp::NodeId> assign(roles, imdpp::kNoId);
  std::set<std::vector<imdpp::NodeId>> found;

  std::function<void(std::size_t)> place = [&](std::size_t r) {
    if (r == roles) {
      for (const auto& e : m.edges) {
        std::uint16_t et = kg.edge_types().find(e.edge_type);
        if (et == static_cast<std::uint16_t>(imdpp::kNoId) ||
            !kg.has_edge(assign[e.from], assign[e.to], et))
          return;
      }
      imdpp::NodeId a = assign[m.endpoint_a], b = assign[m.endpoint_b];
      if (!((a == x && b == y) || (a == y && b == x))) return;
      std::vector<imdpp::NodeId> key(assign);
      std::sort(key.begin(), key.end());
      found.insert(key);
      return;
    }
    std::uint16_t want = kg.node_types().find(m.role_types[r]);
    for (imdpp::NodeId n = 0; n < kg.node_count(); ++n) {
      if (kg.node_type(n) != want) continue;
      if (std::find(assign.begin(), assign.begin() + r, n) != assign.begin() + r) continue;
      assign[r] = n;
      place(r + 1);
      assign[r] = imdpp::kNoId;
    }
  };
  place(0);
  return found.size();
}

// Exhaustive knapsack argmax over all subsets; ties resolved to the
// lexicographically smallest sorted element vector. Reference for the solver
// implementations (which must never look at infeasible sets).
struct BruteBest {
  std::vector<std::uint32_t> elems;
  double value = 0.0;
};

inline BruteBest exhaustive_best(std::size_t n,
                                 const std::function<double(const std::vector<std::uint32_t>&)>& f,
                                 const std::vector<double>& cost, double budget) {
  BruteBest best;
  best.value = f({});
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint32_t> elems;
    double c = 0.0;
    for (std::uint32_t e = 0; e < n; ++e)
      if ((mask >> e) & 1) {
        elems.push_back(e);
        c += cost.empty() ? 0.0 : cost[e];
      }
    if (c > budget * (1.0 + 1e-12) + 1e-12) continue;
    double v = f(elems);
    if (v > best.value || (v == best.value && elems < best.elems)) best = {elems, v};
  }
  return best;
}

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

}  // namespace testsupport
