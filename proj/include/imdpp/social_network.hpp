#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imdpp/common.hpp"

namespace imdpp {

// Directed social graph. Edge strength is the base influence probability
// P_act(src,dst) before any perception dynamics.
class SocialNetwork {
 public:
  struct Edge {
    UserId src;
    UserId dst;
    double strength;
  };

  UserId add_user(const std::string& name) { return users_.intern(name); }
  std::uint32_t add_edge(const std::string& src, const std::string& dst, double strength);
  std::uint32_t add_edge(UserId src, UserId dst, double strength);

  // Call once after the last mutation; builds adjacency and freezes the graph.
  void finalize();

  std::uint32_t user_count() const { return users_.size(); }
  std::uint32_t edge_count() const { return static_cast<std::uint32_t>(edges_.size()); }
  const Edge& edge(std::uint32_t e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Interner& users() const { return users_; }

  // Edge ids of out-/in-edges, sorted by the opposite endpoint's user id.
  const std::vector<std::uint32_t>& out_edges(UserId u) const { return out_[u]; }
  const std::vector<std::uint32_t>& in_edges(UserId u) const { return in_[u]; }
  std::uint32_t out_degree(UserId u) const { return static_cast<std::uint32_t>(out_[u].size()); }

  // Undirected hop distances from u; kNoHop for unreachable users.
  static constexpr std::uint32_t kNoHop = 0xffffffffu;
  std::vector<std::uint32_t> undirected_hops(UserId u) const;
  // Largest finite undirected hop distance; pairs in different components
  // count as user_count()-1. Zero for graphs with fewer than two users.
  std::uint32_t diameter() const;

 private:
  Interner users_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> out_, in_;
  bool finalized_ = false;
};

}  // namespace imdpp
