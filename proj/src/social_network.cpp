#include "imdpp/social_network.hpp"

#include <algorithm>
#include <queue>

namespace imdpp {

std::uint32_t SocialNetwork::add_edge(const std::string& src, const std::string& dst,
                                      double strength) {
  UserId s = users_.intern(src);  // sequenced: src is interned before dst
  UserId d = users_.intern(dst);
  return add_edge(s, d, strength);
}

std::uint32_t SocialNetwork::add_edge(UserId src, UserId dst, double strength) {
  if (src == dst)
    throw InputError("social edge is a self loop: " + users_.name(src));
  if (strength < 0.0 || strength > 1.0)
    throw InputError("social edge strength outside [0,1]: " + users_.name(src) + " -> " +
                     users_.name(dst));
  finalized_ = false;
  edges_.push_back({src, dst, strength});
  return static_cast<std::uint32_t>(edges_.size() - 1);
}

void SocialNetwork::finalize() {
  out_.assign(user_count(), {});
  in_.assign(user_count(), {});
  for (std::uint32_t e = 0; e < edges_.size(); ++e) {
    out_[edges_[e].src].push_back(e);
    in_[edges_[e].dst].push_back(e);
  }
  for (auto& v : out_)
    std::sort(v.begin(), v.end(),
              [&](std::uint32_t a, std::uint32_t b) { return edges_[a].dst < edges_[b].dst; });
  for (auto& v : in_)
    std::sort(v.begin(), v.end(),
              [&](std::uint32_t a, std::uint32_t b) { return edges_[a].src < edges_[b].src; });
  finalized_ = true;
}

std::vector<std::uint32_t> SocialNetwork::undirected_hops(UserId u) const {
  std::vector<std::uint32_t> dist(user_count(), kNoHop);
  std::queue<UserId> q;
  dist[u] = 0;
  q.push(u);
  while (!q.empty()) {
    UserId v = q.front();
    q.pop();
    auto visit = [&](UserId w) {
      if (dist[w] == kNoHop) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    };
    for (auto e : out_[v]) visit(edges_[e].dst);
    for (auto e : in_[v]) visit(edges_[e].src);
  }
  return dist;
}

std::uint32_t SocialNetwork::diameter() const {
  if (user_count() < 2) return 0;
  std::uint32_t best = 0;
  bool split = false;
  for (UserId u = 0; u < user_count(); ++u) {
    auto d = undirected_hops(u);
    for (UserId v = 0; v < user_count(); ++v) {
      if (d[v] == kNoHop)
        split = true;
      else
        best = std::max(best, d[v]);
    }
  }
  if (split) best = std::max(best, user_count() - 1);
  return best;
}

}  // namespace imdpp
