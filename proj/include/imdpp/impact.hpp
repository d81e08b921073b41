#pragma once

#include <vector>

#include "imdpp/world.hpp"

namespace imdpp {

// Complementary/substitutable likelihoods of an item pair: the two relevance
// channels normalized to sum to one; (0,0) when the pair has no relevance.
struct Likelihoods {
  double lc = 0.0;
  double ls = 0.0;
};
Likelihoods likelihoods(const PairRelevance& rel, ItemId x, ItemId y);

// Impact of promoting an item through a relevance graph averaged over a
// market. Proactive impact walks pairs the promoted item drives; reactive
// impact mirrors the walk with the root's importance held fixed. Traversal is
// depth-capped, expands neighbors in item-id order, and blocks revisits with
// one visited set per root (each subtree claims its nodes; later siblings
// skip claimed nodes).
class ImpactEvaluator {
 public:
  ImpactEvaluator(const PairRelevance& rel, const std::vector<double>& importance,
                  double mutation = 0.0)
      : rel_(rel), importance_(importance), mutation_(mutation) {}

  struct HopTerm {
    ItemId other;
    double value;
  };

  // First-hop pair terms of the proactive walk from x:
  // L^C(x,y) r^C(x,y) w_y - L^S(x,y) r^S(x,y) w_y.
  std::vector<HopTerm> proactive_terms(ItemId x) const;
  // First-hop pair terms of the reactive walk into x (importance w_x).
  std::vector<HopTerm> reactive_terms(ItemId x) const;

  double proactive(ItemId x, int depth) const;
  double reactive(ItemId x, int depth) const;
  // DR = proactive + reactive at the market's hop diameter.
  double dynamic_reachability(ItemId x, int depth) const;

 private:
  double walk(ItemId n, int depth, std::vector<bool>& visited, double root_importance,
              bool proactive) const;
  const PairRelevance& rel_;
  const std::vector<double>& importance_;
  double mutation_;
};

}  // namespace imdpp
