#include "imdpp/impact.hpp"

namespace imdpp {

Likelihoods likelihoods(const PairRelevance& rel, ItemId x, ItemId y) {
  double rc = rel.rc(x, y), rs = rel.rs(x, y);
  double sum = rc + rs;
  if (sum <= 0.0) return {};
  return {rc / sum, rs / sum};
}

std::vector<ImpactEvaluator::HopTerm> ImpactEvaluator::proactive_terms(ItemId x) const {
  std::vector<HopTerm> out;
  for (ItemId y = 0; y < rel_.item_count(); ++y) {
    if (y == x || !rel_.relevant(x, y)) continue;
    auto l = likelihoods(rel_, x, y);
    out.push_back({y, l.lc * rel_.rc(x, y) * importance_[y] -
                          l.ls * rel_.rs(x, y) * importance_[y] + mutation_});
  }
  return out;
}

std::vector<ImpactEvaluator::HopTerm> ImpactEvaluator::reactive_terms(ItemId x) const {
  std::vector<HopTerm> out;
  for (ItemId y = 0; y < rel_.item_count(); ++y) {
    if (y == x || !rel_.relevant(x, y)) continue;
    auto l = likelihoods(rel_, x, y);
    out.push_back({y, l.lc * rel_.rc(x, y) * importance_[x] -
                          l.ls * rel_.rs(x, y) * importance_[x] + mutation_});
  }
  return out;
}

double ImpactEvaluator::walk(ItemId n, int depth, std::vector<bool>& visited,
                             double root_importance, bool proactive) const {
  if (depth <= 0) return 0.0;
  std::vector<ItemId> children;
  for (ItemId y = 0; y < rel_.item_count(); ++y) {
    if (!visited[y] && rel_.relevant(n, y)) children.push_back(y);
  }
  for (ItemId y : children) visited[y] = true;
  double total = 0.0;
  for (ItemId y : children) {
    auto l = likelihoods(rel_, n, y);
    double w = proactive ? importance_[y] : root_importance;
    total += l.lc * rel_.rc(n, y) * w - l.ls * rel_.rs(n, y) * w + mutation_;
    total += walk(y, depth - 1, visited, root_importance, proactive);
  }
  return total;
}

double ImpactEvaluator::proactive(ItemId x, int depth) const {
  std::vector<bool> visited(rel_.item_count(), false);
  visited[x] = true;
  return walk(x, depth, visited, importance_[x], true);
}

double ImpactEvaluator::reactive(ItemId x, int depth) const {
  std::vector<bool> visited(rel_.item_count(), false);
  visited[x] = true;
  return walk(x, depth, visited, importance_[x], false);
}

double ImpactEvaluator::dynamic_reachability(ItemId x, int depth) const {
  return proactive(x, depth) + reactive(x, depth);
}

}  // namespace imdpp
