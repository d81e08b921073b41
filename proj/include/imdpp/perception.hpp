#pragma once

#include <cstdint>
#include <vector>

#include "imdpp/world.hpp"

namespace imdpp {

// Adopted-items sets are uint64 masks; World::finalize enforces the 64-item
// cap (desk scale). Bit x set = item x adopted.
using ItemMask = std::uint64_t;

inline bool has_item(ItemMask m, ItemId x) { return (m >> x) & 1u; }
inline ItemMask with_item(ItemMask m, ItemId x) { return m | (ItemMask{1} << x); }
inline int mask_count(ItemMask m) { return __builtin_popcountll(m); }

// Mutable per-campaign perception state: everything §3-style dynamics touch.
struct PerceptionState {
  std::vector<ItemMask> adopted;               // per user
  std::vector<std::vector<double>> pref;       // per user per item; 0 once adopted
  std::vector<std::vector<double>> weights;    // per user per meta (normalized per tag)
  std::vector<PairRelevance> pins;             // per user
  std::vector<double> pact;                    // per social edge, current strength

  static PerceptionState initial(const World& w);
};

// One weight per meta-graph, 1/count within each relationship tag.
std::vector<double> uniform_meta_weights(const World& w);

// Meta weight update after new adoptions: w'(m) proportional to
// w(m) * (1 + eta * evidence(m)), renormalized within each relationship tag.
// evidence(m) = number of unordered adopted item pairs with at least one
// instance of m in the knowledge graph. No new adoption -> weights unchanged.
std::vector<double> update_meta_weights(const World& w, ItemMask adopted, bool any_new,
                                        const std::vector<double>& weights, double eta);

// Personal item network from meta weights: r^C(x,y) = sum over complementary
// metas of w_m * s(x,y|m), r^S likewise over substitutable metas; clamped to
// [0,1]. Linear in the weight vector.
PairRelevance derive_pin(const World& w, const std::vector<double>& weights);

// Preference drift for every not-yet-adopted item y:
// pref'(y) = clamp01(pref(y) + lambda * sum_{a in adopted} (r^C(a,y) - r^S(a,y))).
// Adopted items carry no preference (entries forced to 0).
void update_preferences(const PairRelevance& pin, ItemMask adopted, std::vector<double>& pref,
                        double lambda);

// Influence refresh from adoption similarity: clamp01(base * (1 + mu * J))
// where J is the Jaccard similarity of the two adopted sets (0 when both
// empty).
double updated_influence(double base, ItemMask a, ItemMask b, double mu);
double jaccard(ItemMask a, ItemMask b);

// Extra-adoption probability of y when u' successfully promotes x to u.
double ext_probability(double pact, double pref_x, double rc_xy);

}  // namespace imdpp
