#include "imdpp/perception.hpp"

namespace imdpp {

PerceptionState PerceptionState::initial(const World& w) {
  PerceptionState st;
  st.adopted.assign(w.users(), 0);
  st.pref = w.pref0;
  st.weights.assign(w.users(), uniform_meta_weights(w));
  st.pins.reserve(w.users());
  for (UserId u = 0; u < w.users(); ++u) st.pins.push_back(w.initial_pin(u));
  st.pact.reserve(w.sn.edge_count());
  for (const auto& e : w.sn.edges()) st.pact.push_back(e.strength);
  return st;
}

std::vector<double> uniform_meta_weights(const World& w) {
  std::vector<double> weights(w.metas.size(), 0.0);
  for (auto tag : {Relationship::kComplementary, Relationship::kSubstitutable}) {
    std::size_t n = w.meta_count_by_tag(tag);
    if (n == 0) continue;
    for (std::size_t m = 0; m < w.metas.size(); ++m)
      if (w.metas[m].relationship == tag) weights[m] = 1.0 / static_cast<double>(n);
  }
  return weights;
}

std::vector<double> update_meta_weights(const World& w, ItemMask adopted, bool any_new,
                                        const std::vector<double>& weights, double eta) {
  if (!any_new || eta == 0.0 || w.metas.empty()) return weights;
  std::vector<double> out(weights.size());
  for (std::size_t m = 0; m < w.metas.size(); ++m) {
    int evidence = 0;
    for (ItemId x = 0; x < w.items(); ++x) {
      if (!has_item(adopted, x)) continue;
      for (ItemId y = x + 1; y < w.items(); ++y) {
        if (!has_item(adopted, y)) continue;
        if (w.relevance.count(m, x, y) > 0) ++evidence;
      }
    }
    out[m] = weights[m] * (1.0 + eta * static_cast<double>(evidence));
  }
  // Renormalize within each relationship tag.
  for (auto tag : {Relationship::kComplementary, Relationship::kSubstitutable}) {
    double sum = 0.0;
    for (std::size_t m = 0; m < out.size(); ++m)
      if (w.metas[m].relationship == tag) sum += out[m];
    if (sum <= 0.0) continue;
    for (std::size_t m = 0; m < out.size(); ++m)
      if (w.metas[m].relationship == tag) out[m] /= sum;
  }
  return out;
}

PairRelevance derive_pin(const World& w, const std::vector<double>& weights) {
  PairRelevance pin(w.items());
  for (ItemId x = 0; x < w.items(); ++x) {
    for (ItemId y = x + 1; y < w.items(); ++y) {
      double rc = 0.0, rs = 0.0;
      for (std::size_t m = 0; m < w.metas.size(); ++m) {
        double v = weights[m] * w.relevance.value(m, x, y);
        if (w.metas[m].relationship == Relationship::kComplementary)
          rc += v;
        else
          rs += v;
      }
      pin.set_rc(x, y, clamp01(rc));
      pin.set_rs(x, y, clamp01(rs));
    }
  }
  return pin;
}

void update_preferences(const PairRelevance& pin, ItemMask adopted, std::vector<double>& pref,
                        double lambda) {
  if (adopted == 0 || lambda == 0.0) {
    for (ItemId y = 0; y < pref.size(); ++y)
      if (has_item(adopted, y)) pref[y] = 0.0;
    return;
  }
  std::uint32_t n = static_cast<std::uint32_t>(pref.size());
  for (ItemId y = 0; y < n; ++y) {
    if (has_item(adopted, y)) {
      pref[y] = 0.0;
      continue;
    }
    double drift = 0.0;
    for (ItemId a = 0; a < n; ++a) {
      if (!has_item(adopted, a) || a == y) continue;
      drift += pin.rc(a, y) - pin.rs(a, y);
    }
    pref[y] = clamp01(pref[y] + lambda * drift);
  }
}

double jaccard(ItemMask a, ItemMask b) {
  int uni = mask_count(a | b);
  if (uni == 0) return 0.0;
  return static_cast<double>(mask_count(a & b)) / static_cast<double>(uni);
}

double updated_influence(double base, ItemMask a, ItemMask b, double mu) {
  return clamp01(base * (1.0 + mu * jaccard(a, b)));
}

double ext_probability(double pact, double pref_x, double rc_xy) {
  return clamp01(pact * pref_x * rc_xy);
}

}  // namespace imdpp
