#include "imdpp/world.hpp"

#include <algorithm>

#include "imdpp/perception.hpp"

namespace imdpp {

MetaRelevance build_meta_relevance(const KnowledgeGraph& kg, const std::vector<MetaGraph>& metas,
                                   const ItemCatalog& catalog,
                                   const std::vector<NodeId>& item_nodes) {
  MetaRelevance rel;
  rel.items = catalog.item_count();
  std::uint32_t n = rel.items;
  for (const auto& m : metas) {
    std::vector<std::size_t> cnt(n * n, 0);
    std::size_t max_cnt = 0;
    for (ItemId x = 0; x < n; ++x) {
      for (ItemId y = x + 1; y < n; ++y) {
        if (item_nodes[x] == kNoId || item_nodes[y] == kNoId) continue;
        std::size_t c = count_meta_instances(kg, m, item_nodes[x], item_nodes[y]);
        cnt[x * n + y] = cnt[y * n + x] = c;
        max_cnt = std::max(max_cnt, c);
      }
    }
    std::vector<double> s(n * n, 0.0);
    if (max_cnt > 0) {
      for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = static_cast<double>(cnt[i]) / static_cast<double>(max_cnt);
    }
    rel.cnt.push_back(std::move(cnt));
    rel.s.push_back(std::move(s));
  }
  return rel;
}

void World::finalize() {
  sn.finalize();
  kg.finalize();
  if (items() > 64) throw SizeError("catalog exceeds the 64-item cap");
  if (promotions < 1) throw InputError("campaign needs at least one promotion");
  catalog.validate(users());

  if (pref0.empty()) pref0.assign(users(), std::vector<double>(items(), 0.0));
  if (pref0.size() != users()) throw InputError("initial preference table has wrong user count");
  for (auto& row : pref0) {
    if (row.size() != items()) throw InputError("initial preference table has wrong item count");
    for (double p : row)
      if (p < 0.0 || p > 1.0) throw InputError("initial preference outside [0,1]");
  }

  if (item_nodes.empty()) {
    item_nodes.assign(items(), kNoId);
    for (ItemId x = 0; x < items(); ++x) {
      NodeId n = kg.nodes().find(catalog.items().name(x));
      item_nodes[x] = n;
    }
  }
  if (!metas.empty()) {
    std::uint32_t item_type = kg.node_types().find("ITEM");
    for (ItemId x = 0; x < items(); ++x) {
      if (item_nodes[x] == kNoId)
        throw InputError("item missing from knowledge graph: " + catalog.items().name(x));
      if (kg.node_type(item_nodes[x]) != item_type)
        throw InputError("catalog entry is not an ITEM node: " + catalog.items().name(x));
    }
    for (const auto& m : metas) m.validate(kg);
    relevance = build_meta_relevance(kg, metas, catalog, item_nodes);
  }

  if (pin_override && pin_override->size() != users())
    throw InputError("pin override has wrong user count");
}

std::size_t World::meta_count_by_tag(Relationship tag) const {
  std::size_t c = 0;
  for (const auto& m : metas)
    if (m.relationship == tag) ++c;
  return c;
}

PairRelevance World::initial_pin(UserId u) const {
  if (pin_override) return (*pin_override)[u];
  if (metas.empty()) return PairRelevance(items());
  return derive_pin(*this, uniform_meta_weights(*this));
}

}  // namespace imdpp
