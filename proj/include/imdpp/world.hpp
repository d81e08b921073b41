#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imdpp/common.hpp"
#include "imdpp/item_catalog.hpp"
#include "imdpp/knowledge_graph.hpp"
#include "imdpp/social_network.hpp"

namespace imdpp {

// Symmetric per-item-pair relevance values of one user or one averaged
// population: complementary and substitutable channels.
class PairRelevance {
 public:
  PairRelevance() = default;
  explicit PairRelevance(std::uint32_t items) : n_(items), rc_(n_ * n_, 0.0), rs_(n_ * n_, 0.0) {}
  double rc(ItemId x, ItemId y) const { return rc_[x * n_ + y]; }
  double rs(ItemId x, ItemId y) const { return rs_[x * n_ + y]; }
  void set_rc(ItemId x, ItemId y, double v) { rc_[x * n_ + y] = rc_[y * n_ + x] = v; }
  void set_rs(ItemId x, ItemId y, double v) { rs_[x * n_ + y] = rs_[y * n_ + x] = v; }
  std::uint32_t item_count() const { return n_; }
  bool relevant(ItemId x, ItemId y) const { return rc(x, y) > 0.0 || rs(x, y) > 0.0; }

 private:
  std::uint32_t n_ = 0;
  std::vector<double> rc_, rs_;
};

// Base relevance tables s(x,y|m): per meta-graph, instance counts over the
// knowledge graph normalized by the maximum count over all item pairs.
struct MetaRelevance {
  std::vector<std::vector<double>> s;        // [meta][x*n+y], symmetric
  std::vector<std::vector<std::size_t>> cnt; // raw instance counts
  std::uint32_t items = 0;

  double value(std::size_t meta, ItemId x, ItemId y) const { return s[meta][x * items + y]; }
  std::size_t count(std::size_t meta, ItemId x, ItemId y) const { return cnt[meta][x * items + y]; }
};

MetaRelevance build_meta_relevance(const KnowledgeGraph& kg, const std::vector<MetaGraph>& metas,
                                   const ItemCatalog& catalog,
                                   const std::vector<NodeId>& item_nodes);

struct DynamicsParams {
  double eta = 0.5;     // meta weight learning rate
  double lambda = 0.1;  // preference learning rate
  double mu = 0.25;     // influence learning rate
  bool frozen() const { return eta == 0.0 && lambda == 0.0 && mu == 0.0; }
};

enum class DiffusionModel : std::uint8_t { kIC = 0, kLT = 1 };

// One problem instance: social graph, catalog, relationship knowledge, the
// perception initial state, and the campaign shape (budget b, promotions T).
struct World {
  SocialNetwork sn;
  ItemCatalog catalog;

  // Relationship knowledge. Either a knowledge graph plus meta-graphs (PINs
  // derived from meta weights), or direct initial PINs for hand-built
  // fixtures; `pin_override` wins when set.
  KnowledgeGraph kg;
  std::vector<MetaGraph> metas;
  std::vector<NodeId> item_nodes;  // catalog item -> kg node, kNoId if absent
  MetaRelevance relevance;
  std::optional<std::vector<PairRelevance>> pin_override;  // per user

  std::vector<std::vector<double>> pref0;  // initial P_pref [user][item]
  DynamicsParams dyn;
  DiffusionModel model = DiffusionModel::kIC;

  double budget = 0.0;
  int promotions = 1;  // T

  std::uint32_t users() const { return sn.user_count(); }
  std::uint32_t items() const { return catalog.item_count(); }

  // Builds relevance tables and checks cross-references; call after filling.
  void finalize();
  // Initial personal item network of user u (override, or meta-weighted base
  // relevance under uniform initial weights).
  PairRelevance initial_pin(UserId u) const;
  std::size_t meta_count_by_tag(Relationship tag) const;
};

}  // namespace imdpp
