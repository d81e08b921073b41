#include "imdpp/item_catalog.hpp"

#include <algorithm>

#include "imdpp/social_network.hpp"

namespace imdpp {

ItemId ItemCatalog::add_item(const std::string& name, double importance) {
  if (items_.contains(name)) throw InputError("item declared twice: " + name);
  if (importance < 0.0) throw InputError("item importance must be non-negative: " + name);
  ItemId id = items_.intern(name);
  importance_.push_back(importance);
  return id;
}

void ItemCatalog::set_cost(UserId u, ItemId x, double cost) {
  if (cost <= 0.0)
    throw InputError("seeding cost must be strictly positive: user " + std::to_string(u) +
                     ", item " + items_.name(x));
  cost_[key(u, x)] = cost;
}

void ItemCatalog::fill_costs_by_rule(const SocialNetwork& sn,
                                     const std::vector<std::vector<double>>& pref0,
                                     double alpha) {
  if (alpha <= 0.0) throw InputError("cost rule alpha must be strictly positive");
  for (UserId u = 0; u < sn.user_count(); ++u) {
    double deg = std::max<std::uint32_t>(1, sn.out_degree(u));
    for (ItemId x = 0; x < item_count(); ++x) {
      if (has_cost(u, x)) continue;
      double pref = pref0.empty() ? 0.0 : pref0[u][x];
      cost_[key(u, x)] = alpha * deg * (1.5 - pref);
    }
  }
}

bool ItemCatalog::has_cost(UserId u, ItemId x) const { return cost_.count(key(u, x)) != 0; }

double ItemCatalog::cost(UserId u, ItemId x) const {
  auto it = cost_.find(key(u, x));
  if (it == cost_.end())
    throw InputError("no seeding cost defined: user " + std::to_string(u) + ", item " +
                     items_.name(x));
  return it->second;
}

void ItemCatalog::validate(std::uint32_t user_count) const {
  for (const auto& [k, c] : cost_) {
    UserId u = static_cast<UserId>(k >> 32);
    ItemId x = static_cast<ItemId>(k & 0xffffffffu);
    if (u >= user_count || x >= item_count())
      throw InputError("cost table references unknown user or item");
    if (c <= 0.0)
      throw InputError("seeding cost must be strictly positive: user " + std::to_string(u) +
                       ", item " + items_.name(x));
  }
}

}  // namespace imdpp
