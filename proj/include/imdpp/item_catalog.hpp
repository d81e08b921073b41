#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "imdpp/common.hpp"

namespace imdpp {

class SocialNetwork;

// Items under promotion: importance weights plus per-(user,item) seeding
// costs. Costs either come from a file or from the degree/preference rule;
// every cost must end up strictly positive.
class ItemCatalog {
 public:
  ItemId add_item(const std::string& name, double importance);

  std::uint32_t item_count() const { return items_.size(); }
  const Interner& items() const { return items_; }
  double importance(ItemId x) const { return importance_[x]; }
  const std::vector<double>& importances() const { return importance_; }

  void set_cost(UserId u, ItemId x, double cost);
  // cost = alpha * max(1, outdeg(u)) * (1.5 - pref0(u,x)) for every pair
  // without an explicit cost. pref0 is the initial preference table.
  void fill_costs_by_rule(const SocialNetwork& sn,
                          const std::vector<std::vector<double>>& pref0, double alpha);
  bool has_cost(UserId u, ItemId x) const;
  double cost(UserId u, ItemId x) const;

  void validate(std::uint32_t user_count) const;

 private:
  Interner items_;
  std::vector<double> importance_;
  std::unordered_map<std::uint64_t, double> cost_;
  static std::uint64_t key(UserId u, ItemId x) {
    return (static_cast<std::uint64_t>(u) << 32) | x;
  }
};

}  // namespace imdpp
