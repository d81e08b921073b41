#include "imdpp/synthetic.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace imdpp {

namespace {

void require(bool ok, const std::string& field) {
  if (!ok) throw ConfigError("bad synthetic field: " + field);
}

void check_range(double lo, double hi, double min, double max, const std::string& field) {
  require(lo >= min && hi <= max && lo <= hi, field);
}

MetaGraph shared_feature_meta() {
  MetaGraph m;
  m.name = "shared-feature";
  m.relationship = Relationship::kComplementary;
  m.role_names = {"A", "F", "B"};
  m.role_types = {"ITEM", "FEATURE", "ITEM"};
  m.edges = {{0, 1, "SUPPORT"}, {2, 1, "SUPPORT"}};
  m.endpoint_a = 0;
  m.endpoint_b = 2;
  return m;
}

MetaGraph shared_brand_meta() {
  MetaGraph m;
  m.name = "shared-brand";
  m.relationship = Relationship::kComplementary;
  m.role_names = {"A", "Br", "B"};
  m.role_types = {"ITEM", "BRAND", "ITEM"};
  m.edges = {{0, 1, "BELONG"}, {2, 1, "BELONG"}};
  m.endpoint_a = 0;
  m.endpoint_b = 2;
  return m;
}

MetaGraph feature_bridge_meta() {
  MetaGraph m;
  m.name = "feature-bridge";
  m.relationship = Relationship::kComplementary;
  m.role_names = {"A", "F1", "C", "F2", "B"};
  m.role_types = {"ITEM", "FEATURE", "ITEM", "FEATURE", "ITEM"};
  m.edges = {{0, 1, "SUPPORT"}, {2, 1, "SUPPORT"}, {2, 3, "SUPPORT"}, {4, 3, "SUPPORT"}};
  m.endpoint_a = 0;
  m.endpoint_b = 4;
  return m;
}

MetaGraph shared_category_meta() {
  MetaGraph m;
  m.name = "shared-category";
  m.relationship = Relationship::kSubstitutable;
  m.role_names = {"A", "C", "B"};
  m.role_types = {"ITEM", "CATEGORY", "ITEM"};
  m.edges = {{0, 1, "IN_CATEGORY"}, {2, 1, "IN_CATEGORY"}};
  m.endpoint_a = 0;
  m.endpoint_b = 2;
  return m;
}

MetaGraph brand_rivals_meta() {
  MetaGraph m;
  m.name = "brand-rivals";
  m.relationship = Relationship::kSubstitutable;
  m.role_names = {"A", "C", "B", "BrA", "BrB"};
  m.role_types = {"ITEM", "CATEGORY", "ITEM", "BRAND", "BRAND"};
  m.edges = {{0, 1, "IN_CATEGORY"}, {2, 1, "IN_CATEGORY"}, {0, 3, "BELONG"}, {2, 4, "BELONG"}};
  m.endpoint_a = 0;
  m.endpoint_b = 2;
  return m;
}

}  // namespace

void SyntheticSpec::validate() const {
  require(users >= 1, "users");
  require(items >= 1, "items");
  require(items <= 64, "items");
  require(features >= 1, "features");
  require(brands >= 1, "brands");
  require(categories >= 1, "categories");
  require(edge_density >= 0.0 && edge_density <= 1.0, "edge_density");
  require(complementary_metas <= 3, "complementary_metas");
  require(substitutable_metas <= 2, "substitutable_metas");
  require(importance_lo > 0.0 && importance_lo <= importance_hi, "importance");
  check_range(pref_lo, pref_hi, 0.0, 1.0, "pref0");
  check_range(strength_lo, strength_hi, 0.0, 1.0, "strength");
  require(cost_alpha > 0.0, "cost_alpha");
}

SyntheticSpec parse_synthetic_spec(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("synthetic spec must be a JSON object");

  SyntheticSpec s;
  auto uint_of = [](const nlohmann::json& v, const std::string& key) -> std::uint32_t {
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError("synthetic key is not an integer: " + key);
    auto n = v.get<std::int64_t>();
    if (n < 0) throw ConfigError("synthetic key is negative: " + key);
    return static_cast<std::uint32_t>(n);
  };
  auto num_of = [](const nlohmann::json& v, const std::string& key) -> double {
    if (!v.is_number()) throw ConfigError("synthetic key is not a number: " + key);
    return v.get<double>();
  };
  auto range_of = [&](const nlohmann::json& v, const std::string& key, double& lo, double& hi) {
    if (!v.is_array() || v.size() != 2)
      throw ConfigError("synthetic key is not a [lo, hi] pair: " + key);
    lo = num_of(v[0], key);
    hi = num_of(v[1], key);
  };

  for (const auto& [key, val] : doc.items()) {
    if (key == "users") s.users = uint_of(val, key);
    else if (key == "edge_density") s.edge_density = num_of(val, key);
    else if (key == "items") s.items = uint_of(val, key);
    else if (key == "features") s.features = uint_of(val, key);
    else if (key == "brands") s.brands = uint_of(val, key);
    else if (key == "categories") s.categories = uint_of(val, key);
    else if (key == "complementary_metas") s.complementary_metas = uint_of(val, key);
    else if (key == "substitutable_metas") s.substitutable_metas = uint_of(val, key);
    else if (key == "importance") range_of(val, key, s.importance_lo, s.importance_hi);
    else if (key == "pref0") range_of(val, key, s.pref_lo, s.pref_hi);
    else if (key == "strength") range_of(val, key, s.strength_lo, s.strength_hi);
    else if (key == "cost_alpha") s.cost_alpha = num_of(val, key);
    else throw ConfigError("unknown synthetic key: " + key);
  }
  s.validate();
  return s;
}

World generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  World w;
  for (std::uint32_t u = 0; u < spec.users; ++u) w.sn.add_user("u" + std::to_string(u));
  for (std::uint32_t i = 0; i < spec.users; ++i)
    for (std::uint32_t j = 0; j < spec.users; ++j) {
      if (i == j) continue;
      if (unit(rng) < spec.edge_density) w.sn.add_edge(i, j, draw(spec.strength_lo, spec.strength_hi));
    }

  for (std::uint32_t x = 0; x < spec.items; ++x)
    w.catalog.add_item("item" + std::to_string(x), draw(spec.importance_lo, spec.importance_hi));

  for (std::uint32_t x = 0; x < spec.items; ++x)
    w.kg.add_node("item" + std::to_string(x), "ITEM");
  for (std::uint32_t f = 0; f < spec.features; ++f)
    w.kg.add_node("feature" + std::to_string(f), "FEATURE");
  for (std::uint32_t b = 0; b < spec.brands; ++b)
    w.kg.add_node("brand" + std::to_string(b), "BRAND");
  for (std::uint32_t c = 0; c < spec.categories; ++c)
    w.kg.add_node("category" + std::to_string(c), "CATEGORY");

  std::uniform_int_distribution<std::uint32_t> pick_feature(0, spec.features - 1);
  std::uniform_int_distribution<std::uint32_t> pick_brand(0, spec.brands - 1);
  std::uniform_int_distribution<std::uint32_t> pick_category(0, spec.categories - 1);
  std::vector<std::set<std::uint32_t>> supports(spec.items);
  auto item_name = [](std::uint32_t x) { return "item" + std::to_string(x); };
  auto feature_name = [](std::uint32_t f) { return "feature" + std::to_string(f); };
  for (std::uint32_t x = 0; x < spec.items; ++x) {
    supports[x].insert(pick_feature(rng));
    if (unit(rng) < 0.5) supports[x].insert(pick_feature(rng));
    for (std::uint32_t f : supports[x]) w.kg.add_edge(item_name(x), feature_name(f), "SUPPORT");
    w.kg.add_edge(item_name(x), "brand" + std::to_string(pick_brand(rng)), "BELONG");
    w.kg.add_edge(item_name(x), "category" + std::to_string(pick_category(rng)), "IN_CATEGORY");
  }

  // Guarantee at least two complementary item pairs (shared feature).
  if (spec.items >= 3) {
    auto shared = [&](std::uint32_t a, std::uint32_t b) {
      for (std::uint32_t f : supports[a])
        if (supports[b].count(f)) return true;
      return false;
    };
    std::size_t pairs = 0;
    for (std::uint32_t a = 0; a < spec.items; ++a)
      for (std::uint32_t b = a + 1; b < spec.items; ++b)
        if (shared(a, b)) ++pairs;
    std::uint32_t anchor = *supports[0].begin();
    for (std::uint32_t x = 1; x < spec.items && pairs < 2; ++x) {
      if (supports[x].count(anchor)) continue;
      std::size_t gained = 0;
      for (std::uint32_t o = 0; o < spec.items; ++o)
        if (o != x && supports[o].count(anchor)) ++gained;
      supports[x].insert(anchor);
      w.kg.add_edge(item_name(x), feature_name(anchor), "SUPPORT");
      pairs += gained;
    }
  }

  for (std::uint32_t k = 0; k < spec.complementary_metas; ++k) {
    if (k == 0) w.metas.push_back(shared_feature_meta());
    if (k == 1) w.metas.push_back(shared_brand_meta());
    if (k == 2) w.metas.push_back(feature_bridge_meta());
  }
  for (std::uint32_t k = 0; k < spec.substitutable_metas; ++k) {
    if (k == 0) w.metas.push_back(shared_category_meta());
    if (k == 1) w.metas.push_back(brand_rivals_meta());
  }

  w.pref0.assign(spec.users, std::vector<double>(spec.items, 0.0));
  for (auto& row : w.pref0)
    for (double& p : row) p = draw(spec.pref_lo, spec.pref_hi);

  w.sn.finalize();
  w.catalog.fill_costs_by_rule(w.sn, w.pref0, spec.cost_alpha);
  w.finalize();
  return w;
}

}  // namespace imdpp
