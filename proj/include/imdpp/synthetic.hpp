#pragma once

#include <cstdint>
#include <string>

#include "imdpp/world.hpp"

namespace imdpp {

// Knobs for the random world generator. Meta-graph counts select from a fixed
// pool of schema templates over the generated ITEM/FEATURE/BRAND/CATEGORY
// vocabulary: complementary = {shared-feature, shared-brand, feature-bridge},
// substitutable = {shared-category, brand-rivals}.
struct SyntheticSpec {
  std::uint32_t users = 16;
  double edge_density = 0.15;  // directed edge probability per ordered pair
  std::uint32_t items = 4;
  std::uint32_t features = 4;
  std::uint32_t brands = 2;
  std::uint32_t categories = 2;
  std::uint32_t complementary_metas = 3;
  std::uint32_t substitutable_metas = 1;
  double importance_lo = 0.5, importance_hi = 1.5;
  double pref_lo = 0.05, pref_hi = 0.35;  // initial preference range
  double strength_lo = 0.1, strength_hi = 0.6;
  double cost_alpha = 1.0;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Parses a JSON object with keys users, edge_density, items, features,
// brands, categories, complementary_metas, substitutable_metas, cost_alpha
// and two-element ranges importance, pref0, strength. Unknown keys and type
// mismatches raise ConfigError naming the key.
SyntheticSpec parse_synthetic_spec(const std::string& json_text);

// Deterministic world from (spec, seed): same inputs give an identical world
// (and byte-identical files once written). The social graph, catalog
// importances, knowledge graph wiring, initial preferences and rule-based
// costs are all drawn from one generator in a fixed field order. Every item
// supports at least one feature and at least two item pairs share a feature,
// so complementary relevance never degenerates. The returned world is
// finalized; campaign knobs (budget, promotions, dynamics, model) stay at
// their defaults for the caller to set.
World generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace imdpp
