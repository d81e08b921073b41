#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "imdpp/perception.hpp"
#include "imdpp/world.hpp"
#include "support.hpp"

using namespace imdpp;

namespace {

// Three items; two complementary metas and one substitutable meta with
// hand-chosen instance counts, so derived relevance values follow by
// arithmetic. Counts: meta0 rc pairs (0,1)=2(max), (1,2)=1; meta1 (0,1)=1;
// meta2 rs pair (0,2)=3.
World meta_world() {
  World w;
  w.sn.add_user("a");
  w.sn.add_user("b");
  w.sn.add_edge("a", "b", 0.5);

  w.kg.add_node("i0", "ITEM");
  w.kg.add_node("i1", "ITEM");
  w.kg.add_node("i2", "ITEM");
  w.kg.add_node("f0", "FEATURE");
  w.kg.add_node("f1", "FEATURE");
  w.kg.add_node("b0", "BRAND");
  w.kg.add_node("c0", "CATEGORY");
  w.kg.add_node("c1", "CATEGORY");
  w.kg.add_node("c2", "CATEGORY");
  w.kg.add_edge("i0", "f0", "SUPPORT");
  w.kg.add_edge("i1", "f0", "SUPPORT");
  w.kg.add_edge("i0", "f1", "SUPPORT");
  w.kg.add_edge("i1", "f1", "SUPPORT");
  w.kg.add_edge("i2", "f1", "SUPPORT");
  w.kg.add_edge("i0", "b0", "BELONG");
  w.kg.add_edge("i1", "b0", "BELONG");
  w.kg.add_edge("i0", "c0", "IN_CATEGORY");
  w.kg.add_edge("i2", "c0", "IN_CATEGORY");
  w.kg.add_edge("i0", "c1", "IN_CATEGORY");
  w.kg.add_edge("i2", "c1", "IN_CATEGORY");
  w.kg.add_edge("i0", "c2", "IN_CATEGORY");
  w.kg.add_edge("i2", "c2", "IN_CATEGORY");

  MetaGraph feat;
  feat.name = "shared-feature";
  feat.relationship = Relationship::kComplementary;
  feat.role_names = {"A", "F", "B"};
  feat.role_types = {"ITEM", "FEATURE", "ITEM"};
  feat.edges = {{0, 1, "SUPPORT"}, {2, 1, "SUPPORT"}};
  feat.endpoint_a = 0;
  feat.endpoint_b = 2;

  MetaGraph brand = feat;
  brand.name = "shared-brand";
  brand.role_types = {"ITEM", "BRAND", "ITEM"};
  brand.edges = {{0, 1, "BELONG"}, {2, 1, "BELONG"}};

  MetaGraph cat = feat;
  cat.name = "shared-category";
  cat.relationship = Relationship::kSubstitutable;
  cat.role_types = {"ITEM", "CATEGORY", "ITEM"};
  cat.edges = {{0, 1, "IN_CATEGORY"}, {2, 1, "IN_CATEGORY"}};

  w.metas = {feat, brand, cat};

  w.catalog.add_item("i0", 1.0);
  w.catalog.add_item("i1", 1.0);
  w.catalog.add_item("i2", 1.0);
  for (UserId u = 0; u < 2; ++u)
    for (ItemId x = 0; x < 3; ++x) w.catalog.set_cost(u, x, 1.0);
  w.pref0.assign(2, std::vector<double>(3, 0.5));
  w.budget = 10.0;
  w.finalize();
  return w;
}

}  // namespace

TEST_CASE("uniform weights split evenly inside each relationship tag") {
  World w = meta_world();
  auto wt = uniform_meta_weights(w);
  REQUIRE(wt.size() == 3);
  CHECK(wt[0] == doctest::Approx(0.5));
  CHECK(wt[1] == doctest::Approx(0.5));
  CHECK(wt[2] == doctest::Approx(1.0));
}

TEST_CASE("derived relevance is the weight-blend of normalized counts") {
  World w = meta_world();
  // Normalized base tables: feature (0,1)=1, (1,2)=0.5, (0,2)=0.5; brand
  // (0,1)=1; category (0,2)=1.
  CHECK(w.relevance.count(0, 0, 1) == 2);
  CHECK(w.relevance.count(0, 1, 2) == 1);
  CHECK(w.relevance.count(0, 0, 2) == 1);
  CHECK(w.relevance.count(2, 0, 2) == 3);

  PairRelevance pin = derive_pin(w, uniform_meta_weights(w));
  CHECK(pin.rc(0, 1) == doctest::Approx(0.5 * 1.0 + 0.5 * 1.0));
  CHECK(pin.rc(1, 2) == doctest::Approx(0.5 * 0.5));
  CHECK(pin.rc(0, 2) == doctest::Approx(0.5 * 0.5));
  CHECK(pin.rs(0, 2) == doctest::Approx(1.0));
  CHECK(pin.rs(0, 1) == doctest::Approx(0.0));

  // Shifting all complementary weight onto the feature meta is linear.
  PairRelevance skew = derive_pin(w, {1.0, 0.0, 1.0});
  CHECK(skew.rc(0, 1) == doctest::Approx(1.0));
  CHECK(skew.rc(1, 2) == doctest::Approx(0.5));
}

TEST_CASE("meta weight update raises metas with adopted-pair evidence") {
  World w = meta_world();
  auto wt = uniform_meta_weights(w);

  // No new adoption: untouched.
  auto same = update_meta_weights(w, with_item(with_item(0, 0), 1), false, wt, 0.5);
  CHECK(same == wt);

  // Adopting {i0,i1}: evidence 1 for both complementary metas -> weights stay
  // at 1/2 after renormalization; the substitutable meta (no evidence) stays 1.
  auto both = update_meta_weights(w, with_item(with_item(0, 0), 1), true, wt, 0.5);
  CHECK(both[0] == doctest::Approx(0.5));
  CHECK(both[1] == doctest::Approx(0.5));
  CHECK(both[2] == doctest::Approx(1.0));

  // Adopting {i1,i2}: evidence 1 for the feature meta, 0 for the brand meta.
  // w0' = .5*1.5, w1' = .5 -> normalized 0.6 / 0.4.
  auto skew = update_meta_weights(w, with_item(with_item(0, 1), 2), true, wt, 0.5);
  CHECK(skew[0] == doctest::Approx(0.6));
  CHECK(skew[1] == doctest::Approx(0.4));
  CHECK(skew[2] == doctest::Approx(1.0));

  // eta = 0 keeps everything.
  auto frozen = update_meta_weights(w, with_item(with_item(0, 1), 2), true, wt, 0.0);
  CHECK(frozen[0] == doctest::Approx(0.5));
  CHECK(frozen[1] == doctest::Approx(0.5));
}

TEST_CASE("preference drift follows the relevance balance and clamps") {
  PairRelevance pin(3);
  pin.set_rc(0, 1, 0.8);
  pin.set_rs(0, 2, 0.6);
  pin.set_rc(1, 2, 0.4);

  std::vector<double> pref{0.0, 0.3, 0.5};
  ItemMask adopted = with_item(0, 0);  // item 0 adopted
  update_preferences(pin, adopted, pref, 0.5);

  CHECK(pref[0] == doctest::Approx(0.0));                    // adopted: forced 0
  CHECK(pref[1] == doctest::Approx(0.3 + 0.5 * 0.8));        // complementary pull
  CHECK(pref[2] == doctest::Approx(0.5 - 0.5 * 0.6));        // substitutable push

  // Both adopted: contributions add; clamping keeps [0,1].
  std::vector<double> two{0.0, 0.9, 0.0};
  update_preferences(pin, with_item(with_item(0, 0), 2), two, 1.0);
  CHECK(two[1] == doctest::Approx(1.0));  // 0.9 + 0.8 + 0.4 clamped
  CHECK(two[2] == doctest::Approx(0.0));

  std::vector<double> down{0.0, 0.0, 0.2};
  update_preferences(pin, with_item(0, 0), down, 1.0);
  CHECK(down[2] == doctest::Approx(0.0));  // 0.2 - 0.6 clamped at 0
}

TEST_CASE("influence refresh scales with adoption similarity") {
  CHECK(jaccard(0, 0) == doctest::Approx(0.0));
  CHECK(jaccard(0b011, 0b011) == doctest::Approx(1.0));
  CHECK(jaccard(0b011, 0b001) == doctest::Approx(0.5));
  CHECK(jaccard(0b010, 0b100) == doctest::Approx(0.0));

  CHECK(updated_influence(0.4, 0b011, 0b001, 0.5) == doctest::Approx(0.4 * 1.25));
  CHECK(updated_influence(0.4, 0, 0, 0.5) == doctest::Approx(0.4));
  CHECK(updated_influence(0.9, 0b1, 0b1, 0.5) == doctest::Approx(1.0));  // clamped
}

TEST_CASE("extra adoption probability is the triple product") {
  CHECK(ext_probability(0.5, 0.8, 0.9) == doctest::Approx(0.36));
  CHECK(ext_probability(0.0, 0.8, 0.9) == doctest::Approx(0.0));
  CHECK(ext_probability(1.0, 1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("initial perception state mirrors the world") {
  World w = meta_world();
  PerceptionState st = PerceptionState::initial(w);
  REQUIRE(st.adopted.size() == 2);
  CHECK(st.adopted[0] == 0);
  CHECK(st.pref[1][2] == doctest::Approx(0.5));
  REQUIRE(st.pact.size() == 1);
  CHECK(st.pact[0] == doctest::Approx(0.5));
  CHECK(st.pins[0].rc(0, 1) == doctest::Approx(1.0));
  CHECK(st.weights[0].size() == 3);

  // Overridden pins win over the derived ones.
  std::vector<PairRelevance> pins(2, PairRelevance(3));
  pins[0].set_rc(0, 2, 0.25);
  w.pin_override = std::move(pins);
  PerceptionState ov = PerceptionState::initial(w);
  CHECK(ov.pins[0].rc(0, 2) == doctest::Approx(0.25));
  CHECK(ov.pins[0].rc(0, 1) == doctest::Approx(0.0));
}
