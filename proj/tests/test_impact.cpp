#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "imdpp/impact.hpp"
#include "support.hpp"

using namespace imdpp;

namespace {

// rc(0,1)=.2 / rs(0,1)=.4 (mixed pair), rc(0,2)=.4 (pure complement).
struct MixedFixture {
  PairRelevance rel{3};
  std::vector<double> importance{1.0, 1.0, 0.5};
  MixedFixture() {
    rel.set_rc(0, 1, 0.2);
    rel.set_rs(0, 1, 0.4);
    rel.set_rc(0, 2, 0.4);
  }
};

}  // namespace

TEST_CASE("likelihoods normalize the two relevance channels") {
  PairRelevance rel(2);
  rel.set_rc(0, 1, 0.2);
  rel.set_rs(0, 1, 0.3);
  auto l = likelihoods(rel, 0, 1);
  CHECK(l.lc == doctest::Approx(0.4));
  CHECK(l.ls == doctest::Approx(0.6));

  PairRelevance none(2);
  auto z = likelihoods(none, 0, 1);
  CHECK(z.lc == 0.0);
  CHECK(z.ls == 0.0);
}

TEST_CASE("first-hop terms weigh complement gain against substitute loss") {
  MixedFixture f;
  ImpactEvaluator ev(f.rel, f.importance);

  auto pro = ev.proactive_terms(0);
  REQUIRE(pro.size() == 2);
  CHECK(pro[0].other == 1);
  // (1/3)(.2)(1) - (2/3)(.4)(1) = -0.2
  CHECK(pro[0].value == doctest::Approx(-0.2));
  CHECK(pro[1].other == 2);
  CHECK(pro[1].value == doctest::Approx(0.2));  // 1 * .4 * w2=.5

  auto re = ev.reactive_terms(0);
  REQUIRE(re.size() == 2);
  CHECK(re[0].value == doctest::Approx(-0.2));  // w0 = 1 coincides
  CHECK(re[1].value == doctest::Approx(0.4));   // 1 * .4 * w0=1
}

TEST_CASE("walk depth zero is worthless and depth one sums first-hop terms") {
  MixedFixture f;
  ImpactEvaluator ev(f.rel, f.importance);
  CHECK(ev.proactive(0, 0) == 0.0);
  CHECK(ev.reactive(0, 0) == 0.0);
  CHECK(ev.proactive(0, 1) == doctest::Approx(-0.2 + 0.2));
  CHECK(ev.reactive(0, 1) == doctest::Approx(-0.2 + 0.4));
}

TEST_CASE("deeper walks compound along chains with the right importances") {
  PairRelevance rel(3);
  rel.set_rc(0, 1, 0.5);
  rel.set_rc(1, 2, 0.8);
  std::vector<double> importance{2.0, 1.0, 1.0};
  ImpactEvaluator ev(rel, importance);

  CHECK(ev.proactive(0, 1) == doctest::Approx(0.5));
  CHECK(ev.proactive(0, 2) == doctest::Approx(0.5 + 0.8));
  // Reactive holds the root's importance on every hop.
  CHECK(ev.reactive(0, 2) == doctest::Approx(0.5 * 2 + 0.8 * 2));
  CHECK(ev.dynamic_reachability(0, 2) ==
        doctest::Approx(ev.proactive(0, 2) + ev.reactive(0, 2)));
}

TEST_CASE("siblings claim children up front so later hops cannot re-enter them") {
  // Triangle with a strong 1-2 edge: if node 1 could expand into 2, the walk
  // would score .5 + .9 = 1.4. Up-front claiming by the root scores .5 + .1.
  PairRelevance rel(3);
  rel.set_rc(0, 1, 0.5);
  rel.set_rc(1, 2, 0.9);
  rel.set_rc(0, 2, 0.1);
  std::vector<double> importance{1.0, 1.0, 1.0};
  ImpactEvaluator ev(rel, importance);
  CHECK(ev.proactive(0, 2) == doctest::Approx(0.6));
  CHECK(ev.proactive(0, 5) == doctest::Approx(0.6));  // nothing left to visit
}

TEST_CASE("the root never revisits itself through symmetric relevance") {
  PairRelevance rel(2);
  rel.set_rc(0, 1, 0.5);
  std::vector<double> importance{1.0, 1.0};
  ImpactEvaluator ev(rel, importance);
  CHECK(ev.proactive(0, 4) == doctest::Approx(0.5));  // no 0-1-0-1 ping-pong
}

TEST_CASE("mutation shifts every visited pair term") {
  PairRelevance rel(3);
  rel.set_rc(0, 1, 0.5);
  rel.set_rc(1, 2, 0.8);
  std::vector<double> importance{1.0, 1.0, 1.0};
  ImpactEvaluator plain(rel, importance);
  ImpactEvaluator shifted(rel, importance, 0.1);
  CHECK(shifted.proactive(0, 2) == doctest::Approx(plain.proactive(0, 2) + 2 * 0.1));
  CHECK(shifted.proactive(0, 1) == doctest::Approx(plain.proactive(0, 1) + 0.1));
  auto terms = shifted.proactive_terms(0);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].value == doctest::Approx(0.6));
}

TEST_CASE("substitute-only pairs drag impact negative") {
  PairRelevance rel(2);
  rel.set_rs(0, 1, 0.5);
  std::vector<double> importance{1.0, 2.0};
  ImpactEvaluator ev(rel, importance);
  CHECK(ev.proactive(0, 1) == doctest::Approx(-0.5 * 2.0));
  CHECK(ev.reactive(0, 1) == doctest::Approx(-0.5 * 1.0));
}
