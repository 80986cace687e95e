#include <cmath>

#include "doctest.h"
#include "pcs/model.hpp"
#include "pcs/response.hpp"
#include "pcs/scenarios.hpp"

using namespace pcs;

namespace {

Problem two_state(PayoffCurve a, PayoffCurve b) {
  Problem p;
  p.states.labels = {"a", "b"};
  p.prior.p = {0.5, 0.5};
  p.gamma = {std::move(a), std::move(b)};
  p.validate();
  return p;
}

}  // namespace

TEST_CASE("audit responses at the degenerate and interior beliefs") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(1001));
  const double tie = 1e-9;

  ResponseSet high = best_response(sp, BeliefVector::degenerate(2, 1), tie);
  REQUIRE(high.clusters.size() == 1);
  CHECK(high.clusters[0].arg == doctest::Approx(1.0));
  CHECK_FALSE(high.tied());

  ResponseSet low = best_response(sp, BeliefVector::degenerate(2, 0), tie);
  CHECK(low.clusters[0].arg == doctest::Approx(0.0));

  // Any belief below one half favors the low action.
  ResponseSet prior = best_response(sp, BeliefVector{{0.7, 0.3}}, tie);
  REQUIRE(prior.clusters.size() == 1);
  CHECK(prior.clusters[0].arg == doctest::Approx(0.0));
}

TEST_CASE("audit knife-edge belief ties along the whole interval") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(1001));
  ResponseSet rs = best_response(sp, BeliefVector{{0.5, 0.5}}, 1e-9);
  CHECK(rs.tied());
  CHECK(rs.min_u() == doctest::Approx(0.0));
  CHECK(rs.max_u() == doctest::Approx(1.0));
}

TEST_CASE("maximizers are invariant under common positive scaling") {
  Problem p = builtin_scenario("insurance3");
  Problem scaled = p;
  for (auto& g : scaled.gamma) g = g.scaled(3.0);
  SampledProblem sp(p, Grid(501));
  SampledProblem sp3(scaled, Grid(501));
  BeliefVector mu{{0.2, 0.5, 0.3}};
  ResponseSet a = best_response(sp, mu, 1e-9);
  ResponseSet b = best_response(sp3, mu, 1e-9);
  REQUIRE(a.clusters.size() == b.clusters.size());
  for (size_t i = 0; i < a.clusters.size(); ++i) {
    CHECK(a.clusters[i].arg_index == b.clusters[i].arg_index);
  }
}

TEST_CASE("response sets cover the interval along a belief segment") {
  // The union of maximizer sets along the path between the two degenerate
  // beliefs sweeps out every payoff level.
  for (const char* name : {"audit", "binary-naive"}) {
    SampledProblem sp(builtin_scenario(name), Grid(1001));
    const int steps = 101;
    std::vector<std::pair<double, double>> covered;  // hull intervals
    for (int k = 0; k < steps; ++k) {
      double t = static_cast<double>(k) / (steps - 1);
      ResponseSet rs = best_response(sp, BeliefVector{{1.0 - t, t}}, 1e-9);
      covered.push_back({rs.min_u(), rs.max_u()});
    }
    const double slack = 1.0 / (steps - 1) + sp.grid().spacing() + 1e-9;
    for (int i = 0; i <= 100; ++i) {
      double target = i / 100.0;
      double dist = 1e300;
      for (auto [lo, hi] : covered) {
        if (target >= lo - slack && target <= hi + slack) dist = 0.0;
        dist = std::min({dist, std::abs(target - lo), std::abs(target - hi)});
      }
      CHECK(dist <= slack);
    }
  }
}

TEST_CASE("upper hemicontinuity proxy along a segment") {
  // Approaching the audit tie belief from below keeps the maximizer near the
  // limit set; the tie at one half contains everything.
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(1001));
  ResponseSet at_tie = best_response(sp, BeliefVector{{0.5, 0.5}}, 1e-9);
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    ResponseSet rs = best_response(sp, BeliefVector{{0.5 + eps, 0.5 - eps}}, 1e-9);
    for (double rep : rs.representatives()) {
      CHECK(rep >= at_tie.min_u() - 1e-9);
      CHECK(rep <= at_tie.max_u() + 1e-9);
    }
  }
}

TEST_CASE("belief scan finds no violation on smooth scenarios") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(501));
  Assumption1Report rep = assumption1_probe(sp, 1000, 42);
  CHECK(rep.ok());
  CHECK(rep.max_clusters <= 2);

  SampledProblem sp3(builtin_scenario("insurance3"), Grid(501));
  Assumption1Report rep3 = assumption1_probe(sp3, 10000, 42);
  CHECK(rep3.ok());
  CHECK(rep3.tied_fraction == doctest::Approx(0.0));
}

TEST_CASE("duplicate twin-peaked states tie at every belief") {
  // (u - 0.5)^2 has two equal maximizers at the endpoints.
  PayoffCurve m({PayoffTerm::polynomial({0.25, -1.0, 1.0})});
  Problem p = two_state(m, m);
  SampledProblem sp(p, Grid(501));
  Assumption1Report rep = assumption1_probe(sp, 500, 1);
  CHECK(rep.tied_fraction == doctest::Approx(1.0));
  CHECK(rep.max_clusters == 2);
  CHECK(rep.ok());
}

TEST_CASE("a three-peaked curve produces a violation witness") {
  // -(u(u-0.5)(u-1))^2 attains its maximum 0 at u = 0, 0.5, 1.
  // Expanded: -(u^3 - 1.5u^2 + 0.5u)^2.
  PayoffCurve tri({PayoffTerm::polynomial(
      {0.0, 0.0, -0.25, 1.5, -3.25, 3.0, -1.0})});
  Problem p = two_state(tri, tri);
  SampledProblem sp(p, Grid(501));
  Assumption1Report rep = assumption1_probe(sp, 200, 3);
  CHECK_FALSE(rep.ok());
  CHECK(rep.max_clusters >= 3);
}

TEST_CASE("probe rejects tiny sample counts") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(501));
  CHECK_THROWS_AS(assumption1_probe(sp, 10, 1), std::invalid_argument);
}
