#include <cmath>
#include <random>

#include "doctest.h"
#include "pcs/benchmark.hpp"
#include "pcs/model.hpp"
#include "pcs/polarize.hpp"
#include "pcs/scenarios.hpp"

using namespace pcs;

TEST_CASE("truth-telling spreads the audit responses to the extremes") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(1001));
  BinaryStrategy truth{{0.0, 1.0}};  // l -> no, h -> yes
  SpreadEval ev = spread(sp, truth);
  CHECK(ev.delta == doctest::Approx(1.0));
  CHECK(ev.u_yes == doctest::Approx(1.0));
  CHECK(ev.u_no == doctest::Approx(0.0));
}

TEST_CASE("babbling has zero spread") {
  SampledProblem sp(builtin_scenario("insurance3"), Grid(501));
  BinaryStrategy babble{{0.4, 0.4, 0.4}};
  CHECK(spread(sp, babble).delta == doctest::Approx(0.0));
}

TEST_CASE("off-path messages are rejected") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(501));
  CHECK_THROWS_AS(spread(sp, BinaryStrategy{{1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(spread(sp, BinaryStrategy{{0.0, 0.0}}), ValidationError);
}

TEST_CASE("spread is invariant under message relabeling") {
  SampledProblem sp(builtin_scenario("insurance3"), Grid(501));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    BinaryStrategy s{{unit(rng), unit(rng), unit(rng)}};
    double py = s.prob_yes(sp.problem().prior);
    if (py < 1e-6 || py > 1.0 - 1e-6) continue;
    CHECK(spread(sp, s).delta == doctest::Approx(spread(sp, s.swapped()).delta));
  }
}

TEST_CASE("posteriors average back to the prior") {
  Problem p = builtin_scenario("insurance3");
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryStrategy s{{unit(rng), unit(rng), unit(rng)}};
    double py = s.prob_yes(p.prior);
    if (py < 1e-9 || py > 1.0 - 1e-9) continue;
    BeliefVector yes = s.posterior_yes(p.prior);
    BeliefVector no = s.posterior_no(p.prior);
    for (int st = 0; st < p.n_states(); ++st) {
      CHECK(std::abs(py * yes.p[st] + (1.0 - py) * no.p[st] - p.prior.p[st]) <=
            1e-12);
    }
  }
}

TEST_CASE("two-state searches recover truth-telling") {
  for (const char* name : {"audit", "binary-naive"}) {
    SampledProblem sp(builtin_scenario(name), Grid(1001));
    PolarizeResult pol = find_polarizing(sp, 501);
    CHECK(pol.delta_bar == doctest::Approx(1.0));
    REQUIRE(pol.sigma_unique);
    const auto& rep = pol.representatives.front();
    CHECK(rep.sigma.p_yes[0] == doctest::Approx(0.0));
    CHECK(rep.sigma.p_yes[1] == doctest::Approx(1.0));
    CHECK(pol.u_yes_star == doctest::Approx(1.0));
    CHECK(pol.u_no_star == doctest::Approx(0.0));
    CHECK(pol.link_state == -1);
  }
}

TEST_CASE("insurance search isolates the safest type with no link state") {
  SampledProblem sp(builtin_scenario("insurance3"), Grid(2001));
  PolarizeResult pol = find_polarizing(sp);
  const Problem& p = sp.problem();
  CHECK(pol.target_state == p.states.index_of("h"));
  CHECK(pol.link_weight <= 0.01);
  CHECK(pol.sigma_unique);
  CHECK(pol.payoff_pair_unique);
  CHECK(pol.u_yes_star == doctest::Approx(0.9).epsilon(2e-3));
}

TEST_CASE("concave high state search mixes the middle type across messages") {
  SampledProblem sp(builtin_scenario("insurance3-concave-h"), Grid(2001));
  PolarizeResult pol = find_polarizing(sp);
  const Problem& p = sp.problem();
  CHECK(pol.target_state == p.states.index_of("h"));
  CHECK(pol.link_state == p.states.index_of("m"));
  CHECK(pol.link_weight == doctest::Approx(0.155).epsilon(0.15));
  CHECK(pol.link_weight > 0.05);
  CHECK(pol.sigma_unique);
  CHECK(pol.payoff_pair_unique);
}

TEST_CASE("the structured search matches the exhaustive oracle") {
  struct Case {
    const char* name;
    int grid;
    int k;
  };
  for (Case c : {Case{"audit", 1001, 50}, Case{"binary-naive", 1001, 50},
                 Case{"insurance3", 2001, 20}}) {
    SampledProblem sp(builtin_scenario(c.name), Grid(c.grid));
    PolarizeResult pol = find_polarizing(sp, 501);
    double brute = brute_force_spread(sp, c.k);
    CHECK(std::abs(pol.delta_bar - brute) <= 1e-3);
  }
}

TEST_CASE("four-state searches still match the exhaustive oracle") {
  Problem p;
  p.states.labels = {"a", "b", "c", "d"};
  p.prior.p = {0.4, 0.3, 0.2, 0.1};
  p.gamma = {PayoffCurve({PayoffTerm::bump(0.15, 0.3),
                          PayoffTerm::polynomial({0.01, 0.02})}),
             PayoffCurve({PayoffTerm::bump(0.45, 0.35)}),
             PayoffCurve({PayoffTerm::bump(0.7, 0.3),
                          PayoffTerm::polynomial({0.02, -0.01})}),
             PayoffCurve({PayoffTerm::bump(0.9, 0.25)})};
  p.validate();
  SampledProblem sp(p, Grid(501));
  PolarizeResult pol = find_polarizing(sp, 501);
  double brute = brute_force_spread(sp, 12);
  // The coarse oracle can only undershoot the structured optimum.
  CHECK(brute <= pol.delta_bar + 1e-9);
  CHECK(std::abs(pol.delta_bar - brute) <= 2e-2);
}

TEST_CASE("identical states cannot move the responses") {
  Problem p;
  p.states.labels = {"a", "b"};
  p.prior.p = {0.5, 0.5};
  PayoffCurve single({PayoffTerm::bump(0.4, 0.2)});
  p.gamma = {single, single};
  p.validate();
  SampledProblem sp(p, Grid(501));
  CHECK(brute_force_spread(sp, 50) == doctest::Approx(0.0));
  CHECK(find_polarizing(sp, 201).delta_bar == doctest::Approx(0.0));
}

TEST_CASE("exhaustive oracle rejects large state spaces") {
  Problem p;
  p.states.labels = {"a", "b", "c", "d", "e"};
  p.prior.p = {0.2, 0.2, 0.2, 0.2, 0.2};
  PayoffCurve single({PayoffTerm::bump(0.4, 0.2)});
  p.gamma = {single, single, single, single, single};
  p.validate();
  SampledProblem sp(p, Grid(501));
  CHECK_THROWS_AS(brute_force_spread(sp, 10), std::invalid_argument);
}

TEST_CASE("spread bounds hold across the builtins") {
  for (const auto& name : builtin_scenario_names()) {
    SampledProblem sp(builtin_scenario(name), Grid(501));
    PolarizeResult pol = find_polarizing(sp, 501);
    CHECK(pol.delta_bar >= 0.0);
    CHECK(pol.delta_bar <= 1.0);
  }
}

TEST_CASE("the maximal spread reaches the prior payoff where a zero state exists") {
  // Scenarios whose curves peak at the endpoints; the three-state insurance
  // scenario with interior peaks is excluded and covered by the acceptance
  // suite, which documents the violation there.
  for (const char* name : {"audit", "binary-naive", "insurance3-concave-h"}) {
    SampledProblem sp(builtin_scenario(name), Grid(1001));
    auto [v_b, u_rho] = no_comm(sp);
    PolarizeResult pol = find_polarizing(sp, 501);
    CHECK(pol.delta_bar >= u_rho.max_u() - 1e-6);
  }
}
