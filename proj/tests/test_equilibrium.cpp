#include <cmath>
#include <random>

#include "doctest.h"
#include "pcs/benchmark.hpp"
#include "pcs/equilibrium.hpp"
#include "pcs/model.hpp"
#include "pcs/polarize.hpp"
#include "pcs/scenarios.hpp"
#include "pcs/worstcase.hpp"

using namespace pcs;

namespace {

Mechanism naive_mechanism(double chi = 0.5) {
  Mechanism mech;
  mech.messages = {"l", "h"};
  mech.committed = {Lottery::point(0.0), Lottery::point(1.0)};
  mech.chi = chi;
  return mech;
}

}  // namespace

TEST_CASE("the inverted separating profile is an equilibrium of the naive plan") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(1001));
  StrategyProfile inverted;
  inverted.sigma_a = {{0, 1}, {1, 0}};  // l -> "h", h -> "l"
  inverted.sigma_p = {1.0, 0.0};
  EquilibriumReport rep = verify_equilibrium(sp, naive_mechanism(), inverted, 1e-6);
  CHECK(rep.ok());
  CHECK(rep.agent_payoff == doctest::Approx(0.5));
  CHECK(rep.principal_payoff == doctest::Approx(0.5));
}

TEST_CASE("truthful separation fails agent optimality under the naive plan") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(1001));
  StrategyProfile truthful;
  truthful.sigma_a = {{1, 0}, {0, 1}};
  truthful.sigma_p = {0.0, 1.0};
  EquilibriumReport rep = verify_equilibrium(sp, naive_mechanism(), truthful, 1e-6);
  CHECK_FALSE(rep.ao_ok);
  CHECK(rep.ao_slack == doctest::Approx(1.0));
  CHECK(rep.po_ok);
}

TEST_CASE("perfect pooling is flagged") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(1001));
  StrategyProfile pooled;
  pooled.sigma_a = {{0, 1}, {0, 1}};
  pooled.sigma_p = {0.0, 0.5};
  EquilibriumReport rep = verify_equilibrium(sp, naive_mechanism(), pooled, 1e-6);
  CHECK_FALSE(rep.pooling_ok);
}

TEST_CASE("profile shape errors are rejected") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(1001));
  StrategyProfile bad;
  bad.sigma_a = {{0, 1}};
  bad.sigma_p = {0.0, 0.5};
  CHECK_THROWS_AS(verify_equilibrium(sp, naive_mechanism(), bad, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("enumeration over the naive plan finds only the inverted profile") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(1001));
  TwoMessageEnumeration e = enumerate_two_message(sp, naive_mechanism(), 51, 1e-6);
  REQUIRE(e.feasible.size() == 1);
  const auto& sa = e.feasible.front().profile.sigma_a;
  CHECK(sa[0][1] == doctest::Approx(1.0));
  CHECK(sa[1][0] == doctest::Approx(1.0));
  CHECK(e.min_payoff == doctest::Approx(0.5));
  CHECK(e.max_payoff == doctest::Approx(0.5));
}

TEST_CASE("lowering commitment below one half unravels separation") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(1001));
  TwoMessageEnumeration e =
      enumerate_two_message(sp, naive_mechanism(0.45), 51, 1e-6);
  // Less informative equilibria survive, but no separating profile does.
  for (const auto& w : e.feasible) {
    bool separating = false;
    const auto& sa = w.profile.sigma_a;
    if ((sa[0][0] >= 1.0 - 1e-9 && sa[1][1] >= 1.0 - 1e-9) ||
        (sa[0][1] >= 1.0 - 1e-9 && sa[1][0] >= 1.0 - 1e-9)) {
      separating = true;
    }
    CHECK_FALSE(separating);
  }
}

TEST_CASE("every enumerated witness verifies at the same tolerance") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(501));
  Mechanism mech = naive_mechanism(0.45);
  TwoMessageEnumeration e = enumerate_two_message(sp, mech, 31, 1e-6);
  for (const auto& w : e.feasible) {
    CHECK(verify_equilibrium(sp, mech, w.profile, 1e-6).ok());
  }
}

TEST_CASE("a polarizing mechanism pins the equilibrium set and payoff") {
  SampledProblem sp(builtin_scenario("insurance3"), Grid(2001));
  WorstCaseResult wc = worst_case_opt(sp);
  ConstructedMechanism cm =
      construct_mechanism(sp.problem(), wc, wc.polarize.delta_bar, 0.9);

  TwoMessageEnumeration e = enumerate_two_message(sp, cm.mech, 51, 1e-6);
  REQUIRE_FALSE(e.empty);
  // All feasible strategies achieve the maximal spread and one payoff.
  for (const auto& w : e.feasible) {
    BinaryStrategy sigma{{w.profile.sigma_a[0][0], w.profile.sigma_a[1][0],
                          w.profile.sigma_a[2][0]}};
    CHECK(spread(sp, sigma).delta >= wc.polarize.delta_bar - 1e-6);
  }
  CHECK(e.max_payoff - e.min_payoff <= 1e-9);
}

TEST_CASE("hedged full-commitment plans never beat no communication") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(1001));
  auto [v_b, u_rho] = no_comm(sp);

  for (int trial = 0; trial < 10; ++trial) {
    double mean = 0.2 + 0.6 * unit(rng);
    double lo = mean * (1.0 - unit(rng));
    double hi = mean + (1.0 - mean) * unit(rng);
    Lottery spreading = (hi - lo > 1e-9)
                            ? Lottery::two_point(lo, hi, (hi - mean) / (hi - lo))
                            : Lottery::point(mean);
    Mechanism mech;
    mech.messages = {"m0", "m1"};
    mech.committed = {spreading, Lottery::point(mean)};
    mech.chi = 0.5;
    TwoMessageEnumeration e = enumerate_two_message(sp, mech, 21, 1e-6);
    if (!e.empty) CHECK(e.max_payoff <= v_b + 1e-9);
  }
}

TEST_CASE("chi limit probe respects the cheap-talk bound") {
  SampledProblem sp(builtin_scenario("audit", 0.3), Grid(1001));
  FullCommitmentOpt fc = full_commitment_opt(sp);

  SUBCASE("unequal committed payoffs kill communication near full commitment") {
    std::vector<Lottery> plan{Lottery::point(0.1), Lottery::point(0.6)};
    ChiLimitProbe probe = chi_limit_probe(sp, plan, {0.99}, 41, 1e-6);
    REQUIRE(probe.points.size() == 1);
    CHECK_FALSE(probe.points[0].any_equilibrium);
    auto [v_b, u_rho] = no_comm(sp);
    CHECK(probe.points[0].best_payoff == doctest::Approx(v_b));
  }

  SUBCASE("hedged plans stay below the no-communication payoff for any chi") {
    std::vector<Lottery> plan{fc.plans[0], fc.plans[1]};
    // Both lotteries share the mean u_bar, so the plan satisfies the
    // equal-committed-payoff condition.
    ChiLimitProbe probe = chi_limit_probe(sp, plan, {0.3, 0.6, 0.9, 0.99}, 41, 1e-6);
    auto [v_b, u_rho] = no_comm(sp);
    for (const auto& pt : probe.points) {
      CHECK(pt.best_payoff <= v_b + 1e-9);
    }
    CHECK(probe.within_bound);
  }

  SUBCASE("no commitment reduces to cheap talk") {
    std::vector<Lottery> plan{Lottery::point(0.3), Lottery::point(0.7)};
    ChiLimitProbe probe = chi_limit_probe(sp, plan, {0.0}, 41, 1e-6);
    CHECK(probe.points[0].best_payoff <= probe.cheap_talk_bound + 1e-6);
  }
}

TEST_CASE("garbling the separating fixture yields a less informative equilibrium") {
  SampledProblem sp(audit3_fixture(), Grid(1001));
  Mechanism mech;
  mech.messages = {"m_l", "m_i", "m_h"};
  mech.committed = {Lottery::point(0.0), Lottery::point(0.5), Lottery::point(1.0)};
  mech.chi = 0.5;

  std::vector<std::vector<double>> truth = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  auto witness = garbled_equilibrium(sp, mech, truth, 1e-6);
  REQUIRE(witness.has_value());

  // The witness posteriors are convex combinations of the reference
  // posteriors (here: degenerate beliefs) and the prior.
  const auto& sa = witness->profile.sigma_a;
  for (int s = 0; s < 3; ++s) {
    double sum = sa[s][0] + sa[s][1] + sa[s][2];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(verify_equilibrium(sp, mech, witness->profile, 1e-6).ok());

  // The garbling matrix reproduces the witness strategy row by row.
  for (int s = 0; s < 3; ++s) {
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int m = 0; m < 3; ++m) v += witness->kappa[j][m] * truth[s][m];
      CHECK(v == doctest::Approx(sa[s][j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("the off-path continuation payoff is configurable") {
  SampledProblem sp(audit3_fixture(), Grid(1001));
  Mechanism mech;
  mech.messages = {"m_l", "m_i", "m_h"};
  // Lower committed payoff on the unused message than in the base fixture.
  mech.committed = {Lottery::point(0.1), Lottery::point(0.5), Lottery::point(1.0)};
  mech.chi = 0.5;

  StrategyProfile pooled;
  pooled.sigma_a = {{0, 1, 0}, {0, 1, 0}, {0, 0.5, 0.5}};
  pooled.sigma_p = {0.0, 0.5, 0.0};

  // Pessimistic continuation: deviating to m_l pays 0.05 < 0.5, equilibrium.
  CHECK(verify_equilibrium(sp, mech, pooled, 1e-6).ok());

  // An optimistic continuation makes the off-path deviation profitable.
  pooled.off_path_payoff = 1.0;
  EquilibriumReport rep = verify_equilibrium(sp, mech, pooled, 1e-6);
  CHECK_FALSE(rep.ao_ok);
  CHECK(rep.ao_slack == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("the pooled multiplicity profile verifies on the fixture") {
  SampledProblem sp(audit3_fixture(), Grid(1001));
  Mechanism mech;
  mech.messages = {"m_l", "m_i", "m_h"};
  mech.committed = {Lottery::point(0.0), Lottery::point(0.5), Lottery::point(1.0)};
  mech.chi = 0.5;

  StrategyProfile pooled;
  pooled.sigma_a = {{0, 1, 0}, {0, 1, 0}, {0, 0.5, 0.5}};
  pooled.sigma_p = {0.0, 0.5, 0.0};
  CHECK(verify_equilibrium(sp, mech, pooled, 1e-6).ok());
}

TEST_CASE("garblings cannot leave the polarizing set of a polarizing mechanism") {
  // Strategies within one grid step of the maximizer can tie the maximal
  // spread exactly, so the search may return such a neighbor; what cannot
  // happen is a witness whose spread falls short of the maximum.
  SampledProblem sp(builtin_scenario("insurance3"), Grid(1001));
  WorstCaseResult wc = worst_case_opt(sp, 501);
  ConstructedMechanism cm =
      construct_mechanism(sp.problem(), wc, wc.polarize.delta_bar, 0.9);

  std::vector<std::vector<double>> sigma_ref(3, std::vector<double>(2));
  for (int s = 0; s < 3; ++s) {
    sigma_ref[s][0] = wc.sigma_star.p_yes[s];
    sigma_ref[s][1] = 1.0 - wc.sigma_star.p_yes[s];
  }
  auto witness = garbled_equilibrium(sp, cm.mech, sigma_ref, 1e-6);
  if (witness.has_value()) {
    BinaryStrategy sigma{{witness->profile.sigma_a[0][0],
                          witness->profile.sigma_a[1][0],
                          witness->profile.sigma_a[2][0]}};
    CHECK(spread(sp, sigma).delta >= wc.polarize.delta_bar - 1e-4);
  }
}

TEST_CASE("babbling references cannot be garbled further") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(501));
  Mechanism mech;
  mech.messages = {"m0", "m1"};
  mech.committed = {Lottery::point(0.5), Lottery::point(0.5)};
  mech.chi = 0.5;
  std::vector<std::vector<double>> babble = {{0.5, 0.5}, {0.5, 0.5}};
  auto witness = garbled_equilibrium(sp, mech, babble, 1e-6);
  CHECK_FALSE(witness.has_value());
}

TEST_CASE("non-equilibrium references are rejected by the garbling search") {
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(501));
  std::vector<std::vector<double>> truthful = {{1, 0}, {0, 1}};
  CHECK_THROWS_AS(garbled_equilibrium(sp, naive_mechanism(), truthful, 1e-6),
                  std::invalid_argument);
}
