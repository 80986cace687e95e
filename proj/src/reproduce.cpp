#include "pcs/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "pcs/benchmark.hpp"
#include "pcs/envelope.hpp"
#include "pcs/equilibrium.hpp"
#include "pcs/model.hpp"
#include "pcs/polarize.hpp"
#include "pcs/report.hpp"
#include "pcs/scenarios.hpp"
#include "pcs/worstcase.hpp"

namespace pcs {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Checker {
  bool pass = true;
  std::ostringstream details;

  void expect(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details << (ok ? "" : "[FAIL] ") << what << "; ";
  }
  void expect_near(double got, double want, double tol, const std::string& label) {
    bool ok = std::abs(got - want) <= tol;
    if (!ok) pass = false;
    details << (ok ? "" : "[FAIL] ") << label << "=" << num(got) << " (want "
            << num(want) << " +-" << num(tol) << "); ";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// O(N^2)-per-point chord oracle for the concave envelope; intentionally
// independent of the hull sweep.
std::vector<double> chord_oracle(const std::vector<double>& y, const Grid& g) {
  const int n = g.size();
  std::vector<double> env(y);
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i <= m; ++i) {
      for (int k = m; k < n; ++k) {
        if (i == k) continue;
        double t = static_cast<double>(m - i) / (k - i);
        env[m] = std::max(env[m], y[i] + t * (y[k] - y[i]));
      }
    }
  }
  return env;
}

SolveOptions default_opts(int grid_n) {
  SolveOptions o;
  o.grid_n = grid_n;
  return o;
}

// --------------------------------------------------------------------------
// Individual checks

CheckResult check_audit_closed_forms(int grid_n) {
  Checker c;
  for (double rho : {0.2, 0.3, 0.4}) {
    auto t0 = std::chrono::steady_clock::now();
    SampledProblem sp(builtin_scenario("audit", rho), Grid(grid_n));
    auto [v_b, u_rho] = no_comm(sp);
    FullCommitmentOpt fc = full_commitment_opt(sp);
    double dt = seconds_since(t0);

    const double u_ref = rho / (2.0 * (1.0 - rho));
    const double v_ref = 1.0 - rho + rho * rho / (4.0 * (1.0 - rho));
    c.expect_near(fc.u_bar, u_ref, 1e-3, "u_bar(rho=" + num(rho) + ")");
    c.expect_near(fc.v_bar, v_ref, 1e-3, "v_bar(rho=" + num(rho) + ")");
    c.expect_near(v_b, 1.0 - rho, 1e-6, "v_b(rho=" + num(rho) + ")");
    c.expect(dt < 1.0, "runtime " + num(dt) + "s < 1s");
  }
  return {1, "audit closed forms", c.pass, c.details.str()};
}

CheckResult check_n2_equivalence(int grid_n) {
  Checker c;
  SolveReport rep = solve_scenario(builtin_scenario("audit", 0.3), "audit",
                                   default_opts(grid_n));
  c.expect_near(rep.worst_case.v_star, rep.benchmark.v_bar, 5e-3,
                "|v_star - v_bar| audit");
  return {2, "two-state equivalence", c.pass, c.details.str()};
}

CheckResult check_table1(int grid_n) {
  Checker c;
  auto t0 = std::chrono::steady_clock::now();
  SolveReport rep = solve_scenario(builtin_scenario("insurance3"), "insurance3",
                                   default_opts(grid_n));
  double dt = seconds_since(t0);

  c.expect_near(rep.benchmark.v_b, 0.21, 0.01, "v_b");
  c.expect_near(rep.worst_case.v_star, 0.23, 0.01, "v_star");
  c.expect_near(rep.benchmark.v_bar, 0.27, 0.01, "v_bar");
  c.expect_near(rep.benchmark.u_rho.clusters.front().arg, 0.67, 0.02, "u_rho");
  c.expect_near(rep.worst_case.u_star, 0.3, 0.02, "u_star");
  c.expect_near(rep.benchmark.u_bar, 0.51, 0.02, "u_bar");

  const auto& sigma = rep.polarize.representatives.front().sigma;
  const Problem& p = rep.problem;
  bool separates = std::abs(sigma.p_yes[p.states.index_of("h")] - 1.0) <= 0.02 &&
                   sigma.p_yes[p.states.index_of("l")] <= 0.02 &&
                   sigma.p_yes[p.states.index_of("m")] <= 0.02;
  c.expect(separates, "polarizing strategy separates h from {l,m}");
  c.expect(dt < 10.0, "runtime " + num(dt) + "s < 10s");
  return {3, "three-state benchmark table", c.pass, c.details.str()};
}

CheckResult check_table2(int grid_n) {
  Checker c;
  SolveReport rep = solve_scenario(builtin_scenario("insurance3-concave-h"),
                                   "insurance3-concave-h", default_opts(grid_n));

  c.expect_near(rep.benchmark.v_b, 0.238, 0.01, "v_b");
  c.expect_near(rep.worst_case.v_star, 0.24, 0.01, "v_star");
  c.expect_near(rep.benchmark.v_bar, 0.29, 0.01, "v_bar");
  c.expect_near(rep.benchmark.u_rho.clusters.front().arg, 0.69, 0.02, "u_rho");
  c.expect_near(rep.worst_case.u_star, 0.63, 0.02, "u_star");
  c.expect_near(rep.benchmark.u_bar, 0.61, 0.02, "u_bar");

  const auto& sigma = rep.polarize.representatives.front().sigma;
  const Problem& p = rep.problem;
  c.expect_near(sigma.p_yes[p.states.index_of("m")], 0.155, 0.02, "sigma(yes|m)");
  return {4, "concave-high-state table", c.pass, c.details.str()};
}

Mechanism naive_mechanism() {
  Mechanism mech;
  mech.messages = {"l", "h"};
  mech.committed = {Lottery::point(0.0), Lottery::point(1.0)};
  mech.chi = 0.5;
  return mech;
}

CheckResult check_naive_inversion(int grid_n) {
  Checker c;
  SampledProblem sp(builtin_scenario("binary-naive"), Grid(grid_n));
  TwoMessageEnumeration e =
      enumerate_two_message(sp, naive_mechanism(), 201, 1e-6);
  c.expect(e.feasible.size() == 1,
           "feasible profiles = " + std::to_string(e.feasible.size()) + " (want 1)");
  if (!e.feasible.empty()) {
    const auto& sa = e.feasible.front().profile.sigma_a;
    // State l sends the high message, state h the low one.
    bool inverted = std::abs(sa[0][1] - 1.0) <= 1e-12 && std::abs(sa[1][0] - 1.0) <= 1e-12;
    c.expect(inverted, "unique profile is the inverted separating one");
  }
  return {5, "naive mechanism unravels to inverted separation", c.pass,
          c.details.str()};
}

std::vector<Lottery> random_equal_mean_plan(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mean_d(0.15, 0.85);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mean = mean_d(rng);
  std::vector<Lottery> plan;
  for (int m = 0; m < 2; ++m) {
    if (unit(rng) < 0.3) {
      plan.push_back(Lottery::point(mean));
      continue;
    }
    double lo = mean * (1.0 - 0.9 * unit(rng));
    double hi = mean + (1.0 - mean) * 0.9 * unit(rng);
    if (hi - lo < 1e-6) {
      plan.push_back(Lottery::point(mean));
    } else {
      plan.push_back(Lottery::two_point(lo, hi, (hi - mean) / (hi - lo)));
    }
  }
  return plan;
}

CheckResult check_babbling_bound(int grid_n) {
  Checker c;
  std::mt19937_64 rng(99);
  for (const auto& name : builtin_scenario_names()) {
    SampledProblem sp(builtin_scenario(name), Grid(grid_n));
    auto [v_b, u_rho] = no_comm(sp);
    double worst_excess = -1.0;
    for (int trial = 0; trial < 10; ++trial) {
      Mechanism mech;
      mech.messages = {"m0", "m1"};
      mech.committed = random_equal_mean_plan(rng);
      mech.chi = 0.5;
      TwoMessageEnumeration e = enumerate_two_message(sp, mech, 21, 1e-6);
      if (!e.empty) worst_excess = std::max(worst_excess, e.max_payoff - v_b);
    }
    c.expect(worst_excess <= 1e-9,
             name + " max equilibrium payoff - v_b = " + num(worst_excess));
  }
  return {6, "hedged plans cannot beat no communication", c.pass, c.details.str()};
}

CheckResult check_oracles(int grid_n) {
  Checker c;
  for (const auto& name : builtin_scenario_names()) {
    SampledProblem sp(builtin_scenario(name), Grid(grid_n));
    PolarizeResult pol = find_polarizing(sp);
    double brute = brute_force_spread(sp, 50);
    c.expect_near(pol.delta_bar, brute, 1e-3, name + " delta_bar vs brute force");
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Grid g(401);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PayoffTerm> terms;
    std::vector<double> coeffs;
    for (int k = 0; k < 5; ++k) coeffs.push_back(2.0 * unit(rng) - 1.0);
    terms.push_back(PayoffTerm::polynomial(coeffs));
    terms.push_back(PayoffTerm::bump(0.1 + 0.8 * unit(rng), 0.05 + 0.45 * unit(rng),
                                     unit(rng)));
    PayoffCurve curve(terms);
    Envelope env = concave_envelope(curve, g);
    std::vector<double> oracle = chord_oracle(env.base, g);
    double worst = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(env.values[i] - oracle[i]));
    }
    if (worst > 1e-9) {
      c.expect(false, "envelope vs chord oracle trial " + std::to_string(trial) +
                          " diff " + num(worst));
    }
  }
  c.expect(true, "20 random envelopes matched the chord oracle");
  return {7, "search oracles agree", c.pass, c.details.str()};
}

CheckResult check_spread_floor(int grid_n) {
  Checker c;
  for (const auto& name : builtin_scenario_names()) {
    SampledProblem sp(builtin_scenario(name), Grid(grid_n));
    auto [v_b, u_rho] = no_comm(sp);
    PolarizeResult pol = find_polarizing(sp);
    c.expect(pol.delta_bar >= u_rho.max_u() - 1e-6,
             name + " delta_bar " + num(pol.delta_bar) + " >= u_rho " +
                 num(u_rho.max_u()));
  }
  return {8, "maximal spread covers the prior payoff", c.pass, c.details.str()};
}

CheckResult check_virtual_implementation(int grid_n) {
  Checker c;
  for (const auto& name : builtin_scenario_names()) {
    SampledProblem sp(builtin_scenario(name), Grid(grid_n));
    WorstCaseResult wc = worst_case_opt(sp);
    const double delta_bar = wc.polarize.delta_bar;

    double prev_err = 1e300;
    for (double chi : {0.9, 0.99, 0.999}) {
      ConstructedMechanism cm =
          construct_mechanism(sp.problem(), wc, delta_bar, chi);
      double gap = cm.mech.committed_mean(0) - cm.mech.committed_mean(1);
      c.expect(std::abs(chi / (1.0 - chi) * std::abs(gap) - delta_bar) <= 1e-9,
               name + " chi=" + num(chi) + " scaled committed gap equals delta_bar");

      std::vector<std::vector<double>> sigma_a(sp.problem().n_states(),
                                               std::vector<double>(2));
      for (int s = 0; s < sp.problem().n_states(); ++s) {
        sigma_a[s][0] = wc.sigma_star.p_yes[s];
        sigma_a[s][1] = 1.0 - wc.sigma_star.p_yes[s];
      }
      auto profile = find_ao_profile(sp, cm.mech, sigma_a, 1e-6);
      bool verified =
          profile && verify_equilibrium(sp, cm.mech, *profile, 1e-6).ok();
      c.expect(verified, name + " chi=" + num(chi) + " sigma_star verifies");

      double value = mechanism_value(sp, cm.mech, wc.sigma_star);
      double err = std::abs(value - wc.v_star);
      c.expect(err <= 2.0 * (1.0 - chi) + 1e-12,
               name + " chi=" + num(chi) + " |value - v_star| = " + num(err) +
                   " <= " + num(2.0 * (1.0 - chi)));
      c.expect(err < prev_err, name + " chi=" + num(chi) + " error decreasing");
      prev_err = err;
    }
  }
  return {9, "virtual implementation convergence", c.pass, c.details.str()};
}

CheckResult check_multiplicity_fixture(int grid_n) {
  Checker c;
  SampledProblem sp(audit3_fixture(), Grid(grid_n));

  Mechanism mech;
  mech.messages = {"m_l", "m_i", "m_h"};
  mech.committed = {Lottery::point(0.0), Lottery::point(0.5), Lottery::point(1.0)};
  mech.chi = 0.5;

  // Fully separating reference: h -> m_l, i -> m_i, l -> m_h.
  StrategyProfile truth;
  truth.sigma_a = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  truth.sigma_p = {1.0, 0.5, 0.0};
  c.expect(verify_equilibrium(sp, mech, truth, 1e-6).ok(),
           "separating profile verifies");

  // Pooled strategy from the multiplicity construction.
  StrategyProfile pooled;
  pooled.sigma_a = {{0, 1, 0}, {0, 1, 0}, {0, 0.5, 0.5}};
  pooled.sigma_p = {0.0, 0.5, 0.0};
  c.expect(verify_equilibrium(sp, mech, pooled, 1e-6).ok(),
           "pooled profile verifies");

  auto witness = garbled_equilibrium(sp, mech, truth.sigma_a, 1e-6);
  c.expect(witness.has_value(), "garbled search finds a witness");
  return {10, "direct mechanism admits a pooled equilibrium", c.pass,
          c.details.str()};
}

}  // namespace

std::vector<CheckResult> run_reproduction_checks(int grid_n) {
  std::vector<CheckResult> out;
  out.push_back(check_audit_closed_forms(grid_n));
  out.push_back(check_n2_equivalence(grid_n));
  out.push_back(check_table1(grid_n));
  out.push_back(check_table2(grid_n));
  out.push_back(check_naive_inversion(grid_n));
  out.push_back(check_babbling_bound(grid_n));
  out.push_back(check_oracles(grid_n));
  out.push_back(check_spread_floor(grid_n));
  out.push_back(check_virtual_implementation(grid_n));
  out.push_back(check_multiplicity_fixture(grid_n));
  return out;
}

std::string format_check_matrix(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  #" << r.id << " " << r.name;
    if (!r.details.empty()) os << ": " << r.details;
    os << "\n";
  }
  return os.str();
}

}  // namespace pcs
