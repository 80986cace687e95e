#include "pcs/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcs/equilibrium.hpp"

namespace pcs {

PolarizedUtilities polarized_utilities(const Problem& problem,
                                       const BinaryStrategy& sigma_star) {
  sigma_star.validate(problem.prior);

  PolarizedUtilities pu;
  pu.p_yes = sigma_star.prob_yes(problem.prior);
  pu.mu_yes = sigma_star.posterior_yes(problem.prior);
  pu.mu_no = sigma_star.posterior_no(problem.prior);

  std::vector<const PayoffCurve*> curves;
  curves.reserve(problem.n_states());
  for (const auto& g : problem.gamma) curves.push_back(&g);
  pu.gamma_yes = PayoffCurve::mix(curves, pu.mu_yes.p);
  pu.gamma_no = PayoffCurve::mix(curves, pu.mu_no.p);
  return pu;
}

WorstCaseResult worst_case_opt(const SampledProblem& sp, const PolarizeResult& pol,
                               const CheapTalkProbe& cheap_talk, int /*t_resolution*/) {
  const Problem& p = sp.problem();
  const Grid& grid = sp.grid();
  const int n = grid.size();

  WorstCaseResult wc;
  wc.polarize = pol;
  wc.assumption2_warning = !pol.payoff_pair_unique;
  wc.assumption3_warning = cheap_talk.improving_found;
  wc.sigma_star = pol.representatives.front().sigma;
  wc.u_yes_star = pol.u_yes_star;
  wc.u_no_star = pol.u_no_star;

  // Committed objective per representative; the single-representative case is
  // the closed-form path, multiple representatives force the inner minimum.
  struct RepData {
    double p_yes;
    Envelope env_yes;
    Envelope env_no;
  };
  std::vector<RepData> reps;
  reps.reserve(pol.representatives.size());
  for (const auto& rep : pol.representatives) {
    PolarizedUtilities pu = polarized_utilities(p, rep.sigma);
    reps.push_back({pu.p_yes, concave_envelope(pu.gamma_yes, grid),
                    concave_envelope(pu.gamma_no, grid)});
  }
  wc.inf_over_sigma_used = reps.size() > 1;

  double best = -1e300;
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    double v = 1e300;
    for (const auto& r : reps) {
      v = std::min(v, r.p_yes * r.env_yes.values[i] + (1.0 - r.p_yes) * r.env_no.values[i]);
    }
    if (v > best + 1e-15) {
      best = v;
      best_i = i;
    }
  }
  wc.v_star = best;
  wc.u_star = grid.point(best_i);
  wc.p_yes = reps.front().p_yes;
  wc.env_yes = reps.front().env_yes;
  wc.env_no = reps.front().env_no;
  wc.plan_yes = hull_lottery(wc.env_yes, wc.u_star);
  wc.plan_no = hull_lottery(wc.env_no, wc.u_star);
  return wc;
}

WorstCaseResult worst_case_opt(const SampledProblem& sp, int t_resolution) {
  PolarizeResult pol = find_polarizing(sp, t_resolution);
  CheapTalkProbe probe = cheap_talk_probe(sp);
  return worst_case_opt(sp, pol, probe, t_resolution);
}

ConstructedMechanism construct_mechanism(const Problem& problem,
                                         const WorstCaseResult& wc,
                                         double delta_bar, double chi) {
  const double threshold = delta_bar / (1.0 + delta_bar);
  if (chi < threshold - 1e-12 || chi >= 1.0) {
    throw ValidationError("chi must lie in [delta_bar/(1+delta_bar), 1); got " +
                          std::to_string(chi));
  }

  // The message with the higher uncommitted payoff receives the lower
  // committed payoff; the scaled committed gap equals delta_bar.
  const double gap = (1.0 - chi) / chi * (wc.u_no_star - wc.u_yes_star);
  const double half = std::abs(gap) / 2.0;
  const double center = std::clamp(wc.u_star, half, 1.0 - half);

  problem.validate();

  ConstructedMechanism out;
  out.requested_center = wc.u_star;
  out.applied_center = center;
  out.committed_gap = gap;
  out.mech.messages = {"yes", "no"};
  out.mech.chi = chi;
  out.mech.committed = {hull_lottery(wc.env_yes, center + gap / 2.0),
                        hull_lottery(wc.env_no, center - gap / 2.0)};
  return out;
}

double mechanism_value(const SampledProblem& sp, const Mechanism& mech,
                       const BinaryStrategy& sigma) {
  const Problem& p = sp.problem();
  sigma.validate(p.prior);
  if (mech.n_messages() != 2) {
    throw std::invalid_argument("mechanism_value expects a two-message mechanism");
  }

  std::vector<std::vector<double>> sigma_a(p.n_states(), std::vector<double>(2));
  for (int s = 0; s < p.n_states(); ++s) {
    sigma_a[s][0] = sigma.p_yes[s];
    sigma_a[s][1] = 1.0 - sigma.p_yes[s];
  }
  auto profile = find_ao_profile(sp, mech, sigma_a, p.tol.ao);
  if (!profile) {
    throw ValidationError("strategy is not feasible under the mechanism");
  }
  EquilibriumReport rep = verify_equilibrium(sp, mech, *profile, p.tol.ao);
  if (!rep.ok()) {
    throw ValidationError("strategy is not feasible under the mechanism");
  }
  return rep.principal_payoff;
}

}  // namespace pcs
