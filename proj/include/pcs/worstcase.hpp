// Worst-case optimal payoff and explicit partial-commitment mechanisms.

#pragma once

#include <string>
#include <vector>

#include "pcs/benchmark.hpp"
#include "pcs/envelope.hpp"
#include "pcs/model.hpp"
#include "pcs/polarize.hpp"

namespace pcs {

/// Posterior-weighted payoff mixtures induced by a polarizing strategy.
struct PolarizedUtilities {
  PayoffCurve gamma_yes;
  PayoffCurve gamma_no;
  double p_yes = 0.0;
  BeliefVector mu_yes;
  BeliefVector mu_no;
};

PolarizedUtilities polarized_utilities(const Problem& problem,
                                       const BinaryStrategy& sigma_star);

/// Committed lottery per message plus the commitment probability.
struct Mechanism {
  std::vector<std::string> messages;
  std::vector<Lottery> committed;  // u-space, one per message
  double chi = 1.0;

  int n_messages() const { return static_cast<int>(messages.size()); }
  double committed_mean(int m) const { return committed[m].mean(); }
};

struct WorstCaseResult {
  double v_star = 0.0;
  double u_star = 0.0;
  Lottery plan_yes;
  Lottery plan_no;
  BinaryStrategy sigma_star;
  double u_yes_star = 0.0;
  double u_no_star = 0.0;
  double p_yes = 0.0;
  Envelope env_yes;
  Envelope env_no;
  bool inf_over_sigma_used = false;   // multiple representatives minimized over
  bool assumption2_warning = false;   // distinct maximal payoff pairs observed
  bool assumption3_warning = false;   // cheap-talk probe flagged an improvement
  PolarizeResult polarize;
};

/// Maximizes P(yes) gamma_yes^co(u) + P(no) gamma_no^co(u) over the grid when
/// the polarizing representative is unique; otherwise takes, for each u, the
/// minimum of that committed objective over all representatives.
WorstCaseResult worst_case_opt(const SampledProblem& sp,
                               const PolarizeResult& pol,
                               const CheapTalkProbe& cheap_talk,
                               int t_resolution = 2001);

/// Convenience overload running the polarizing search and cheap-talk probe.
WorstCaseResult worst_case_opt(const SampledProblem& sp, int t_resolution = 2001);

/// Two-message mechanism whose committed payoff gap, scaled by chi/(1-chi),
/// equals delta_bar, with committed lotteries on the polarized envelopes and
/// means centered as close to u_star as [0,1] feasibility permits.
struct ConstructedMechanism {
  Mechanism mech;
  double requested_center = 0.0;  // u_star
  double applied_center = 0.0;    // after feasibility clipping
  double committed_gap = 0.0;     // committed_mean(yes) - committed_mean(no)
};

ConstructedMechanism construct_mechanism(const Problem& problem,
                                         const WorstCaseResult& wc,
                                         double delta_bar, double chi);

/// Exact expected principal payoff of (mech, sigma) using best-response
/// selections consistent with agent optimality. Throws ValidationError when
/// sigma is not feasible under the mechanism.
double mechanism_value(const SampledProblem& sp, const Mechanism& mech,
                       const BinaryStrategy& sigma);

}  // namespace pcs
