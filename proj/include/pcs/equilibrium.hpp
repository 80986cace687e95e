// Equilibrium verification and enumeration for arbitrary mechanisms.
//
// Conventions follow the model: agent optimality (AO) means every on-path
// message ties at the maximal agent payoff chi*u_pi(m) + (1-chi)*u_sel(m) and
// no message beats it; principal optimality (PO) means every selection lies
// in the response set of its message's posterior; no message may carry
// ex-ante probability one. Off-path messages yield the agent
// chi*u_pi(m) + (1-chi)*off_path_payoff, with the pessimistic default 0.

#pragma once

#include <optional>
#include <vector>

#include "pcs/model.hpp"
#include "pcs/polarize.hpp"
#include "pcs/worstcase.hpp"

namespace pcs {

struct StrategyProfile {
  std::vector<std::vector<double>> sigma_a;  // [state][message]

  // Expected agent payoff of the principal's (possibly mixed) best response
  // per message. A value strictly between two tie clusters denotes the mix of
  // the bracketing maximizers achieving that expectation; entries for
  // off-path messages are ignored.
  std::vector<double> sigma_p;

  double off_path_payoff = 0.0;
};

struct EquilibriumReport {
  bool ao_ok = false;
  bool po_ok = false;
  bool pooling_ok = false;
  double ao_slack = 0.0;
  double po_slack = 0.0;
  double pooling_slack = 0.0;  // max over messages of P(m) - 1
  double agent_payoff = 0.0;
  double principal_payoff = 0.0;

  bool ok() const { return ao_ok && po_ok && pooling_ok; }
};

EquilibriumReport verify_equilibrium(const SampledProblem& sp, const Mechanism& mech,
                                     const StrategyProfile& profile, double tol);

/// Searches for best-response selections making `sigma_a` part of an
/// equilibrium of `mech`. Returns the completed profile when one exists
/// within the AO tolerance.
std::optional<StrategyProfile> find_ao_profile(const SampledProblem& sp,
                                               const Mechanism& mech,
                                               const std::vector<std::vector<double>>& sigma_a,
                                               double tol,
                                               double off_path_payoff = 0.0);

struct TwoMessageWitness {
  StrategyProfile profile;
  double payoff = 0.0;
  int message_a = 0;  // mechanism message indices on path
  int message_b = 1;
};

struct TwoMessageEnumeration {
  std::vector<TwoMessageWitness> feasible;
  double min_payoff = 0.0;  // no-communication payoff when feasible is empty
  double max_payoff = 0.0;
  bool empty = true;
};

/// Grid search over two-on-path-message strategies (k+1 points per state for
/// the probability of the first message of each pair). Every returned witness
/// passes verify_equilibrium at the same tolerance. An empty feasible set
/// maps to the no-communication payoff.
TwoMessageEnumeration enumerate_two_message(const SampledProblem& sp,
                                            const Mechanism& mech, int k_per_dim,
                                            double tol);

struct ChiLimitPoint {
  double chi = 0.0;
  bool any_equilibrium = false;
  double best_payoff = 0.0;  // no-communication payoff when empty
};

struct ChiLimitProbe {
  std::vector<ChiLimitPoint> points;
  double cheap_talk_bound = 0.0;
  bool within_bound = true;  // final payoff <= bound + tol
};

/// Best feasible equilibrium payoff of (plan, chi) for each chi, compared
/// against the cheap-talk upper bound.
ChiLimitProbe chi_limit_probe(const SampledProblem& sp,
                              const std::vector<Lottery>& plan,
                              const std::vector<double>& chis, int k_per_dim,
                              double tol);

struct GarbledWitness {
  StrategyProfile profile;
  std::vector<std::vector<double>> kappa;  // kappa[new_message][ref_message]
  double payoff = 0.0;
};

/// Searches Blackwell garblings of a reference strategy (uniform contractions
/// toward the prior, then pairwise message merges) for a feasible, strictly
/// less informative equilibrium of the mechanism.
std::optional<GarbledWitness> garbled_equilibrium(const SampledProblem& sp,
                                                  const Mechanism& mech,
                                                  const std::vector<std::vector<double>>& sigma_ref,
                                                  double tol);

}  // namespace pcs
