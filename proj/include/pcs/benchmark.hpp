// No-communication and full-commitment benchmarks.

#pragma once

#include <optional>
#include <vector>

#include "pcs/envelope.hpp"
#include "pcs/model.hpp"
#include "pcs/response.hpp"

namespace pcs {

/// Outcome of the two-message cheap-talk scan. A configuration is flagged
/// when some informative two-message strategy admits equal best-response
/// agent payoffs across both messages at a level strictly above the
/// no-communication payoff.
struct CheapTalkProbe {
  bool improving_found = false;
  double best_agent_payoff = 0.0;    // best equal-selection level found
  double v_ct = 0.0;                 // principal cheap-talk payoff bound
  std::optional<std::vector<double>> witness_p_yes;
  int k_per_dim = 0;
};

struct BenchmarkReport {
  double v_b = 0.0;
  ResponseSet u_rho;

  double v_bar = 0.0;
  double u_bar = 0.0;
  std::vector<Lottery> plans;        // one per state, all with mean u_bar
  std::vector<Envelope> envelopes;   // per-state concave envelopes

  CheapTalkProbe cheap_talk;
};

/// v_b = max_u sum_th rho_th gamma_th(u); u_rho is the maximizer set.
std::pair<double, ResponseSet> no_comm(const SampledProblem& sp);

/// v_bar = max_u sum_th rho_th gamma_th^co(u); ties break toward the smallest
/// maximizer. Plans are hull lotteries at u_bar, one per state.
struct FullCommitmentOpt {
  double v_bar;
  double u_bar;
  std::vector<Lottery> plans;
  std::vector<Envelope> envelopes;
};
FullCommitmentOpt full_commitment_opt(const SampledProblem& sp);

/// Scans two-message strategies on a k-grid per state for cheap-talk
/// equilibria that improve the agent's payoff over no communication. Only
/// two-message deviations are checked; coarser than the full quantifier.
CheapTalkProbe cheap_talk_probe(const SampledProblem& sp, int k_per_dim = 21);

BenchmarkReport run_benchmark(const SampledProblem& sp, int cheap_talk_k = 21);

}  // namespace pcs
