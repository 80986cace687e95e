#include "pcs/benchmark.hpp"

#include <cmath>
#include <stdexcept>

namespace pcs {

namespace {

BeliefVector prior_belief(const Problem& p) {
  BeliefVector mu;
  mu.p = p.prior.p;
  return mu;
}

}  // namespace

std::pair<double, ResponseSet> no_comm(const SampledProblem& sp) {
  ResponseSet rs = best_response(sp, prior_belief(sp.problem()), sp.problem().tol.tie);
  return {rs.value, rs};
}

FullCommitmentOpt full_commitment_opt(const SampledProblem& sp) {
  const Problem& p = sp.problem();
  const int n = sp.grid().size();

  FullCommitmentOpt out;
  out.envelopes.reserve(p.n_states());
  for (int s = 0; s < p.n_states(); ++s) {
    out.envelopes.push_back(concave_envelope(sp.state_samples(s), sp.grid()));
  }

  double best = -1e300;
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int s = 0; s < p.n_states(); ++s) v += p.prior.p[s] * out.envelopes[s].values[i];
    if (v > best + 1e-15) {
      best = v;
      best_i = i;
    }
  }
  out.v_bar = best;
  out.u_bar = sp.grid().point(best_i);
  out.plans.reserve(p.n_states());
  for (int s = 0; s < p.n_states(); ++s) {
    out.plans.push_back(hull_lottery(out.envelopes[s], out.u_bar));
  }
  return out;
}

CheapTalkProbe cheap_talk_probe(const SampledProblem& sp, int k_per_dim) {
  const Problem& p = sp.problem();
  const int n_states = p.n_states();
  if (n_states > 4) {
    throw std::invalid_argument("cheap_talk_probe limited to four states");
  }
  const double tol = p.tol.ao;

  auto [v_b, u_rho] = no_comm(sp);
  CheapTalkProbe probe;
  probe.k_per_dim = k_per_dim;
  probe.best_agent_payoff = u_rho.max_u();
  probe.v_ct = v_b;  // babbling is always feasible

  std::vector<int> idx(n_states, 0);
  std::vector<double> p_yes(n_states, 0.0);
  const double step = 1.0 / (k_per_dim - 1);

  while (true) {
    for (int s = 0; s < n_states; ++s) p_yes[s] = idx[s] * step;

    double prob_yes = 0.0;
    for (int s = 0; s < n_states; ++s) prob_yes += p_yes[s] * p.prior.p[s];
    if (prob_yes > 1e-9 && prob_yes < 1.0 - 1e-9) {
      BeliefVector mu_yes, mu_no;
      mu_yes.p.resize(n_states);
      mu_no.p.resize(n_states);
      for (int s = 0; s < n_states; ++s) {
        mu_yes.p[s] = p_yes[s] * p.prior.p[s] / prob_yes;
        mu_no.p[s] = (1.0 - p_yes[s]) * p.prior.p[s] / (1.0 - prob_yes);
      }
      ResponseSet r_yes = best_response(sp, mu_yes, p.tol.tie);
      ResponseSet r_no = best_response(sp, mu_no, p.tol.tie);
      // The principal may mix over tied responses, so equal expected agent
      // payoffs are available whenever the hulls of the two maximizer sets
      // meet.
      double gap = std::max({0.0, r_no.min_u() - r_yes.max_u(),
                             r_yes.min_u() - r_no.max_u()});
      if (gap <= tol) {
        double agent = std::min(r_yes.max_u(), r_no.max_u());
        double principal =
            prob_yes * r_yes.value + (1.0 - prob_yes) * r_no.value;
        probe.v_ct = std::max(probe.v_ct, principal);
        if (agent > u_rho.max_u() + tol && agent > probe.best_agent_payoff) {
          probe.improving_found = true;
          probe.best_agent_payoff = agent;
          probe.witness_p_yes = p_yes;
        }
      }
    }

    int s = 0;
    while (s < n_states && ++idx[s] == k_per_dim) {
      idx[s] = 0;
      ++s;
    }
    if (s == n_states) break;
  }
  return probe;
}

BenchmarkReport run_benchmark(const SampledProblem& sp, int cheap_talk_k) {
  BenchmarkReport rep;
  auto [v_b, u_rho] = no_comm(sp);
  rep.v_b = v_b;
  rep.u_rho = std::move(u_rho);

  FullCommitmentOpt fc = full_commitment_opt(sp);
  rep.v_bar = fc.v_bar;
  rep.u_bar = fc.u_bar;
  rep.plans = std::move(fc.plans);
  rep.envelopes = std::move(fc.envelopes);

  rep.cheap_talk = cheap_talk_probe(sp, cheap_talk_k);
  return rep;
}

}  // namespace pcs
