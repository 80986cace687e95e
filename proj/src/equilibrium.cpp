#include "pcs/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pcs/benchmark.hpp"

namespace pcs {

namespace {

constexpr double kOnPathEps = 1e-12;
constexpr double kPoolEps = 1e-9;

using Interval = std::pair<double, double>;
using Intervals = std::vector<Interval>;  // sorted, disjoint

Intervals intersect(const Intervals& a, const Intervals& b) {
  Intervals out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].first, b[j].first);
    double hi = std::min(a[i].second, b[j].second);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<double> message_marginals(const Problem& p,
                                      const std::vector<std::vector<double>>& sigma_a,
                                      int n_messages) {
  std::vector<double> marg(n_messages, 0.0);
  for (int s = 0; s < p.n_states(); ++s) {
    for (int m = 0; m < n_messages; ++m) marg[m] += p.prior.p[s] * sigma_a[s][m];
  }
  return marg;
}

BeliefVector posterior_of(const Problem& p,
                          const std::vector<std::vector<double>>& sigma_a, int m,
                          double marginal) {
  BeliefVector mu;
  mu.p.resize(p.n_states());
  for (int s = 0; s < p.n_states(); ++s) {
    mu.p[s] = p.prior.p[s] * sigma_a[s][m] / marginal;
  }
  return mu;
}

// A selection value is the expected agent payoff of a principal strategy
// supported on the response set. Values strictly between tie clusters stand
// for a mix of the two bracketing maximizers.
struct SelectionMix {
  double x = 0.0;
  double y = 0.0;
  double alpha = 1.0;  // value realized as alpha*f(x) + (1-alpha)*f(y)
};

SelectionMix decompose_selection(const ResponseSet& rs, double sel) {
  for (const auto& c : rs.clusters) {
    if (sel >= c.lo - 1e-12 && sel <= c.hi + 1e-12) return {sel, sel, 1.0};
  }
  for (size_t i = 0; i + 1 < rs.clusters.size(); ++i) {
    double x = rs.clusters[i].hi;
    double y = rs.clusters[i + 1].lo;
    if (sel > x && sel < y) return {x, y, (y - sel) / (y - x)};
  }
  return {sel, sel, 1.0};  // outside the hull: a plain (suboptimal) action
}

void check_profile_shape(const Problem& p, const Mechanism& mech,
                         const std::vector<std::vector<double>>& sigma_a) {
  if (sigma_a.size() != static_cast<size_t>(p.n_states())) {
    throw std::invalid_argument("profile rows do not match state count");
  }
  for (const auto& row : sigma_a) {
    if (row.size() != static_cast<size_t>(mech.n_messages())) {
      throw std::invalid_argument("profile columns do not match message count");
    }
    double sum = 0.0;
    for (double v : row) {
      if (v < -1e-9 || v > 1.0 + 1e-9) {
        throw std::invalid_argument("profile entries must lie in [0,1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("profile rows must sum to 1");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// verify_equilibrium

EquilibriumReport verify_equilibrium(const SampledProblem& sp, const Mechanism& mech,
                                     const StrategyProfile& profile, double tol) {
  const Problem& p = sp.problem();
  check_profile_shape(p, mech, profile.sigma_a);
  if (profile.sigma_p.size() != static_cast<size_t>(mech.n_messages())) {
    throw std::invalid_argument("profile selections do not match message count");
  }

  const int M = mech.n_messages();
  const double chi = mech.chi;
  std::vector<double> marg = message_marginals(p, profile.sigma_a, M);

  EquilibriumReport rep;

  std::vector<double> agent(M);
  double po_slack = 0.0;
  double committed = 0.0;
  double responded = 0.0;
  for (int m = 0; m < M; ++m) {
    const double u_pi = mech.committed_mean(m);
    if (marg[m] > kOnPathEps) {
      BeliefVector mu = posterior_of(p, profile.sigma_a, m, marg[m]);
      ResponseSet rs = best_response(sp, mu, p.tol.tie);
      const double sel = profile.sigma_p[m];
      SelectionMix mix = decompose_selection(rs, sel);
      double obj = 0.0;
      for (int s = 0; s < p.n_states(); ++s) {
        double g = mix.alpha * p.gamma[s].eval(mix.x) +
                   (1.0 - mix.alpha) * p.gamma[s].eval(mix.y);
        obj += mu.p[s] * g;
        responded += p.prior.p[s] * profile.sigma_a[s][m] * g;
      }
      // Principal optimality is vacuous under full commitment.
      if (chi < 1.0 - 1e-15) po_slack = std::max(po_slack, rs.value - obj);
      agent[m] = chi * u_pi + (1.0 - chi) * sel;
    } else {
      agent[m] = chi * u_pi + (1.0 - chi) * profile.off_path_payoff;
    }
    for (int s = 0; s < p.n_states(); ++s) {
      double w = p.prior.p[s] * profile.sigma_a[s][m];
      if (w > 0.0) committed += w * mech.committed[m].expect(p.gamma[s]);
    }
  }
  rep.po_slack = po_slack;
  rep.po_ok = po_slack <= std::max(tol, p.tol.tie);

  double best = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) best = std::max(best, agent[m]);
  double ao_slack = 0.0;
  for (int s = 0; s < p.n_states(); ++s) {
    for (int m = 0; m < M; ++m) {
      if (profile.sigma_a[s][m] > kOnPathEps) {
        ao_slack = std::max(ao_slack, best - agent[m]);
      }
    }
  }
  rep.ao_slack = ao_slack;
  rep.ao_ok = ao_slack <= tol;
  rep.agent_payoff = best;

  double max_marg = 0.0;
  for (int m = 0; m < M; ++m) max_marg = std::max(max_marg, marg[m]);
  rep.pooling_slack = max_marg - 1.0;
  rep.pooling_ok = max_marg <= 1.0 - kPoolEps;

  rep.principal_payoff = chi * committed + (1.0 - chi) * responded;
  return rep;
}

// ---------------------------------------------------------------------------
// find_ao_profile

std::optional<StrategyProfile> find_ao_profile(
    const SampledProblem& sp, const Mechanism& mech,
    const std::vector<std::vector<double>>& sigma_a, double tol,
    double off_path_payoff) {
  const Problem& p = sp.problem();
  check_profile_shape(p, mech, sigma_a);

  const int M = mech.n_messages();
  const double chi = mech.chi;
  std::vector<double> marg = message_marginals(p, sigma_a, M);

  std::vector<int> on_path;
  double off_bound = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    if (marg[m] > kOnPathEps) {
      on_path.push_back(m);
    } else {
      off_bound = std::max(off_bound, chi * mech.committed_mean(m) +
                                          (1.0 - chi) * off_path_payoff);
    }
  }
  if (on_path.empty()) return std::nullopt;

  std::vector<ResponseSet> responses(M);
  for (int m : on_path) {
    responses[m] = best_response(sp, posterior_of(p, sigma_a, m, marg[m]), p.tol.tie);
  }

  StrategyProfile profile;
  profile.sigma_a = sigma_a;
  profile.sigma_p.assign(M, 0.0);
  profile.off_path_payoff = off_path_payoff;

  if (chi >= 1.0 - 1e-15) {
    // Committed payoffs alone decide agent optimality; selections are free
    // best responses.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int m : on_path) {
      lo = std::min(lo, mech.committed_mean(m));
      hi = std::max(hi, mech.committed_mean(m));
    }
    if (hi - lo > tol) return std::nullopt;
    if (off_bound > hi + tol) return std::nullopt;
    for (int m : on_path) profile.sigma_p[m] = responses[m].clusters.front().arg;
    return profile;
  }

  // Common agent payoff C with sel_m = (C - chi*u_pi(m)) / (1-chi) realizable
  // by a (possibly mixed) best response for every on-path message, and
  // C >= off_bound. Mixing over tied maximizers makes the whole hull
  // [min_u, max_u] of each response set available. Try the exact region
  // first, then a tolerance-padded one (split so the verified slack stays
  // below tol).
  for (double pad : {0.0, 0.45 * tol}) {
    Intervals feas{{-1e300, 1e300}};
    for (int m : on_path) {
      const double base = chi * mech.committed_mean(m);
      Intervals im{{base + (1.0 - chi) * responses[m].min_u() - pad,
                    base + (1.0 - chi) * responses[m].max_u() + pad}};
      feas = intersect(feas, im);
      if (feas.empty()) break;
    }
    if (!feas.empty() && off_bound > -1e300) {
      feas = intersect(feas, {{off_bound - pad, 1e300}});
    }
    if (feas.empty()) continue;

    const double C = 0.5 * (feas.front().first + feas.front().second);
    for (int m : on_path) {
      double raw = (C - chi * mech.committed_mean(m)) / (1.0 - chi);
      profile.sigma_p[m] = std::clamp(raw, responses[m].min_u(), responses[m].max_u());
    }
    return profile;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// enumerate_two_message

TwoMessageEnumeration enumerate_two_message(const SampledProblem& sp,
                                            const Mechanism& mech, int k_per_dim,
                                            double tol) {
  const Problem& p = sp.problem();
  const int n_states = p.n_states();
  if (n_states > 4) {
    throw std::invalid_argument("enumerate_two_message limited to four states");
  }
  if (k_per_dim < 2) throw std::invalid_argument("k_per_dim too small");

  const int M = mech.n_messages();
  TwoMessageEnumeration out;
  out.min_payoff = std::numeric_limits<double>::infinity();
  out.max_payoff = -out.min_payoff;

  const double step = 1.0 / (k_per_dim - 1);
  std::vector<int> idx(n_states, 0);

  for (int a = 0; a < M; ++a) {
    for (int b = a + 1; b < M; ++b) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        double pa = 0.0;
        for (int s = 0; s < n_states; ++s) pa += idx[s] * step * p.prior.p[s];
        if (pa > kOnPathEps && pa < 1.0 - kOnPathEps) {
          std::vector<std::vector<double>> sigma_a(
              n_states, std::vector<double>(M, 0.0));
          for (int s = 0; s < n_states; ++s) {
            sigma_a[s][a] = idx[s] * step;
            sigma_a[s][b] = 1.0 - idx[s] * step;
          }
          if (auto profile = find_ao_profile(sp, mech, sigma_a, tol)) {
            EquilibriumReport rep = verify_equilibrium(sp, mech, *profile, tol);
            if (rep.ok()) {
              out.feasible.push_back({*profile, rep.principal_payoff, a, b});
              out.min_payoff = std::min(out.min_payoff, rep.principal_payoff);
              out.max_payoff = std::max(out.max_payoff, rep.principal_payoff);
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
    }
  }

  out.empty = out.feasible.empty();
  if (out.empty) {
    auto [v_b, u_rho] = no_comm(sp);
    out.min_payoff = out.max_payoff = v_b;
  }
  return out;
}

// ---------------------------------------------------------------------------
// chi_limit_probe

ChiLimitProbe chi_limit_probe(const SampledProblem& sp,
                              const std::vector<Lottery>& plan,
                              const std::vector<double>& chis, int k_per_dim,
                              double tol) {
  ChiLimitProbe out;
  out.cheap_talk_bound = cheap_talk_probe(sp).v_ct;

  Mechanism mech;
  mech.committed = plan;
  for (size_t m = 0; m < plan.size(); ++m) mech.messages.push_back("m" + std::to_string(m));

  for (double chi : chis) {
    mech.chi = chi;
    TwoMessageEnumeration e = enumerate_two_message(sp, mech, k_per_dim, tol);
    out.points.push_back({chi, !e.empty, e.max_payoff});
  }
  if (!out.points.empty()) {
    out.within_bound = out.points.back().best_payoff <= out.cheap_talk_bound + 1e-6;
  }
  return out;
}

// ---------------------------------------------------------------------------
// garbled_equilibrium

namespace {

double posterior_shift(const Problem& p, const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b, int n_messages) {
  // Largest movement of any on-path posterior between the two strategies.
  auto ma = message_marginals(p, a, n_messages);
  auto mb = message_marginals(p, b, n_messages);
  double shift = 0.0;
  for (int m = 0; m < n_messages; ++m) {
    if (ma[m] <= kOnPathEps || mb[m] <= kOnPathEps) {
      if (std::abs(ma[m] - mb[m]) > kOnPathEps) shift = std::max(shift, 1.0);
      continue;
    }
    for (int s = 0; s < p.n_states(); ++s) {
      double va = p.prior.p[s] * a[s][m] / ma[m];
      double vb = p.prior.p[s] * b[s][m] / mb[m];
      shift = std::max(shift, std::abs(va - vb));
    }
  }
  return shift;
}

std::vector<std::vector<double>> apply_kappa(
    const std::vector<std::vector<double>>& sigma_ref,
    const std::vector<std::vector<double>>& kappa, int n_states, int M) {
  std::vector<std::vector<double>> out(n_states, std::vector<double>(M, 0.0));
  for (int s = 0; s < n_states; ++s) {
    for (int j = 0; j < M; ++j) {
      double v = 0.0;
      for (int m = 0; m < M; ++m) v += kappa[j][m] * sigma_ref[s][m];
      out[s][j] = v;
    }
  }
  return out;
}

}  // namespace

std::optional<GarbledWitness> garbled_equilibrium(
    const SampledProblem& sp, const Mechanism& mech,
    const std::vector<std::vector<double>>& sigma_ref, double tol) {
  const Problem& p = sp.problem();
  check_profile_shape(p, mech, sigma_ref);
  const int M = mech.n_messages();
  const int n_states = p.n_states();

  {
    auto ref_profile = find_ao_profile(sp, mech, sigma_ref, tol);
    if (!ref_profile || !verify_equilibrium(sp, mech, *ref_profile, tol).ok()) {
      throw std::invalid_argument("reference strategy is not an equilibrium");
    }
  }
  std::vector<double> ref_marg = message_marginals(p, sigma_ref, M);

  auto try_kappa =
      [&](const std::vector<std::vector<double>>& kappa) -> std::optional<GarbledWitness> {
    auto sigma = apply_kappa(sigma_ref, kappa, n_states, M);
    if (posterior_shift(p, sigma_ref, sigma, M) <= 1e-9) return std::nullopt;
    auto marg = message_marginals(p, sigma, M);
    for (double m : marg) {
      if (m > 1.0 - kPoolEps) return std::nullopt;
    }
    auto profile = find_ao_profile(sp, mech, sigma, tol);
    if (!profile) return std::nullopt;
    EquilibriumReport rep = verify_equilibrium(sp, mech, *profile, tol);
    if (!rep.ok()) return std::nullopt;
    return GarbledWitness{*profile, kappa, rep.principal_payoff};
  };

  // Family 1: uniform contraction toward the prior. Every on-path posterior
  // moves along the segment to the prior with weight lambda.
  for (int li = 1; li <= 19; ++li) {
    double lambda = li / 20.0;
    std::vector<std::vector<double>> kappa(M, std::vector<double>(M, 0.0));
    for (int j = 0; j < M; ++j) {
      for (int m = 0; m < M; ++m) {
        kappa[j][m] = lambda * ref_marg[j] + (j == m ? 1.0 - lambda : 0.0);
      }
    }
    if (auto w = try_kappa(kappa)) return w;
  }

  // Family 2: move mass from source messages into one target message.
  const int kb = 20;
  for (int target = 0; target < M; ++target) {
    if (ref_marg[target] <= kOnPathEps) continue;
    std::vector<int> sources;
    for (int m = 0; m < M; ++m) {
      if (m != target && ref_marg[m] > kOnPathEps) sources.push_back(m);
    }
    std::vector<int> beta(sources.size(), 0);
    while (true) {
      int s = 0;
      while (s < static_cast<int>(sources.size()) && ++beta[s] == kb + 1) {
        beta[s] = 0;
        ++s;
      }
      if (s == static_cast<int>(sources.size())) break;

      std::vector<std::vector<double>> kappa(M, std::vector<double>(M, 0.0));
      for (int m = 0; m < M; ++m) kappa[m][m] = 1.0;
      for (size_t k = 0; k < sources.size(); ++k) {
        double b = static_cast<double>(beta[k]) / kb;
        kappa[sources[k]][sources[k]] = 1.0 - b;
        kappa[target][sources[k]] = b;
      }
      if (auto w = try_kappa(kappa)) return w;
    }
  }
  return std::nullopt;
}

}  // namespace pcs
