#include "pcs/response.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pcs {

std::vector<double> ResponseSet::representatives() const {
  std::vector<double> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.arg);
  return out;
}

ResponseSet best_response(const SampledProblem& sp, const BeliefVector& mu,
                          double tie_tol) {
  const int n_states = sp.problem().n_states();
  if (mu.size() != n_states) {
    throw std::invalid_argument("belief dimension does not match problem");
  }
  const int n = sp.grid().size();

  // Objective scan. Beliefs are usually sparse-ish, so skip zero weights.
  std::vector<double> obj(n, 0.0);
  for (int s = 0; s < n_states; ++s) {
    const double w = mu.p[s];
    if (w == 0.0) continue;
    const auto& ys = sp.state_samples(s);
    for (int i = 0; i < n; ++i) obj[i] += w * ys[i];
  }

  double best = obj[0];
  for (int i = 1; i < n; ++i) best = std::max(best, obj[i]);

  ResponseSet rs;
  rs.value = best;
  const double cut = best - tie_tol;
  int i = 0;
  while (i < n) {
    if (obj[i] < cut) {
      ++i;
      continue;
    }
    int lo = i;
    int arg = i;
    double arg_val = obj[i];
    while (i < n && obj[i] >= cut) {
      if (obj[i] > arg_val) {
        arg_val = obj[i];
        arg = i;
      }
      ++i;
    }
    int hi = i - 1;
    rs.clusters.push_back({lo, hi, arg, sp.grid().point(lo), sp.grid().point(hi),
                           sp.grid().point(arg)});
  }
  return rs;
}

Assumption1Report assumption1_probe(const SampledProblem& sp, int belief_samples,
                                    std::uint64_t seed) {
  if (belief_samples < 100) {
    throw std::invalid_argument("assumption1_probe needs at least 100 samples");
  }
  const int n_states = sp.problem().n_states();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);

  Assumption1Report rep;
  rep.samples = belief_samples;
  int tied = 0;
  for (int k = 0; k < belief_samples; ++k) {
    BeliefVector mu;
    mu.p.resize(n_states);
    double sum = 0.0;
    for (int s = 0; s < n_states; ++s) {
      mu.p[s] = expo(rng);
      sum += mu.p[s];
    }
    for (int s = 0; s < n_states; ++s) mu.p[s] /= sum;

    ResponseSet rs = best_response(sp, mu, sp.problem().tol.tie);
    if (rs.tied()) ++tied;
    int clusters = static_cast<int>(rs.clusters.size());
    rep.max_clusters = std::max(rep.max_clusters, clusters);
    if (clusters > 2 && !rep.violation_witness) rep.violation_witness = mu;
  }
  rep.tied_fraction = static_cast<double>(tied) / belief_samples;
  return rep;
}

}  // namespace pcs
