// Uncommitted principal's best responses in agent-payoff space.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcs/model.hpp"

namespace pcs {

/// Maximizer set of sum_th mu(th) * gamma_th(u) over the grid, organized as
/// maximal runs of grid points whose objective lies within the tie tolerance
/// of the maximum.
struct ResponseSet {
  struct Cluster {
    int lo_index;
    int hi_index;
    int arg_index;   // exact grid argmax inside the run
    double lo;       // grid.point(lo_index)
    double hi;
    double arg;
  };

  std::vector<Cluster> clusters;
  double value = 0.0;

  bool tied() const {
    return clusters.size() > 1 ||
           (!clusters.empty() && clusters.front().hi_index > clusters.front().lo_index);
  }
  double min_u() const { return clusters.front().lo; }
  double max_u() const { return clusters.back().hi; }
  std::vector<double> representatives() const;
};

ResponseSet best_response(const SampledProblem& sp, const BeliefVector& mu,
                          double tie_tol);

/// Scan of random simplex beliefs checking how often the best response is
/// non-unique, and whether any belief produces more than two maximizer
/// clusters.
struct Assumption1Report {
  int samples = 0;
  double tied_fraction = 0.0;
  int max_clusters = 0;
  std::optional<BeliefVector> violation_witness;  // belief with > 2 clusters
  bool ok() const { return !violation_witness.has_value(); }
};

Assumption1Report assumption1_probe(const SampledProblem& sp, int belief_samples,
                                    std::uint64_t seed);

}  // namespace pcs
