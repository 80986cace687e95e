// Spread maximization: how far apart can a two-message strategy pull the
// uncommitted principal's responses, and which strategies attain the maximum.

#pragma once

#include <optional>
#include <vector>

#include "pcs/model.hpp"
#include "pcs/response.hpp"

namespace pcs {

/// Two-message strategy: per-state probability of the "yes" message.
struct BinaryStrategy {
  std::vector<double> p_yes;

  int size() const { return static_cast<int>(p_yes.size()); }
  double prob_yes(const Prior& prior) const;
  BeliefVector posterior_yes(const Prior& prior) const;
  BeliefVector posterior_no(const Prior& prior) const;

  /// Message labels swapped: p -> 1-p.
  BinaryStrategy swapped() const;

  /// Both messages on path: 0 < P(yes) < 1.
  void validate(const Prior& prior) const;
};

/// Spread of one strategy, with the extreme best-response selections that
/// attain it. When a response set is tied the selection-maximizing extremes
/// are used, implementing the sup over principal selections.
struct SpreadEval {
  double delta = 0.0;
  double u_yes = 0.0;
  double u_no = 0.0;
  ResponseSet r_yes;
  ResponseSet r_no;
};

SpreadEval spread(const SampledProblem& sp, const BinaryStrategy& sigma);

/// One representative of the maximal-spread set.
struct PolarizingRep {
  BinaryStrategy sigma;   // canonical orientation: u_yes >= u_no
  double delta = 0.0;
  double u_yes = 0.0;
  double u_no = 0.0;
  double prob_yes = 0.0;
};

struct PolarizeResult {
  double delta_bar = 0.0;
  std::vector<PolarizingRep> representatives;

  // Separation structure of the first representative.
  int target_state = -1;           // state isolated by "yes"
  int link_state = -1;             // -1 when absent
  double link_weight = 0.0;        // sigma(yes | link state)

  double u_yes_star = 0.0;
  double u_no_star = 0.0;

  bool payoff_pair_unique = true;  // all representatives share one payoff pair
  bool sigma_unique = true;        // single representative after dedup
  bool plateau = false;            // spread tied across a range of strategies
};

/// Structured search over candidate strategies with one isolated target state
/// and an optional mixing link state, plus one golden-section refinement of
/// the mixing weight. Ties snap to the endpoints of the weight range so that
/// clean separations are reported exactly.
PolarizeResult find_polarizing(const SampledProblem& sp, int t_resolution = 2001);

/// Exhaustive oracle over a k-grid of per-state message probabilities.
/// Only intended for n <= 4.
double brute_force_spread(const SampledProblem& sp, int k_per_dim);

}  // namespace pcs
