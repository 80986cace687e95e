// Upper concave envelopes of sampled curves and the two-point lotteries that
// realize interior envelope values.

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "pcs/model.hpp"

namespace pcs {

/// Lottery over at most two agent-payoff levels.
struct Lottery {
  std::array<double, 2> levels{0.0, 0.0};
  std::array<double, 2> weights{1.0, 0.0};
  int support = 1;

  static Lottery point(double level);
  static Lottery two_point(double lo, double hi, double weight_lo);

  double mean() const;
  double expect(const PayoffCurve& curve) const;
};

/// Upper concave envelope of a curve sampled on a grid.
///
/// `values[i] >= base[i]` everywhere, values are concave across the grid, and
/// the hull vertices are the contact points where envelope and curve agree.
struct Envelope {
  Grid grid;
  std::vector<double> base;
  std::vector<double> values;
  std::vector<int> hull;  // ascending grid indices of contact points

  double value_at(double u) const;  // piecewise-linear between hull vertices
};

/// Monotone-chain upper hull of the sample set, O(N). Collinear interior
/// points are dropped; the extreme points of a flat stretch stay vertices.
Envelope concave_envelope(const PayoffCurve& curve, const Grid& grid);
Envelope concave_envelope(std::vector<double> samples, const Grid& grid);

/// Lottery on the hull vertices bracketing `u`, with mean exactly `u`.
/// Degenerate single-point lottery when `u` hits a vertex.
Lottery hull_lottery(const Envelope& env, double u);

/// Plot data: one "u,gamma,gamma_co" row per grid point.
void write_envelope_csv(std::ostream& os, const Envelope& env);

}  // namespace pcs
