#include "pcs/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pcs {

// ---------------------------------------------------------------------------
// Lottery

Lottery Lottery::point(double level) {
  Lottery l;
  l.levels = {level, level};
  l.weights = {1.0, 0.0};
  l.support = 1;
  return l;
}

Lottery Lottery::two_point(double lo, double hi, double weight_lo) {
  if (weight_lo < 0.0 || weight_lo > 1.0) {
    throw std::invalid_argument("lottery weight outside [0,1]");
  }
  Lottery l;
  l.levels = {lo, hi};
  l.weights = {weight_lo, 1.0 - weight_lo};
  l.support = 2;
  return l;
}

double Lottery::mean() const {
  if (support == 1) return levels[0];
  return weights[0] * levels[0] + weights[1] * levels[1];
}

double Lottery::expect(const PayoffCurve& curve) const {
  if (support == 1) return curve.eval(levels[0]);
  return weights[0] * curve.eval(levels[0]) + weights[1] * curve.eval(levels[1]);
}

// ---------------------------------------------------------------------------
// Envelope

double Envelope::value_at(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  // Find bracketing hull vertices by u-coordinate.
  int lo = 0;
  int hi = static_cast<int>(hull.size()) - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (grid.point(hull[mid]) <= u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double ua = grid.point(hull[lo]);
  double ub = grid.point(hull[hi]);
  if (ub <= ua) return base[hull[lo]];
  double t = (u - ua) / (ub - ua);
  return base[hull[lo]] + t * (base[hull[hi]] - base[hull[lo]]);
}

Envelope concave_envelope(const PayoffCurve& curve, const Grid& grid) {
  return concave_envelope(curve.sample(grid), grid);
}

Envelope concave_envelope(std::vector<double> samples, const Grid& grid) {
  const int n = grid.size();
  if (static_cast<int>(samples.size()) != n) {
    throw std::invalid_argument("sample count does not match grid");
  }

  // Upper hull sweep. cross >= 0 means the middle point lies on or below the
  // chord, so it is not a vertex.
  std::vector<int> hull;
  hull.reserve(64);
  for (int i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2];
      int b = hull[hull.size() - 1];
      double cross = (grid.point(b) - grid.point(a)) * (samples[i] - samples[a]) -
                     (samples[b] - samples[a]) * (grid.point(i) - grid.point(a));
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }

  Envelope env{grid, std::move(samples), {}, std::move(hull)};
  env.values.resize(n);
  for (size_t k = 0; k + 1 < env.hull.size(); ++k) {
    int a = env.hull[k];
    int b = env.hull[k + 1];
    double ya = env.base[a];
    double yb = env.base[b];
    for (int i = a; i <= b; ++i) {
      double t = static_cast<double>(i - a) / (b - a);
      env.values[i] = ya + t * (yb - ya);
    }
  }
  if (env.hull.size() == 1) env.values[env.hull[0]] = env.base[env.hull[0]];
  // Contact points are exact by construction.
  for (int v : env.hull) env.values[v] = env.base[v];
  return env;
}

Lottery hull_lottery(const Envelope& env, double u) {
  if (u < -1e-12 || u > 1.0 + 1e-12) {
    throw std::domain_error("hull_lottery target outside [0,1]");
  }
  u = std::clamp(u, 0.0, 1.0);

  const auto& hull = env.hull;
  int lo = 0;
  int hi = static_cast<int>(hull.size()) - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (env.grid.point(hull[mid]) <= u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double ua = env.grid.point(hull[lo]);
  double ub = env.grid.point(hull[hi]);

  constexpr double kVertexSnap = 1e-12;
  if (std::abs(u - ua) <= kVertexSnap || hi == lo) return Lottery::point(ua);
  if (std::abs(u - ub) <= kVertexSnap) return Lottery::point(ub);

  double weight_lo = (ub - u) / (ub - ua);
  return Lottery::two_point(ua, ub, weight_lo);
}

void write_envelope_csv(std::ostream& os, const Envelope& env) {
  os << "u,gamma,gamma_co\n";
  char buf[128];
  for (int i = 0; i < env.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", env.grid.point(i),
                  env.base[i], env.values[i]);
    os << buf;
  }
}

}  // namespace pcs
