#include "pcs/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace pcs {

namespace {

// 0.02 * (1 - (u - c)^2 / s) expanded into polynomial coefficients.
PayoffTerm insurance_quadratic(double c, double s) {
  const double k = 0.02 / s;
  return PayoffTerm::polynomial({0.02 - k * c * c, 2.0 * k * c, -k});
}

PayoffCurve insurance_curve(double center, double halfwidth, double quad_span) {
  return PayoffCurve({insurance_quadratic(center, quad_span),
                      PayoffTerm::bump(center, halfwidth)});
}

ActionMap sqrt_utility_action_map() {
  // Agent utility u = sqrt(a), so the action delivering u is a = u^2.
  const int kKnots = 201;
  ActionMap am;
  am.u_knots.reserve(kKnots);
  am.a_values.reserve(kKnots);
  for (int i = 0; i < kKnots; ++i) {
    double u = static_cast<double>(i) / (kKnots - 1);
    am.u_knots.push_back(u);
    am.a_values.push_back(u * u);
  }
  return am;
}

Problem make_audit(double rho) {
  if (!(rho > 0.0 && rho < 0.5)) {
    throw ValidationError("audit scenario needs 0 < rho < 0.5");
  }
  Problem p;
  p.states.labels = {"l", "h"};
  p.prior.p = {1.0 - rho, rho};
  p.gamma = {PayoffCurve({PayoffTerm::polynomial({1.0, 0.0, -1.0})}),   // 1 - u^2
             PayoffCurve({PayoffTerm::polynomial({0.0, 0.0, 1.0})})};   // u^2
  p.action_map = sqrt_utility_action_map();
  p.validate();
  return p;
}

Problem make_binary_naive() {
  // Quadratic-loss principal: best response to belief mu on the high state
  // is u = mu, strictly increasing from 0 to 1.
  Problem p;
  p.states.labels = {"l", "h"};
  p.prior.p = {0.5, 0.5};
  p.gamma = {PayoffCurve({PayoffTerm::polynomial({1.0, 0.0, -1.0})}),    // 1 - u^2
             PayoffCurve({PayoffTerm::polynomial({0.0, 2.0, -1.0})})};   // 1 - (1-u)^2
  p.validate();
  return p;
}

Problem make_insurance3(bool concave_h) {
  Problem p;
  p.states.labels = {"l", "m", "h"};
  p.prior.p = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  p.gamma.push_back(insurance_curve(0.1, 0.4, 0.81));
  p.gamma.push_back(insurance_curve(0.5, 0.5, 0.25));
  if (concave_h) {
    // 0.5 - (1-u)^2
    p.gamma.push_back(PayoffCurve({PayoffTerm::polynomial({-0.5, 2.0, -1.0})}));
  } else {
    p.gamma.push_back(insurance_curve(0.9, 0.6, 0.81));
  }
  p.validate();
  return p;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"audit", "insurance3", "insurance3-concave-h", "binary-naive"};
}

bool is_builtin_scenario(const std::string& name) {
  for (const auto& n : builtin_scenario_names()) {
    if (n == name) return true;
  }
  return false;
}

Problem builtin_scenario(const std::string& name, double rho) {
  if (name == "audit") return make_audit(rho < 0.0 ? 0.3 : rho);
  if (name == "insurance3") return make_insurance3(false);
  if (name == "insurance3-concave-h") return make_insurance3(true);
  if (name == "binary-naive") return make_binary_naive();
  throw ValidationError("unknown builtin scenario: " + name);
}

Problem audit3_fixture() {
  Problem p;
  p.states.labels = {"h", "i", "l"};
  p.prior.p = {0.25, 0.25, 0.5};
  p.gamma = {PayoffCurve({PayoffTerm::polynomial({0.0, 0.0, 1.0})}),    // u^2
             PayoffCurve({PayoffTerm::polynomial({0.75, 1.0, -1.0})}),  // 1 - (u-0.5)^2
             PayoffCurve({PayoffTerm::polynomial({1.0, 0.0, -1.0})})};  // 1 - u^2
  p.validate();
  return p;
}

}  // namespace pcs
