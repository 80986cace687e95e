#include "pcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace pcs {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kDomainSlack = 1e-12;

using json = nlohmann::ordered_json;

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(int n) : n_(n) {
  if (n < kMinResolution) {
    throw ValidationError("grid resolution must be at least " +
                          std::to_string(kMinResolution));
  }
}

int Grid::nearest(double u) const {
  int i = static_cast<int>(std::lround(u * (n_ - 1)));
  return std::clamp(i, 0, n_ - 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = point(i);
  return out;
}

// ---------------------------------------------------------------------------
// PayoffTerm

PayoffTerm PayoffTerm::polynomial(std::vector<double> coeffs) {
  PayoffTerm t;
  t.kind = Kind::Polynomial;
  t.coeffs = std::move(coeffs);
  t.validate();
  return t;
}

PayoffTerm PayoffTerm::bump(double center, double halfwidth, double scale) {
  PayoffTerm t;
  t.kind = Kind::Bump;
  t.center = center;
  t.halfwidth = halfwidth;
  t.scale = scale;
  t.validate();
  return t;
}

PayoffTerm PayoffTerm::table(std::vector<double> knots, std::vector<double> values) {
  PayoffTerm t;
  t.kind = Kind::Table;
  t.knots = std::move(knots);
  t.values = std::move(values);
  t.validate();
  return t;
}

void PayoffTerm::validate() const {
  switch (kind) {
    case Kind::Polynomial:
      if (coeffs.empty()) throw ValidationError("polynomial term has no coefficients");
      break;
    case Kind::Bump:
      if (!(halfwidth > 0.0)) throw ValidationError("bump halfwidth must be positive");
      break;
    case Kind::Table: {
      if (knots.size() < 2 || knots.size() != values.size()) {
        throw ValidationError("table term needs matching knots/values, at least two");
      }
      for (size_t i = 0; i < knots.size(); ++i) {
        if (knots[i] < -kDomainSlack || knots[i] > 1.0 + kDomainSlack) {
          throw ValidationError("table knots must lie in [0,1]");
        }
        if (i > 0 && !(knots[i] > knots[i - 1])) {
          throw ValidationError("table knots must be strictly increasing");
        }
      }
      break;
    }
  }
}

double PayoffTerm::eval(double u) const {
  switch (kind) {
    case Kind::Polynomial: {
      double v = 0.0;
      for (size_t k = coeffs.size(); k-- > 0;) v = v * u + coeffs[k];
      return v;
    }
    case Kind::Bump: {
      const double x = u - center;
      const double b = halfwidth;
      if (std::abs(x) >= b) return 0.0;
      return scale * std::exp(b * b / (x * x - b * b));
    }
    case Kind::Table: {
      if (u <= knots.front()) return values.front();
      if (u >= knots.back()) return values.back();
      auto it = std::upper_bound(knots.begin(), knots.end(), u);
      size_t hi = static_cast<size_t>(it - knots.begin());
      size_t lo = hi - 1;
      double t = (u - knots[lo]) / (knots[hi] - knots[lo]);
      return values[lo] + t * (values[hi] - values[lo]);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// PayoffCurve

PayoffCurve::PayoffCurve(std::vector<PayoffTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) t.validate();
}

double PayoffCurve::eval(double u) const {
  if (u < -kDomainSlack || u > 1.0 + kDomainSlack) {
    throw std::domain_error("curve evaluated outside [0,1]: u=" + std::to_string(u));
  }
  u = std::clamp(u, 0.0, 1.0);
  double v = 0.0;
  for (const auto& t : terms_) v += t.eval(u);
  return v;
}

std::vector<double> PayoffCurve::sample(const Grid& grid) const {
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.size(); ++i) out[i] = eval(grid.point(i));
  return out;
}

double PayoffCurve::lipschitz_bound() const {
  double bound = 0.0;
  for (const auto& t : terms_) {
    switch (t.kind) {
      case PayoffTerm::Kind::Polynomial: {
        double b = 0.0;
        for (size_t k = 1; k < t.coeffs.size(); ++k) {
          b += static_cast<double>(k) * std::abs(t.coeffs[k]);
        }
        bound += b;
        break;
      }
      case PayoffTerm::Kind::Bump: {
        // Numeric bound on |d/dx exp(b^2/(x^2-b^2))|; exact form is messy.
        const int kProbe = 4001;
        double worst = 0.0;
        for (int i = 0; i < kProbe; ++i) {
          double x = -t.halfwidth + 2.0 * t.halfwidth * i / (kProbe - 1);
          double d = x * x - t.halfwidth * t.halfwidth;
          if (d >= 0.0) continue;
          double g = t.halfwidth * t.halfwidth / d;
          double gprime = -2.0 * x * t.halfwidth * t.halfwidth / (d * d);
          worst = std::max(worst, std::abs(std::exp(g) * gprime));
        }
        bound += std::abs(t.scale) * worst * 1.5;
        break;
      }
      case PayoffTerm::Kind::Table: {
        double b = 0.0;
        for (size_t i = 1; i < t.knots.size(); ++i) {
          b = std::max(b, std::abs(t.values[i] - t.values[i - 1]) /
                              (t.knots[i] - t.knots[i - 1]));
        }
        bound += b;
        break;
      }
    }
  }
  return bound;
}

PayoffCurve PayoffCurve::scaled(double w) const {
  std::vector<PayoffTerm> out;
  out.reserve(terms_.size());
  for (PayoffTerm t : terms_) {
    switch (t.kind) {
      case PayoffTerm::Kind::Polynomial:
        for (auto& c : t.coeffs) c *= w;
        break;
      case PayoffTerm::Kind::Bump:
        t.scale *= w;
        break;
      case PayoffTerm::Kind::Table:
        for (auto& v : t.values) v *= w;
        break;
    }
    out.push_back(std::move(t));
  }
  return PayoffCurve(std::move(out));
}

PayoffCurve PayoffCurve::mix(const std::vector<const PayoffCurve*>& curves,
                             const std::vector<double>& weights) {
  if (curves.size() != weights.size()) {
    throw std::invalid_argument("mix: curves/weights size mismatch");
  }
  std::vector<PayoffTerm> terms;
  for (size_t i = 0; i < curves.size(); ++i) {
    if (weights[i] == 0.0) continue;
    PayoffCurve s = curves[i]->scaled(weights[i]);
    for (auto& t : s.terms()) terms.push_back(t);
  }
  if (terms.empty()) terms.push_back(PayoffTerm::polynomial({0.0}));
  return PayoffCurve(std::move(terms));
}

// ---------------------------------------------------------------------------
// StateSpace / Prior / BeliefVector / ActionMap

int StateSpace::index_of(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

void StateSpace::validate() const {
  if (labels.size() < 2) throw ValidationError("need at least two states");
  for (size_t i = 0; i < labels.size(); ++i) {
    for (size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) {
        throw ValidationError("state labels must be unique: " + labels[i]);
      }
    }
  }
}

void Prior::validate() const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0)) throw ValidationError("prior entries must be strictly positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw ValidationError("prior does not sum to 1");
  }
}

void BeliefVector::validate() const {
  double sum = 0.0;
  for (double v : p) {
    if (v < -kSumTol) throw ValidationError("belief entries must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("belief does not sum to 1");
  }
}

BeliefVector BeliefVector::degenerate(int n, int state) {
  BeliefVector b;
  b.p.assign(n, 0.0);
  b.p[state] = 1.0;
  return b;
}

double ActionMap::action_for(double u) const {
  if (u <= u_knots.front()) return a_values.front();
  if (u >= u_knots.back()) return a_values.back();
  auto it = std::upper_bound(u_knots.begin(), u_knots.end(), u);
  size_t hi = static_cast<size_t>(it - u_knots.begin());
  size_t lo = hi - 1;
  double t = (u - u_knots[lo]) / (u_knots[hi] - u_knots[lo]);
  return a_values[lo] + t * (a_values[hi] - a_values[lo]);
}

void ActionMap::validate() const {
  if (u_knots.size() < 2 || u_knots.size() != a_values.size()) {
    throw ValidationError("action_map needs matching u/a arrays, at least two");
  }
  if (std::abs(u_knots.front()) > kSumTol || std::abs(u_knots.back() - 1.0) > kSumTol) {
    throw ValidationError("action_map u-knots must span [0,1]");
  }
  for (size_t i = 1; i < u_knots.size(); ++i) {
    if (!(u_knots[i] > u_knots[i - 1]) || !(a_values[i] > a_values[i - 1])) {
      throw ValidationError("action_map must be strictly increasing");
    }
  }
}

// ---------------------------------------------------------------------------
// Problem

void Problem::validate() const {
  states.validate();
  prior.validate();
  if (prior.size() != states.count()) {
    throw ValidationError("prior length does not match state count");
  }
  if (gamma.size() != static_cast<size_t>(states.count())) {
    throw ValidationError("need exactly one payoff curve per state");
  }
  for (const auto& c : gamma) {
    if (c.terms().empty()) throw ValidationError("payoff curve has no terms");
  }
  if (action_map) action_map->validate();
  if (grid_hint < Grid::kMinResolution) {
    throw ValidationError("grid resolution must be at least " +
                          std::to_string(Grid::kMinResolution));
  }
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

PayoffTerm term_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ParseError("payoff term must be an object with a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "polynomial") {
    return PayoffTerm::polynomial(j.at("coeffs").get<std::vector<double>>());
  }
  if (kind == "bump") {
    return PayoffTerm::bump(j.at("center").get<double>(),
                            j.at("halfwidth").get<double>(),
                            j.value("scale", 1.0));
  }
  if (kind == "table") {
    return PayoffTerm::table(j.at("knots").get<std::vector<double>>(),
                             j.at("values").get<std::vector<double>>());
  }
  throw ParseError("unknown payoff term kind: " + kind);
}

json term_to_json(const PayoffTerm& t) {
  json j;
  switch (t.kind) {
    case PayoffTerm::Kind::Polynomial:
      j["kind"] = "polynomial";
      j["coeffs"] = t.coeffs;
      break;
    case PayoffTerm::Kind::Bump:
      j["kind"] = "bump";
      j["center"] = t.center;
      j["halfwidth"] = t.halfwidth;
      j["scale"] = t.scale;
      break;
    case PayoffTerm::Kind::Table:
      j["kind"] = "table";
      j["knots"] = t.knots;
      j["values"] = t.values;
      break;
  }
  return j;
}

}  // namespace

Problem load_problem(const std::string& config_text) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }

  Problem p;
  try {
    p.states.labels = j.at("states").get<std::vector<std::string>>();
    p.prior.p = j.at("prior").get<std::vector<double>>();

    const auto& g = j.at("gamma");
    if (!g.is_object()) throw ParseError("'gamma' must map state labels to term lists");
    p.gamma.resize(p.states.labels.size());
    std::vector<bool> seen(p.states.labels.size(), false);
    for (auto it = g.begin(); it != g.end(); ++it) {
      int idx = p.states.index_of(it.key());
      if (idx < 0) throw ValidationError("gamma given for unknown state: " + it.key());
      std::vector<PayoffTerm> terms;
      for (const auto& tj : it.value()) terms.push_back(term_from_json(tj));
      p.gamma[idx] = PayoffCurve(std::move(terms));
      seen[idx] = true;
    }
    for (size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) throw ValidationError("missing gamma for state: " + p.states.labels[i]);
    }

    if (j.contains("grid")) p.grid_hint = j.at("grid").value("n", Grid::kDefaultResolution);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      p.tol.tie = t.value("tie", p.tol.tie);
      p.tol.ao = t.value("ao", p.tol.ao);
    }
    if (j.contains("action_map")) {
      ActionMap am;
      am.u_knots = j.at("action_map").at("u").get<std::vector<double>>();
      am.a_values = j.at("action_map").at("a").get<std::vector<double>>();
      p.action_map = std::move(am);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }

  p.validate();
  return p;
}

std::string serialize_problem(const Problem& p) {
  json j;
  j["states"] = p.states.labels;
  j["prior"] = p.prior.p;
  json g = json::object();
  for (int s = 0; s < p.n_states(); ++s) {
    json terms = json::array();
    for (const auto& t : p.gamma[s].terms()) terms.push_back(term_to_json(t));
    g[p.states.labels[s]] = terms;
  }
  j["gamma"] = g;
  j["grid"] = {{"n", p.grid_hint}};
  j["tolerances"] = {{"tie", p.tol.tie}, {"ao", p.tol.ao}};
  if (p.action_map) {
    j["action_map"] = {{"u", p.action_map->u_knots}, {"a", p.action_map->a_values}};
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// SampledProblem

SampledProblem::SampledProblem(Problem problem, Grid grid)
    : problem_(std::move(problem)), grid_(grid) {
  problem_.validate();
  samples_.reserve(problem_.n_states());
  for (int s = 0; s < problem_.n_states(); ++s) {
    samples_.push_back(problem_.gamma[s].sample(grid_));
  }
}

}  // namespace pcs
