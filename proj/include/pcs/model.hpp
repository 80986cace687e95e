// Game primitives: states, priors, payoff curves and scenario configs.
//
// Everything here is immutable after construction and safe to share across
// threads. Payoff curves are symbolic term lists (polynomial / bump / table)
// so that scenario files are serializable and curves can be resampled on any
// grid resolution.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcs {

/// Scenario text could not be parsed. Message carries the location.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed input violates a model invariant. Message names the invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform evaluation grid on [0,1]: points i/(n-1), both endpoints included.
class Grid {
 public:
  static constexpr int kDefaultResolution = 2001;
  static constexpr int kMinResolution = 101;

  explicit Grid(int n = kDefaultResolution);

  int size() const { return n_; }
  double spacing() const { return 1.0 / (n_ - 1); }
  double point(int i) const { return static_cast<double>(i) / (n_ - 1); }
  int nearest(double u) const;
  std::vector<double> points() const;

 private:
  int n_;
};

/// One additive component of a payoff curve.
struct PayoffTerm {
  enum class Kind { Polynomial, Bump, Table };

  Kind kind = Kind::Polynomial;

  // Polynomial: coeffs[k] * u^k.
  std::vector<double> coeffs;

  // Bump: scale * exp(b^2 / (x^2 - b^2)) for |x| < b, 0 otherwise, x = u - center.
  // The value at |x| == b is defined as exactly 0 (continuous extension).
  double center = 0.0;
  double halfwidth = 0.0;
  double scale = 1.0;

  // Table: piecewise-linear through (knots, values), constant beyond the ends.
  std::vector<double> knots;
  std::vector<double> values;

  static PayoffTerm polynomial(std::vector<double> coeffs);
  static PayoffTerm bump(double center, double halfwidth, double scale = 1.0);
  static PayoffTerm table(std::vector<double> knots, std::vector<double> values);

  double eval(double u) const;
  void validate() const;
};

/// A state's mutual payoff gamma(u): principal payoff from the action giving
/// the agent payoff u. Sum of terms; evaluable anywhere on [0,1].
class PayoffCurve {
 public:
  PayoffCurve() = default;
  explicit PayoffCurve(std::vector<PayoffTerm> terms);

  const std::vector<PayoffTerm>& terms() const { return terms_; }

  /// Throws std::domain_error outside [0,1] (tiny slack for float drift).
  double eval(double u) const;

  std::vector<double> sample(const Grid& grid) const;

  /// Conservative bound on |gamma'| over [0,1]; used for test tolerances.
  double lipschitz_bound() const;

  PayoffCurve scaled(double w) const;

  /// Pointwise convex combination sum_i w[i] * curves[i].
  static PayoffCurve mix(const std::vector<const PayoffCurve*>& curves,
                         const std::vector<double>& weights);

 private:
  std::vector<PayoffTerm> terms_;
};

struct StateSpace {
  std::vector<std::string> labels;

  int count() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;  // -1 if absent
  void validate() const;
};

struct Prior {
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  void validate() const;  // strictly positive entries, sums to 1 within 1e-12
};

/// Posterior belief over states. Non-negative, sums to 1 within 1e-12.
struct BeliefVector {
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  void validate() const;
  static BeliefVector degenerate(int n, int state);
};

/// Presentation-only map from agent payoff u back to the action a achieving
/// it (inverse of the agent utility). Strictly increasing in u.
struct ActionMap {
  std::vector<double> u_knots;  // covers [0,1], strictly increasing
  std::vector<double> a_values;

  double action_for(double u) const;  // piecewise-linear interpolation
  void validate() const;
};

struct Tolerances {
  double tie = 1e-9;   // response-set tie tolerance (absolute, on payoffs)
  double ao = 1e-6;    // agent-optimality slack in equilibrium checks
};

/// The complete game primitive: states, prior, one mutual-payoff curve per
/// state, optional action map for presentation.
struct Problem {
  StateSpace states;
  Prior prior;
  std::vector<PayoffCurve> gamma;
  std::optional<ActionMap> action_map;
  Tolerances tol;
  int grid_hint = Grid::kDefaultResolution;

  int n_states() const { return states.count(); }
  void validate() const;
};

/// Parses a JSON scenario config. Throws ParseError / ValidationError.
Problem load_problem(const std::string& config_text);

/// Canonical JSON text; load_problem(serialize_problem(p)) reparses to an
/// identical problem.
std::string serialize_problem(const Problem& p);

/// Per-state curve samples on a fixed grid, shared by the solver modules.
class SampledProblem {
 public:
  SampledProblem(Problem problem, Grid grid);

  const Problem& problem() const { return problem_; }
  const Grid& grid() const { return grid_; }
  const std::vector<double>& state_samples(int state) const { return samples_[state]; }

 private:
  Problem problem_;
  Grid grid_;
  std::vector<std::vector<double>> samples_;
};

}  // namespace pcs
