#include "pcs/polarize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcs {

namespace {

constexpr double kOnPathEps = 1e-12;
constexpr double kRepTol = 1e-9;    // spread tie window for representatives
constexpr double kSigmaTol = 1e-2;  // strategy dedup, limited by grid resolution

struct Candidate {
  int target;
  int link;  // -1 for none
  double t;
  SpreadEval eval;
};

BinaryStrategy structured_sigma(int n, int target, int link, double t) {
  BinaryStrategy s;
  s.p_yes.assign(n, 0.0);
  s.p_yes[target] = 1.0;
  if (link >= 0) s.p_yes[link] = t;
  return s;
}

bool on_path_both(const BinaryStrategy& s, const Prior& prior) {
  double py = s.prob_yes(prior);
  return py > kOnPathEps && py < 1.0 - kOnPathEps;
}

}  // namespace

// ---------------------------------------------------------------------------
// BinaryStrategy

double BinaryStrategy::prob_yes(const Prior& prior) const {
  double v = 0.0;
  for (size_t s = 0; s < p_yes.size(); ++s) v += p_yes[s] * prior.p[s];
  return v;
}

BeliefVector BinaryStrategy::posterior_yes(const Prior& prior) const {
  double py = prob_yes(prior);
  BeliefVector mu;
  mu.p.resize(p_yes.size());
  for (size_t s = 0; s < p_yes.size(); ++s) mu.p[s] = p_yes[s] * prior.p[s] / py;
  return mu;
}

BeliefVector BinaryStrategy::posterior_no(const Prior& prior) const {
  double pn = 1.0 - prob_yes(prior);
  BeliefVector mu;
  mu.p.resize(p_yes.size());
  for (size_t s = 0; s < p_yes.size(); ++s) {
    mu.p[s] = (1.0 - p_yes[s]) * prior.p[s] / pn;
  }
  return mu;
}

BinaryStrategy BinaryStrategy::swapped() const {
  BinaryStrategy s;
  s.p_yes.reserve(p_yes.size());
  for (double v : p_yes) s.p_yes.push_back(1.0 - v);
  return s;
}

void BinaryStrategy::validate(const Prior& prior) const {
  if (p_yes.size() != static_cast<size_t>(prior.size())) {
    throw std::invalid_argument("strategy dimension does not match prior");
  }
  for (double v : p_yes) {
    if (v < -kOnPathEps || v > 1.0 + kOnPathEps) {
      throw ValidationError("message probabilities must lie in [0,1]");
    }
  }
  if (!on_path_both(*this, prior)) {
    throw ValidationError("degenerate strategy: a message is off path");
  }
}

// ---------------------------------------------------------------------------
// spread

SpreadEval spread(const SampledProblem& sp, const BinaryStrategy& sigma) {
  const Prior& prior = sp.problem().prior;
  sigma.validate(prior);

  SpreadEval ev;
  ev.r_yes = best_response(sp, sigma.posterior_yes(prior), sp.problem().tol.tie);
  ev.r_no = best_response(sp, sigma.posterior_no(prior), sp.problem().tol.tie);

  const double up = ev.r_yes.max_u() - ev.r_no.min_u();
  const double down = ev.r_no.max_u() - ev.r_yes.min_u();
  if (up >= down) {
    ev.delta = up;
    ev.u_yes = ev.r_yes.max_u();
    ev.u_no = ev.r_no.min_u();
  } else {
    ev.delta = down;
    ev.u_yes = ev.r_yes.min_u();
    ev.u_no = ev.r_no.max_u();
  }
  ev.delta = std::max(ev.delta, 0.0);
  return ev;
}

// ---------------------------------------------------------------------------
// find_polarizing

PolarizeResult find_polarizing(const SampledProblem& sp, int t_resolution) {
  const Problem& p = sp.problem();
  const Prior& prior = p.prior;
  const int n = p.n_states();
  if (t_resolution < 3) throw std::invalid_argument("t_resolution too small");

  auto eval_candidate = [&](int target, int link, double t) -> std::optional<Candidate> {
    BinaryStrategy s = structured_sigma(n, target, link, t);
    if (!on_path_both(s, prior)) return std::nullopt;
    return Candidate{target, link, t, spread(sp, s)};
  };

  // Coarse pass per (target, link) family, golden-section refinement of the
  // link weight, then a snap back to the clean endpoints t=0 / t=1 whenever
  // they tie the refined optimum. The snap keeps clean separations (and the
  // strategies equivalent to them up to message relabeling) reported in one
  // canonical form.
  std::vector<Candidate> family_best;
  bool plateau = false;
  const double step = 1.0 / (t_resolution - 1);

  for (int target = 0; target < n; ++target) {
    for (int link = -1; link < n; ++link) {
      if (link == target) continue;

      std::optional<Candidate> best;
      if (link < 0) {
        best = eval_candidate(target, -1, 0.0);
      } else {
        int ties = 0;
        for (int ti = 0; ti < t_resolution; ++ti) {
          auto c = eval_candidate(target, link, ti * step);
          if (!c) continue;
          if (!best || c->eval.delta > best->eval.delta + 1e-15) {
            best = c;
            ties = 0;
          } else if (c->eval.delta >= best->eval.delta - 1e-15) {
            ++ties;
          }
        }
        if (ties > 0) plateau = true;

        if (best) {
          double a = std::max(0.0, best->t - step);
          double b = std::min(1.0, best->t + step);
          const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
          auto val = [&](double t) {
            auto c = eval_candidate(target, link, t);
            return c ? c->eval.delta : -1.0;
          };
          double x1 = b - gr * (b - a);
          double x2 = a + gr * (b - a);
          double f1 = val(x1), f2 = val(x2);
          for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
            if (f1 < f2) {
              a = x1;
              x1 = x2;
              f1 = f2;
              x2 = a + gr * (b - a);
              f2 = val(x2);
            } else {
              b = x2;
              x2 = x1;
              f2 = f1;
              x1 = b - gr * (b - a);
              f1 = val(x1);
            }
          }
          double t_ref = (f1 >= f2) ? x1 : x2;
          if (auto refined = eval_candidate(target, link, t_ref);
              refined && refined->eval.delta > best->eval.delta) {
            best = refined;
          }

          // Snap to a clean endpoint when it ties the refined optimum.
          bool snapped = false;
          for (double t_end : {0.0, 1.0}) {
            auto c = eval_candidate(target, link, t_end);
            if (c && c->eval.delta >= best->eval.delta - 1e-12) {
              best = c;
              snapped = true;
            }
          }

          // The grid quantizes the spread, so the argmax is a tie plateau.
          // Walk to the plateau edge whose canonical link weight is largest;
          // at a selection-collapse cliff this edge is the argmax of the
          // underlying spread.
          if (!snapped) {
            const double cut = best->eval.delta - 1e-12;
            const bool flipped = best->eval.u_yes < best->eval.u_no;
            const double dir = flipped ? -1.0 : 1.0;
            double good = best->t;
            while (true) {
              double probe = good + dir * step;
              if (probe < 0.0 || probe > 1.0) break;
              auto c = eval_candidate(target, link, probe);
              if (c && c->eval.delta >= cut) {
                good = probe;
              } else {
                break;
              }
            }
            double bad = std::clamp(good + dir * step, 0.0, 1.0);
            for (int it = 0; it < 50 && std::abs(bad - good) > 1e-12; ++it) {
              double mid = 0.5 * (good + bad);
              auto c = eval_candidate(target, link, mid);
              if (c && c->eval.delta >= cut) {
                good = mid;
              } else {
                bad = mid;
              }
            }
            if (auto c = eval_candidate(target, link, good)) best = c;
          }
        }
      }
      if (best) family_best.push_back(*best);
    }
  }

  PolarizeResult result;
  result.plateau = plateau;
  for (const auto& c : family_best) {
    result.delta_bar = std::max(result.delta_bar, c.eval.delta);
  }

  // Canonical orientation (u_yes >= u_no), then dedup.
  for (const auto& c : family_best) {
    if (c.eval.delta < result.delta_bar - kRepTol) continue;

    PolarizingRep rep;
    BinaryStrategy sigma = structured_sigma(n, c.target, c.link, c.t);
    double uy = c.eval.u_yes, un = c.eval.u_no;
    if (uy < un) {
      sigma = sigma.swapped();
      std::swap(uy, un);
    }
    rep.sigma = std::move(sigma);
    rep.delta = c.eval.delta;
    rep.u_yes = uy;
    rep.u_no = un;
    rep.prob_yes = rep.sigma.prob_yes(prior);

    bool duplicate = false;
    for (const auto& seen : result.representatives) {
      double d = 0.0;
      for (int s = 0; s < n; ++s) {
        d = std::max(d, std::abs(seen.sigma.p_yes[s] - rep.sigma.p_yes[s]));
      }
      if (d <= kSigmaTol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) result.representatives.push_back(std::move(rep));
  }

  if (result.representatives.empty()) {
    throw std::runtime_error("polarizing search found no valid strategy");
  }

  // Payoff pairs quantize to grid points, so the identity tolerance cannot be
  // finer than the grid itself.
  const double pair_tol = std::max(1e-6, 2.0 * sp.grid().spacing());
  const auto& first = result.representatives.front();
  for (const auto& rep : result.representatives) {
    if (std::abs(rep.u_yes - first.u_yes) > pair_tol ||
        std::abs(rep.u_no - first.u_no) > pair_tol) {
      result.payoff_pair_unique = false;
    }
  }
  result.sigma_unique = result.representatives.size() == 1;
  result.u_yes_star = first.u_yes;
  result.u_no_star = first.u_no;

  // Separation structure of the canonical representative.
  int target = -1, link = -1;
  double link_weight = 0.0;
  for (int s = 0; s < n; ++s) {
    double v = first.sigma.p_yes[s];
    if (v >= 1.0 - 1e-9) {
      if (target < 0) {
        target = s;
      } else {
        link = s;
        link_weight = 1.0;
      }
    } else if (v > 1e-9) {
      link = s;
      link_weight = v;
    }
  }
  result.target_state = target;
  result.link_state = (link_weight > 1e-9) ? link : -1;
  result.link_weight = (result.link_state >= 0) ? link_weight : 0.0;
  return result;
}

// ---------------------------------------------------------------------------
// brute_force_spread

double brute_force_spread(const SampledProblem& sp, int k_per_dim) {
  const Problem& p = sp.problem();
  const int n_states = p.n_states();
  if (n_states > 4) {
    throw std::invalid_argument("brute_force_spread limited to four states");
  }
  if (k_per_dim < 2) throw std::invalid_argument("k_per_dim too small");

  const int n = sp.grid().size();
  const double tie = p.tol.tie;
  const double step = 1.0 / k_per_dim;

  std::vector<double> obj_yes(n), obj_no(n);
  std::vector<int> idx(n_states, 0);
  double best = 0.0;

  while (true) {
    double prob_yes = 0.0;
    for (int s = 0; s < n_states; ++s) prob_yes += idx[s] * step * p.prior.p[s];

    if (prob_yes > 1e-9 && prob_yes < 1.0 - 1e-9) {
      for (int i = 0; i < n; ++i) obj_yes[i] = obj_no[i] = 0.0;
      for (int s = 0; s < n_states; ++s) {
        const double py = idx[s] * step;
        const double wy = py * p.prior.p[s] / prob_yes;
        const double wn = (1.0 - py) * p.prior.p[s] / (1.0 - prob_yes);
        const auto& ys = sp.state_samples(s);
        if (wy != 0.0) {
          for (int i = 0; i < n; ++i) obj_yes[i] += wy * ys[i];
        }
        if (wn != 0.0) {
          for (int i = 0; i < n; ++i) obj_no[i] += wn * ys[i];
        }
      }
      double my = obj_yes[0], mn = obj_no[0];
      for (int i = 1; i < n; ++i) {
        my = std::max(my, obj_yes[i]);
        mn = std::max(mn, obj_no[i]);
      }
      int y_lo = 0, y_hi = n - 1, n_lo = 0, n_hi = n - 1;
      while (obj_yes[y_lo] < my - tie) ++y_lo;
      while (obj_yes[y_hi] < my - tie) --y_hi;
      while (obj_no[n_lo] < mn - tie) ++n_lo;
      while (obj_no[n_hi] < mn - tie) --n_hi;
      double d = std::max(sp.grid().point(y_hi) - sp.grid().point(n_lo),
                          sp.grid().point(n_hi) - sp.grid().point(y_lo));
      best = std::max(best, d);
    }

    int s = 0;
    while (s < n_states && ++idx[s] == k_per_dim + 1) {
      idx[s] = 0;
      ++s;
    }
    if (s == n_states) break;
  }
  return best;
}

}  // namespace pcs
