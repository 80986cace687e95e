#include "pcs/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pcs/envelope.hpp"

namespace pcs {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json lottery_to_json(const Lottery& l) {
  json j;
  if (l.support == 1) {
    j["levels"] = {l.levels[0]};
    j["weights"] = {1.0};
  } else {
    j["levels"] = {l.levels[0], l.levels[1]};
    j["weights"] = {l.weights[0], l.weights[1]};
  }
  j["mean"] = l.mean();
  return j;
}

Lottery lottery_from_json(const json& j) {
  auto levels = j.at("levels").get<std::vector<double>>();
  auto weights = j.at("weights").get<std::vector<double>>();
  if (levels.size() != weights.size() || levels.empty() || levels.size() > 2) {
    throw ParseError("lottery needs one or two levels with matching weights");
  }
  if (levels.size() == 1) return Lottery::point(levels[0]);
  return Lottery::two_point(levels[0], levels[1], weights[0]);
}

json lottery_actions_json(const Lottery& l, const ActionMap& am) {
  json j;
  if (l.support == 1) {
    j["actions"] = {am.action_for(l.levels[0])};
    j["weights"] = {1.0};
  } else {
    j["actions"] = {am.action_for(l.levels[0]), am.action_for(l.levels[1])};
    j["weights"] = {l.weights[0], l.weights[1]};
  }
  return j;
}

std::string state_label(const Problem& p, int idx) {
  return idx >= 0 ? p.states.labels[idx] : std::string("-");
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << body;
}

}  // namespace

SolveReport solve_scenario(const Problem& problem, const std::string& name,
                           const SolveOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.scenario = name;
  rep.options = opts;
  rep.problem = problem;
  rep.problem.tol.ao = opts.tol;

  SampledProblem sp(rep.problem, Grid(opts.grid_n));

  rep.benchmark = run_benchmark(sp, opts.cheap_talk_k);
  rep.assumption1 = assumption1_probe(sp, opts.a1_samples, opts.seed);
  rep.polarize = find_polarizing(sp, opts.t_resolution);
  rep.worst_case = worst_case_opt(sp, rep.polarize, rep.benchmark.cheap_talk);

  const double floor = rep.polarize.delta_bar / (1.0 + rep.polarize.delta_bar);
  if (opts.chi >= floor && opts.chi < 1.0) {
    rep.constructed = construct_mechanism(rep.problem, rep.worst_case,
                                          rep.polarize.delta_bar, opts.chi);
    rep.mechanism_built = true;
  }

  rep.timing_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return rep;
}

std::string report_to_text(const SolveReport& rep) {
  const Problem& p = rep.problem;
  std::ostringstream os;
  os << "scenario: " << rep.scenario << "\n";
  os << "states:   ";
  for (int s = 0; s < p.n_states(); ++s) {
    os << p.states.labels[s] << (s + 1 < p.n_states() ? " " : "");
  }
  os << "\n";
  os << "grid: " << rep.options.grid_n << "  chi: " << fmt(rep.options.chi)
     << "  seed: " << rep.options.seed << "\n";

  os << "\n[benchmark]\n";
  os << "v_b   = " << fmt(rep.benchmark.v_b) << "\n";
  os << "u_rho = " << fmt(rep.benchmark.u_rho.clusters.front().arg)
     << (rep.benchmark.u_rho.tied() ? " (tied)" : "") << "\n";
  os << "v_bar = " << fmt(rep.benchmark.v_bar) << "\n";
  os << "u_bar = " << fmt(rep.benchmark.u_bar) << "\n";
  os << "cheap-talk improvement found: "
     << (rep.benchmark.cheap_talk.improving_found ? "yes" : "no") << "\n";

  os << "\n[polarize]\n";
  os << "delta_bar = " << fmt(rep.polarize.delta_bar) << "\n";
  os << "target    = " << state_label(p, rep.polarize.target_state) << "\n";
  os << "link      = " << state_label(p, rep.polarize.link_state);
  if (rep.polarize.link_state >= 0) {
    os << " (weight " << fmt(rep.polarize.link_weight) << ")";
  }
  os << "\n";
  os << "u_yes = " << fmt(rep.polarize.u_yes_star)
     << "  u_no = " << fmt(rep.polarize.u_no_star) << "\n";
  os << "sigma_star p_yes:";
  for (int s = 0; s < p.n_states(); ++s) {
    os << " " << p.states.labels[s] << "="
       << fmt(rep.polarize.representatives.front().sigma.p_yes[s]);
  }
  os << "\n";
  os << "representatives: " << rep.polarize.representatives.size()
     << (rep.polarize.sigma_unique ? " (unique)" : "")
     << (rep.polarize.payoff_pair_unique ? "" : " (distinct payoff pairs)") << "\n";

  os << "\n[worst case]\n";
  os << "v_star = " << fmt(rep.worst_case.v_star) << "\n";
  os << "u_star = " << fmt(rep.worst_case.u_star) << "\n";
  os << "p_yes  = " << fmt(rep.worst_case.p_yes) << "\n";
  os << "min path used: " << (rep.worst_case.inf_over_sigma_used ? "yes" : "no")
     << "\n";
  if (rep.worst_case.assumption3_warning) {
    os << "warning: cheap-talk probe flagged an improvement; the polarizing\n"
          "characterization may not bound the worst case here\n";
  }

  if (rep.mechanism_built) {
    os << "\n[mechanism chi=" << fmt(rep.constructed.mech.chi) << "]\n";
    os << "committed means: yes=" << fmt(rep.constructed.mech.committed_mean(0))
       << " no=" << fmt(rep.constructed.mech.committed_mean(1)) << "\n";
    os << "center: requested=" << fmt(rep.constructed.requested_center)
       << " applied=" << fmt(rep.constructed.applied_center) << "\n";
  } else {
    os << "\n[mechanism]\nchi below feasibility floor, no mechanism built\n";
  }
  return os.str();
}

std::string report_to_json(const SolveReport& rep) {
  const Problem& problem = rep.problem;
  json j;
  j["scenario"] = rep.scenario;
  j["grid_n"] = rep.options.grid_n;
  j["chi"] = rep.options.chi;
  j["seed"] = rep.options.seed;

  const auto& b = rep.benchmark;
  json ur;
  ur["value"] = b.u_rho.value;
  ur["maximizers"] = b.u_rho.representatives();
  ur["tied"] = b.u_rho.tied();
  j["benchmark"] = {{"v_b", b.v_b},
                    {"u_rho", ur},
                    {"v_bar", b.v_bar},
                    {"u_bar", b.u_bar}};
  json plans = json::array();
  for (const auto& pl : b.plans) plans.push_back(lottery_to_json(pl));
  j["benchmark"]["plans"] = plans;
  j["cheap_talk"] = {{"improving_found", b.cheap_talk.improving_found},
                     {"best_agent_payoff", b.cheap_talk.best_agent_payoff},
                     {"v_ct", b.cheap_talk.v_ct}};
  j["assumption1"] = {{"samples", rep.assumption1.samples},
                      {"tied_fraction", rep.assumption1.tied_fraction},
                      {"max_clusters", rep.assumption1.max_clusters},
                      {"ok", rep.assumption1.ok()}};

  const auto& pol = rep.polarize;
  json sig = json::object();
  for (int s = 0; s < problem.n_states(); ++s) {
    sig[problem.states.labels[s]] = pol.representatives.front().sigma.p_yes[s];
  }
  j["polarize"] = {{"delta_bar", pol.delta_bar},
                   {"target_state", state_label(problem, pol.target_state)},
                   {"link_state", state_label(problem, pol.link_state)},
                   {"link_weight", pol.link_weight},
                   {"u_yes", pol.u_yes_star},
                   {"u_no", pol.u_no_star},
                   {"sigma_star", sig},
                   {"representatives", pol.representatives.size()},
                   {"sigma_unique", pol.sigma_unique},
                   {"payoff_pair_unique", pol.payoff_pair_unique},
                   {"plateau", pol.plateau}};

  const auto& wc = rep.worst_case;
  j["worst_case"] = {{"v_star", wc.v_star},
                     {"u_star", wc.u_star},
                     {"p_yes", wc.p_yes},
                     {"plan_yes", lottery_to_json(wc.plan_yes)},
                     {"plan_no", lottery_to_json(wc.plan_no)},
                     {"inf_over_sigma_used", wc.inf_over_sigma_used},
                     {"assumption2_warning", wc.assumption2_warning},
                     {"assumption3_warning", wc.assumption3_warning}};

  if (rep.mechanism_built) {
    const auto& cm = rep.constructed;
    json committed = json::array();
    for (const auto& l : cm.mech.committed) committed.push_back(lottery_to_json(l));
    j["mechanism"] = {{"messages", cm.mech.messages},
                      {"chi", cm.mech.chi},
                      {"committed", committed},
                      {"centering",
                       {{"requested", cm.requested_center},
                        {"applied", cm.applied_center},
                        {"committed_gap", cm.committed_gap}}}};
    if (problem.action_map) {
      json actions = json::array();
      for (const auto& l : cm.mech.committed) {
        actions.push_back(lottery_actions_json(l, *problem.action_map));
      }
      j["mechanism"]["actions"] = actions;
    }
  }
  return j.dump(2) + "\n";
}

std::string report_summary_csv(const SolveReport& rep) {
  std::ostringstream os;
  os << "scenario,grid_n,v_b,u_rho,v_bar,u_bar,delta_bar,v_star,u_star,p_yes,chi\n";
  os << rep.scenario << "," << rep.options.grid_n << "," << fmt(rep.benchmark.v_b)
     << "," << fmt(rep.benchmark.u_rho.clusters.front().arg) << ","
     << fmt(rep.benchmark.v_bar) << "," << fmt(rep.benchmark.u_bar) << ","
     << fmt(rep.polarize.delta_bar) << "," << fmt(rep.worst_case.v_star) << ","
     << fmt(rep.worst_case.u_star) << "," << fmt(rep.worst_case.p_yes) << ","
     << fmt(rep.options.chi) << "\n";
  return os.str();
}

std::vector<std::string> write_report_files(const SolveReport& rep,
                                            const std::string& out_dir,
                                            const std::string& format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  auto emit = [&](const std::string& name, const std::string& body) {
    fs::path path = fs::path(out_dir) / name;
    write_text_file(path, body);
    written.push_back(path.string());
  };

  if (format == "json") {
    emit("report.json", report_to_json(rep));
  } else if (format == "csv") {
    emit("report.csv", report_summary_csv(rep));
  } else {
    emit("report.txt", report_to_text(rep));
  }
  emit("summary.csv", report_summary_csv(rep));

  {
    std::ostringstream os;
    write_envelope_csv(os, rep.worst_case.env_yes);
    emit("figure_yes.csv", os.str());
  }
  {
    std::ostringstream os;
    write_envelope_csv(os, rep.worst_case.env_no);
    emit("figure_no.csv", os.str());
  }
  if (rep.mechanism_built) {
    emit("mechanism.json", mechanism_to_json(rep.problem, rep.constructed.mech));

    // The polarizing profile completed with consistent selections, for
    // replay through `verify`.
    SampledProblem sp(rep.problem, Grid(rep.options.grid_n));
    std::vector<std::vector<double>> sigma_a(rep.problem.n_states(),
                                             std::vector<double>(2));
    for (int s = 0; s < rep.problem.n_states(); ++s) {
      sigma_a[s][0] = rep.worst_case.sigma_star.p_yes[s];
      sigma_a[s][1] = 1.0 - rep.worst_case.sigma_star.p_yes[s];
    }
    if (auto profile = find_ao_profile(sp, rep.constructed.mech, sigma_a,
                                       rep.problem.tol.ao)) {
      emit("sigma_star_profile.json", profile_to_json(*profile));
    }
  }
  return written;
}

std::string mechanism_to_json(const Problem& problem, const Mechanism& mech) {
  json j;
  j["problem"] = json::parse(serialize_problem(problem));
  j["messages"] = mech.messages;
  j["chi"] = mech.chi;
  json committed = json::array();
  for (const auto& l : mech.committed) committed.push_back(lottery_to_json(l));
  j["committed"] = committed;
  if (problem.action_map) {
    json actions = json::array();
    for (const auto& l : mech.committed) {
      actions.push_back(lottery_actions_json(l, *problem.action_map));
    }
    j["actions"] = actions;
  }
  return j.dump(2) + "\n";
}

std::pair<Problem, Mechanism> mechanism_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("mechanism parse error: ") + e.what());
  }
  try {
    Problem p = load_problem(j.at("problem").dump());
    Mechanism mech;
    mech.messages = j.at("messages").get<std::vector<std::string>>();
    mech.chi = j.at("chi").get<double>();
    if (mech.chi < 0.0 || mech.chi > 1.0) {
      throw ValidationError("chi must lie in [0,1]");
    }
    for (const auto& lj : j.at("committed")) {
      mech.committed.push_back(lottery_from_json(lj));
    }
    if (mech.committed.size() != mech.messages.size() || mech.messages.empty()) {
      throw ValidationError("mechanism needs one committed lottery per message");
    }
    return {std::move(p), std::move(mech)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("mechanism parse error: ") + e.what());
  }
}

std::string profile_to_json(const StrategyProfile& profile) {
  json j;
  j["sigma_a"] = profile.sigma_a;
  j["sigma_p"] = profile.sigma_p;
  j["off_path_payoff"] = profile.off_path_payoff;
  return j.dump(2) + "\n";
}

StrategyProfile profile_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("profile parse error: ") + e.what());
  }
  try {
    StrategyProfile p;
    p.sigma_a = j.at("sigma_a").get<std::vector<std::vector<double>>>();
    p.sigma_p = j.at("sigma_p").get<std::vector<double>>();
    p.off_path_payoff = j.value("off_path_payoff", 0.0);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("profile parse error: ") + e.what());
  }
}

}  // namespace pcs
