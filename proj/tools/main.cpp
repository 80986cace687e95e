// Command-line front end: solve a scenario, verify an equilibrium profile
// against a mechanism file, or re-run the reference reproduction checks.
//
// Exit codes: 0 success / equilibrium, 1 check failure, 2 usage error,
// 3 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pcs/equilibrium.hpp"
#include "pcs/model.hpp"
#include "pcs/report.hpp"
#include "pcs/reproduce.hpp"
#include "pcs/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw pcs::ParseError("cannot read file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

pcs::Problem resolve_scenario(const std::string& scenario_arg, double rho,
                              std::string* name_out) {
  if (pcs::is_builtin_scenario(scenario_arg)) {
    *name_out = scenario_arg;
    return pcs::builtin_scenario(scenario_arg, rho);
  }
  *name_out = scenario_arg;
  return pcs::load_problem(read_file(scenario_arg));
}

int cmd_solve(const std::string& scenario, double rho, const pcs::SolveOptions& opts,
              const std::string& out_dir, const std::string& format) {
  std::string name;
  pcs::Problem problem = resolve_scenario(scenario, rho, &name);
  pcs::SolveReport rep = pcs::solve_scenario(problem, name, opts);

  std::cout << pcs::report_to_text(rep);
  std::printf("\nsolved in %.0f ms\n", rep.timing_ms);

  if (!out_dir.empty()) {
    auto files = pcs::write_report_files(rep, out_dir, format);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& mech_path, const std::string& profile_path,
               int grid_n, double tol) {
  auto [problem, mech] = pcs::mechanism_from_json(read_file(mech_path));
  pcs::StrategyProfile profile = pcs::profile_from_json(read_file(profile_path));

  pcs::SampledProblem sp(problem, pcs::Grid(grid_n > 0 ? grid_n : problem.grid_hint));
  pcs::EquilibriumReport rep = pcs::verify_equilibrium(sp, mech, profile, tol);

  std::printf("%-16s %-6s %s\n", "condition", "ok", "slack");
  std::printf("%-16s %-6s %.3e\n", "agent-optimal", rep.ao_ok ? "yes" : "no",
              rep.ao_slack);
  std::printf("%-16s %-6s %.3e\n", "principal-optimal", rep.po_ok ? "yes" : "no",
              rep.po_slack);
  std::printf("%-16s %-6s %.3e\n", "no-pooling", rep.pooling_ok ? "yes" : "no",
              rep.pooling_slack);
  std::printf("agent payoff     %.6f\n", rep.agent_payoff);
  std::printf("principal payoff %.6f\n", rep.principal_payoff);
  return rep.ok() ? kExitOk : kExitCheckFailure;
}

int cmd_reproduce(int grid_n) {
  if (grid_n < 2001) {
    std::cout << "note: grid " << grid_n
              << " is below the reference resolution 2001; value checks may "
                 "fail as resolution warnings\n";
  }
  auto results = pcs::run_reproduction_checks(grid_n);
  std::cout << pcs::format_check_matrix(results);
  for (const auto& r : results) {
    if (!r.pass) return kExitCheckFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case optimal communication mechanism solver"};
  app.require_subcommand(1);

  // solve
  std::string scenario;
  double rho = -1.0;
  std::string out_dir;
  std::string format = "text";
  pcs::SolveOptions opts;
  auto* solve = app.add_subcommand("solve", "solve a scenario end to end");
  solve->add_option("scenario", scenario,
                    "builtin name (audit, insurance3, insurance3-concave-h, "
                    "binary-naive) or config path")
      ->required();
  solve->add_option("--rho", rho, "audit prior on the high state");
  solve->add_option("--grid", opts.grid_n, "grid resolution");
  solve->add_option("--chi", opts.chi, "commitment level for the built mechanism");
  solve->add_option("--tol", opts.tol, "agent-optimality tolerance");
  solve->add_option("--seed", opts.seed, "belief-scan seed");
  solve->add_option("--out", out_dir, "output directory for report files");
  solve->add_option("--format", format, "report format: text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  // verify
  std::string mech_path, profile_path;
  int verify_grid = -1;
  double verify_tol = 1e-6;
  auto* verify = app.add_subcommand("verify", "check a profile against a mechanism");
  verify->add_option("mechanism", mech_path, "mechanism JSON file")->required();
  verify->add_option("profile", profile_path, "profile JSON file")->required();
  verify->add_option("--grid", verify_grid, "grid resolution override");
  verify->add_option("--tol", verify_tol, "agent-optimality tolerance");

  // reproduce
  int reproduce_grid = 2001;
  auto* reproduce = app.add_subcommand("reproduce", "run the reference checks");
  reproduce->add_option("--grid", reproduce_grid, "grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(scenario, rho, opts, out_dir, format);
    if (verify->parsed()) return cmd_verify(mech_path, profile_path, verify_grid, verify_tol);
    if (reproduce->parsed()) return cmd_reproduce(reproduce_grid);
  } catch (const pcs::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const pcs::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
