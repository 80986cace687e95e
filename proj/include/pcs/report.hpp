// Full solve pipeline (benchmark -> polarize -> worst case), report
// formatting, and the file formats used by the CLI.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcs/benchmark.hpp"
#include "pcs/equilibrium.hpp"
#include "pcs/model.hpp"
#include "pcs/polarize.hpp"
#include "pcs/response.hpp"
#include "pcs/worstcase.hpp"

namespace pcs {

struct SolveOptions {
  int grid_n = Grid::kDefaultResolution;
  double chi = 0.95;           // commitment level for the constructed mechanism
  double tol = 1e-6;           // agent-optimality tolerance
  std::uint64_t seed = 12345;  // belief-scan seed
  int t_resolution = 2001;
  int cheap_talk_k = 21;
  int a1_samples = 2000;
};

struct SolveReport {
  std::string scenario;
  SolveOptions options;
  Problem problem;

  BenchmarkReport benchmark;
  Assumption1Report assumption1;
  PolarizeResult polarize;
  WorstCaseResult worst_case;
  ConstructedMechanism constructed;
  bool mechanism_built = false;  // false when chi is below the feasible floor
  double timing_ms = 0.0;        // console display only, never written to files
};

SolveReport solve_scenario(const Problem& problem, const std::string& name,
                           const SolveOptions& opts);

std::string report_to_text(const SolveReport& rep);
std::string report_to_json(const SolveReport& rep);
std::string report_summary_csv(const SolveReport& rep);

/// Writes report.(txt|json), summary.csv, figure_yes.csv, figure_no.csv and
/// mechanism.json into `out_dir`. Returns the list of files written.
std::vector<std::string> write_report_files(const SolveReport& rep,
                                            const std::string& out_dir,
                                            const std::string& format);

/// Mechanism files embed the problem so they can be verified standalone.
std::string mechanism_to_json(const Problem& problem, const Mechanism& mech);
std::pair<Problem, Mechanism> mechanism_from_json(const std::string& text);

std::string profile_to_json(const StrategyProfile& profile);
StrategyProfile profile_from_json(const std::string& text);

}  // namespace pcs
