// Reference-value reproduction checks over the built-in scenarios. Shared by
// the acceptance test binary and the `reproduce` CLI subcommand.

#pragma once

#include <string>
#include <vector>

namespace pcs {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
};

/// Runs every reproduction check at its stated tolerance. `grid_n` below the
/// default trades accuracy for speed; reference-value checks may then fail
/// with a resolution warning in the details.
std::vector<CheckResult> run_reproduction_checks(int grid_n = 2001);

/// Formats one line per check: "PASS|FAIL  #id name: details".
std::string format_check_matrix(const std::vector<CheckResult>& results);

}  // namespace pcs
