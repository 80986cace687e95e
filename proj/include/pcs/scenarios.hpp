// Built-in scenarios, constructed in code so the CLI works without files.

#pragma once

#include <string>
#include <vector>

#include "pcs/model.hpp"

namespace pcs {

/// Names accepted by the CLI: "audit", "insurance3", "insurance3-concave-h",
/// "binary-naive".
std::vector<std::string> builtin_scenario_names();

bool is_builtin_scenario(const std::string& name);

/// Builds a named scenario. `rho` only affects "audit" (prior on the high
/// state); pass a negative value for the default 0.3.
Problem builtin_scenario(const std::string& name, double rho = -1.0);

/// Three-type direct-mechanism fixture: quadratic high/low states around a
/// single-peaked middle state, prior (0.25, 0.25, 0.5) over (h, i, l).
/// Used by the equilibrium-multiplicity checks.
Problem audit3_fixture();

}  // namespace pcs
