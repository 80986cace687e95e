// Python bindings for the main solver operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcs/benchmark.hpp"
#include "pcs/envelope.hpp"
#include "pcs/equilibrium.hpp"
#include "pcs/model.hpp"
#include "pcs/polarize.hpp"
#include "pcs/report.hpp"
#include "pcs/reproduce.hpp"
#include "pcs/scenarios.hpp"
#include "pcs/worstcase.hpp"

namespace py = pybind11;
using namespace pcs;

namespace {

std::vector<double> lottery_levels(const Lottery& l) {
  if (l.support == 1) return {l.levels[0]};
  return {l.levels[0], l.levels[1]};
}

std::vector<double> lottery_weights(const Lottery& l) {
  if (l.support == 1) return {1.0};
  return {l.weights[0], l.weights[1]};
}

BinaryStrategy make_strategy(const std::vector<double>& p_yes) {
  return BinaryStrategy{p_yes};
}

}  // namespace

PYBIND11_MODULE(_pcsolve, m) {
  m.doc() = "worst-case optimal communication mechanism solver";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<Problem>(m, "Problem")
      .def_property_readonly(
          "states", [](const Problem& p) { return p.states.labels; })
      .def_property_readonly("prior", [](const Problem& p) { return p.prior.p; })
      .def_property_readonly("grid_hint", [](const Problem& p) { return p.grid_hint; })
      .def("eval_curve",
           [](const Problem& p, int state, double u) {
             return p.gamma.at(state).eval(u);
           },
           py::arg("state"), py::arg("u"))
      .def("__repr__", [](const Problem& p) {
        return "<Problem states=" + std::to_string(p.n_states()) + ">";
      });

  m.def("load_problem", &load_problem, py::arg("config_text"));
  m.def("serialize_problem", &serialize_problem, py::arg("problem"));
  m.def("builtin_scenario", &builtin_scenario, py::arg("name"), py::arg("rho") = -1.0);
  m.def("builtin_scenario_names", &builtin_scenario_names);

  py::class_<Lottery>(m, "Lottery")
      .def_static("point", &Lottery::point, py::arg("level"))
      .def_static("two_point", &Lottery::two_point, py::arg("lo"), py::arg("hi"),
                  py::arg("weight_lo"))
      .def_property_readonly("levels", &lottery_levels)
      .def_property_readonly("weights", &lottery_weights)
      .def("mean", &Lottery::mean);

  py::class_<Envelope>(m, "Envelope")
      .def_property_readonly("base", [](const Envelope& e) { return e.base; })
      .def_property_readonly("values", [](const Envelope& e) { return e.values; })
      .def_property_readonly("hull", [](const Envelope& e) { return e.hull; })
      .def_property_readonly("points",
                             [](const Envelope& e) { return e.grid.points(); })
      .def("value_at", &Envelope::value_at, py::arg("u"));

  m.def(
      "concave_envelope",
      [](const Problem& p, int state, int grid_n) {
        return concave_envelope(p.gamma.at(state), Grid(grid_n));
      },
      py::arg("problem"), py::arg("state"), py::arg("grid_n") = Grid::kDefaultResolution);
  m.def("hull_lottery", &hull_lottery, py::arg("envelope"), py::arg("u"));

  py::class_<ResponseSet>(m, "ResponseSet")
      .def_property_readonly("value", [](const ResponseSet& r) { return r.value; })
      .def_property_readonly("maximizers", &ResponseSet::representatives)
      .def_property_readonly("tied", &ResponseSet::tied)
      .def_property_readonly("min_u", &ResponseSet::min_u)
      .def_property_readonly("max_u", &ResponseSet::max_u);

  m.def(
      "best_response",
      [](const Problem& p, const std::vector<double>& mu, int grid_n, double tie_tol) {
        SampledProblem sp(p, Grid(grid_n));
        return best_response(sp, BeliefVector{mu}, tie_tol);
      },
      py::arg("problem"), py::arg("mu"), py::arg("grid_n") = Grid::kDefaultResolution,
      py::arg("tie_tol") = 1e-9);

  py::class_<CheapTalkProbe>(m, "CheapTalkProbe")
      .def_readonly("improving_found", &CheapTalkProbe::improving_found)
      .def_readonly("best_agent_payoff", &CheapTalkProbe::best_agent_payoff)
      .def_readonly("v_ct", &CheapTalkProbe::v_ct);

  py::class_<BenchmarkReport>(m, "BenchmarkReport")
      .def_readonly("v_b", &BenchmarkReport::v_b)
      .def_readonly("v_bar", &BenchmarkReport::v_bar)
      .def_readonly("u_bar", &BenchmarkReport::u_bar)
      .def_readonly("plans", &BenchmarkReport::plans)
      .def_readonly("cheap_talk", &BenchmarkReport::cheap_talk)
      .def_property_readonly("u_rho", [](const BenchmarkReport& b) {
        return b.u_rho.clusters.front().arg;
      });

  m.def(
      "benchmark",
      [](const Problem& p, int grid_n) {
        SampledProblem sp(p, Grid(grid_n));
        return run_benchmark(sp);
      },
      py::arg("problem"), py::arg("grid_n") = Grid::kDefaultResolution);

  py::class_<BinaryStrategy>(m, "BinaryStrategy")
      .def(py::init(&make_strategy), py::arg("p_yes"))
      .def_readonly("p_yes", &BinaryStrategy::p_yes);

  py::class_<PolarizeResult>(m, "PolarizeResult")
      .def_readonly("delta_bar", &PolarizeResult::delta_bar)
      .def_readonly("target_state", &PolarizeResult::target_state)
      .def_readonly("link_state", &PolarizeResult::link_state)
      .def_readonly("link_weight", &PolarizeResult::link_weight)
      .def_readonly("u_yes", &PolarizeResult::u_yes_star)
      .def_readonly("u_no", &PolarizeResult::u_no_star)
      .def_readonly("sigma_unique", &PolarizeResult::sigma_unique)
      .def_readonly("payoff_pair_unique", &PolarizeResult::payoff_pair_unique)
      .def_property_readonly("sigma_star", [](const PolarizeResult& r) {
        return r.representatives.front().sigma.p_yes;
      });

  m.def(
      "spread",
      [](const Problem& p, const std::vector<double>& p_yes, int grid_n) {
        SampledProblem sp(p, Grid(grid_n));
        return spread(sp, BinaryStrategy{p_yes}).delta;
      },
      py::arg("problem"), py::arg("p_yes"), py::arg("grid_n") = Grid::kDefaultResolution);
  m.def(
      "find_polarizing",
      [](const Problem& p, int grid_n, int t_resolution) {
        SampledProblem sp(p, Grid(grid_n));
        return find_polarizing(sp, t_resolution);
      },
      py::arg("problem"), py::arg("grid_n") = Grid::kDefaultResolution,
      py::arg("t_resolution") = 2001);
  m.def(
      "brute_force_spread",
      [](const Problem& p, int k_per_dim, int grid_n) {
        SampledProblem sp(p, Grid(grid_n));
        return brute_force_spread(sp, k_per_dim);
      },
      py::arg("problem"), py::arg("k_per_dim"), py::arg("grid_n") = Grid::kDefaultResolution);

  py::class_<Mechanism>(m, "Mechanism")
      .def(py::init([](std::vector<std::string> messages,
                       std::vector<Lottery> committed, double chi) {
             Mechanism mech;
             mech.messages = std::move(messages);
             mech.committed = std::move(committed);
             mech.chi = chi;
             return mech;
           }),
           py::arg("messages"), py::arg("committed"), py::arg("chi"))
      .def_readonly("messages", &Mechanism::messages)
      .def_readonly("committed", &Mechanism::committed)
      .def_readonly("chi", &Mechanism::chi)
      .def("committed_mean", &Mechanism::committed_mean, py::arg("message"));

  py::class_<WorstCaseResult>(m, "WorstCaseResult")
      .def_readonly("v_star", &WorstCaseResult::v_star)
      .def_readonly("u_star", &WorstCaseResult::u_star)
      .def_readonly("p_yes", &WorstCaseResult::p_yes)
      .def_readonly("plan_yes", &WorstCaseResult::plan_yes)
      .def_readonly("plan_no", &WorstCaseResult::plan_no)
      .def_readonly("inf_over_sigma_used", &WorstCaseResult::inf_over_sigma_used)
      .def_readonly("polarize", &WorstCaseResult::polarize)
      .def_property_readonly("sigma_star", [](const WorstCaseResult& w) {
        return w.sigma_star.p_yes;
      });

  m.def(
      "worst_case",
      [](const Problem& p, int grid_n, int t_resolution) {
        SampledProblem sp(p, Grid(grid_n));
        return worst_case_opt(sp, t_resolution);
      },
      py::arg("problem"), py::arg("grid_n") = Grid::kDefaultResolution,
      py::arg("t_resolution") = 2001);

  py::class_<ConstructedMechanism>(m, "ConstructedMechanism")
      .def_readonly("mech", &ConstructedMechanism::mech)
      .def_readonly("requested_center", &ConstructedMechanism::requested_center)
      .def_readonly("applied_center", &ConstructedMechanism::applied_center);

  m.def("construct_mechanism", &construct_mechanism, py::arg("problem"),
        py::arg("worst_case"), py::arg("delta_bar"), py::arg("chi"));
  m.def(
      "mechanism_value",
      [](const Problem& p, const Mechanism& mech, const std::vector<double>& p_yes,
         int grid_n) {
        SampledProblem sp(p, Grid(grid_n));
        return mechanism_value(sp, mech, BinaryStrategy{p_yes});
      },
      py::arg("problem"), py::arg("mech"), py::arg("p_yes"),
      py::arg("grid_n") = Grid::kDefaultResolution);

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("ao_ok", &EquilibriumReport::ao_ok)
      .def_readonly("po_ok", &EquilibriumReport::po_ok)
      .def_readonly("pooling_ok", &EquilibriumReport::pooling_ok)
      .def_readonly("ao_slack", &EquilibriumReport::ao_slack)
      .def_readonly("po_slack", &EquilibriumReport::po_slack)
      .def_readonly("agent_payoff", &EquilibriumReport::agent_payoff)
      .def_readonly("principal_payoff", &EquilibriumReport::principal_payoff)
      .def("ok", &EquilibriumReport::ok);

  m.def(
      "verify_equilibrium",
      [](const Problem& p, const Mechanism& mech,
         const std::vector<std::vector<double>>& sigma_a,
         const std::vector<double>& sigma_p, int grid_n, double tol) {
        SampledProblem sp(p, Grid(grid_n));
        StrategyProfile profile{sigma_a, sigma_p, 0.0};
        return verify_equilibrium(sp, mech, profile, tol);
      },
      py::arg("problem"), py::arg("mech"), py::arg("sigma_a"), py::arg("sigma_p"),
      py::arg("grid_n") = Grid::kDefaultResolution, py::arg("tol") = 1e-6);

  m.def(
      "solve_json",
      [](const Problem& p, const std::string& name, int grid_n, double chi,
         std::uint64_t seed) {
        SolveOptions opts;
        opts.grid_n = grid_n;
        opts.chi = chi;
        opts.seed = seed;
        return report_to_json(solve_scenario(p, name, opts));
      },
      py::arg("problem"), py::arg("name"), py::arg("grid_n") = Grid::kDefaultResolution,
      py::arg("chi") = 0.95, py::arg("seed") = 12345);

  m.def("run_reproduction_checks", [](int grid_n) {
    py::list out;
    for (const auto& r : run_reproduction_checks(grid_n)) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["details"] = r.details;
      out.append(d);
    }
    return out;
  }, py::arg("grid_n") = 2001);
}
