#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pcs/equilibrium.hpp"
#include "pcs/report.hpp"
#include "pcs/scenarios.hpp"

using namespace pcs;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

SolveOptions quick_opts() {
  SolveOptions o;
  o.grid_n = 501;
  o.t_resolution = 501;
  o.cheap_talk_k = 11;
  o.a1_samples = 200;
  return o;
}

}  // namespace

TEST_CASE("solve reports carry consistent ordering across sections") {
  SolveReport rep =
      solve_scenario(builtin_scenario("audit", 0.3), "audit", quick_opts());
  CHECK(rep.benchmark.v_b <= rep.benchmark.v_bar + 1e-9);
  CHECK(rep.worst_case.v_star <= rep.benchmark.v_bar + 1e-9);
  CHECK(rep.mechanism_built);

  std::string text = report_to_text(rep);
  CHECK(text.find("scenario: audit") != std::string::npos);
  std::string json = report_to_json(rep);
  CHECK(json.find("\"v_star\"") != std::string::npos);
  std::string csv = report_summary_csv(rep);
  CHECK(csv.find("audit,") != std::string::npos);
}

TEST_CASE("report files are byte-identical across runs") {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "pcsolve_test_out";
  fs::remove_all(base);

  Problem p = builtin_scenario("insurance3");
  SolveReport rep1 = solve_scenario(p, "insurance3", quick_opts());
  SolveReport rep2 = solve_scenario(p, "insurance3", quick_opts());
  auto files1 = write_report_files(rep1, (base / "a").string(), "json");
  auto files2 = write_report_files(rep2, (base / "b").string(), "json");
  REQUIRE(files1.size() == files2.size());
  for (size_t i = 0; i < files1.size(); ++i) {
    CHECK(slurp(files1[i]) == slurp(files2[i]));
  }
  fs::remove_all(base);
}

TEST_CASE("mechanism files round-trip and verify standalone") {
  SolveReport rep =
      solve_scenario(builtin_scenario("binary-naive"), "binary-naive", quick_opts());
  REQUIRE(rep.mechanism_built);

  std::string text = mechanism_to_json(rep.problem, rep.constructed.mech);
  auto [problem, mech] = mechanism_from_json(text);
  CHECK(problem.n_states() == 2);
  REQUIRE(mech.n_messages() == 2);
  CHECK(mech.chi == doctest::Approx(rep.constructed.mech.chi));
  CHECK(mech.committed_mean(0) ==
        doctest::Approx(rep.constructed.mech.committed_mean(0)).epsilon(1e-12));

  // The polarizing strategy still verifies after the round trip.
  SampledProblem sp(problem, Grid(rep.options.grid_n));
  std::vector<std::vector<double>> sigma_a(2, std::vector<double>(2));
  for (int s = 0; s < 2; ++s) {
    sigma_a[s][0] = rep.worst_case.sigma_star.p_yes[s];
    sigma_a[s][1] = 1.0 - rep.worst_case.sigma_star.p_yes[s];
  }
  auto profile = find_ao_profile(sp, mech, sigma_a, 1e-6);
  REQUIRE(profile.has_value());
  CHECK(verify_equilibrium(sp, mech, *profile, 1e-6).ok());

  // Profile serialization round-trips too.
  StrategyProfile again = profile_from_json(profile_to_json(*profile));
  CHECK(again.sigma_a == profile->sigma_a);
  CHECK(again.sigma_p == profile->sigma_p);
}

TEST_CASE("malformed inputs raise parse errors") {
  CHECK_THROWS_AS(mechanism_from_json("{"), ParseError);
  CHECK_THROWS_AS(mechanism_from_json("{}"), ParseError);
  CHECK_THROWS_AS(profile_from_json("not json"), ParseError);
  CHECK_THROWS_AS(profile_from_json(R"({"sigma_a": 3})"), ParseError);
}

TEST_CASE("summary rows list the headline numbers") {
  SolveReport rep =
      solve_scenario(builtin_scenario("audit", 0.3), "audit", quick_opts());
  std::string csv = report_summary_csv(rep);
  std::istringstream is(csv);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header ==
        "scenario,grid_n,v_b,u_rho,v_bar,u_bar,delta_bar,v_star,u_star,p_yes,chi");
  CHECK(row.rfind("audit,501,", 0) == 0);
}
