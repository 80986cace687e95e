import json
import math

import pytest

import pcsolve


def test_builtin_scenarios_load():
    names = pcsolve.builtin_scenario_names()
    assert "audit" in names and "insurance3" in names
    p = pcsolve.builtin_scenario("audit", 0.3)
    assert p.states == ["l", "h"]
    assert p.prior == pytest.approx([0.7, 0.3])
    assert p.eval_curve(1, 0.5) == pytest.approx(0.25)


def test_config_round_trip_and_validation():
    p = pcsolve.builtin_scenario("insurance3")
    text = pcsolve.serialize_problem(p)
    q = pcsolve.load_problem(text)
    assert q.states == p.states
    with pytest.raises(ValueError):
        pcsolve.load_problem('{"states": ["a","b"], "prior": [0.9, 0.2], '
                             '"gamma": {"a": [], "b": []}}')


def test_benchmark_matches_closed_forms():
    rho = 0.3
    p = pcsolve.builtin_scenario("audit", rho)
    b = pcsolve.benchmark(p, grid_n=2001)
    assert b.v_b == pytest.approx(1 - rho, abs=1e-9)
    assert b.u_bar == pytest.approx(rho / (2 * (1 - rho)), abs=1e-3)
    assert b.v_bar == pytest.approx(1 - rho + rho**2 / (4 * (1 - rho)), abs=1e-3)


def test_envelope_of_convex_curve_is_the_chord():
    p = pcsolve.builtin_scenario("audit", 0.3)
    env = pcsolve.concave_envelope(p, state=1, grid_n=501)
    assert env.hull == [0, 500]
    assert env.value_at(0.25) == pytest.approx(0.25, abs=1e-12)
    lot = pcsolve.hull_lottery(env, 0.25)
    assert lot.levels == pytest.approx([0.0, 1.0])
    assert lot.mean() == pytest.approx(0.25)


def test_worst_case_two_states_equals_full_commitment():
    p = pcsolve.builtin_scenario("audit", 0.3)
    wc = pcsolve.worst_case(p, grid_n=1001, t_resolution=501)
    b = pcsolve.benchmark(p, grid_n=1001)
    assert abs(wc.v_star - b.v_bar) <= 5e-3
    assert wc.sigma_star == pytest.approx([0.0, 1.0])


def test_polarizing_search_on_three_states():
    p = pcsolve.builtin_scenario("insurance3")
    pol = pcsolve.find_polarizing(p, grid_n=1001, t_resolution=501)
    assert pol.target_state == p.states.index("h")
    assert pol.delta_bar == pytest.approx(0.636, abs=5e-3)
    assert pol.sigma_unique


def test_equilibrium_verification_round_trip():
    p = pcsolve.builtin_scenario("binary-naive")
    naive = pcsolve.Mechanism(
        ["l", "h"],
        [pcsolve.Lottery.point(0.0), pcsolve.Lottery.point(1.0)],
        0.5,
    )
    good = pcsolve.verify_equilibrium(
        p, naive, [[0, 1], [1, 0]], [1.0, 0.0], grid_n=501)
    assert good.ok()
    assert good.principal_payoff == pytest.approx(0.5)

    bad = pcsolve.verify_equilibrium(
        p, naive, [[1, 0], [0, 1]], [0.0, 1.0], grid_n=501)
    assert not bad.ok()
    assert bad.ao_slack == pytest.approx(1.0)


def test_mechanism_construction_and_value():
    p = pcsolve.builtin_scenario("insurance3")
    wc = pcsolve.worst_case(p, grid_n=1001, t_resolution=501)
    cm = pcsolve.construct_mechanism(p, wc, wc.polarize.delta_bar, 0.99)
    gap = cm.mech.committed_mean(0) - cm.mech.committed_mean(1)
    assert 0.99 / 0.01 * abs(gap) == pytest.approx(wc.polarize.delta_bar, abs=1e-9)
    value = pcsolve.mechanism_value(p, cm.mech, wc.sigma_star, grid_n=1001)
    assert abs(value - wc.v_star) <= 2 * (1 - 0.99)


def test_solve_json_report():
    p = pcsolve.builtin_scenario("audit", 0.3)
    rep = json.loads(pcsolve.solve_json(p, "audit", grid_n=501))
    assert rep["scenario"] == "audit"
    assert rep["benchmark"]["v_b"] == pytest.approx(0.7, abs=1e-9)
    assert rep["worst_case"]["v_star"] <= rep["benchmark"]["v_bar"] + 1e-9
    assert rep["polarize"]["target_state"] == "h"
