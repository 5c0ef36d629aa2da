import importlib
from unittest import mock

import numpy as np
import pytest

from tankcodesign.chain import example1_demand, example1_geometry
from tankcodesign.config import GeometryRule, SpsaConfig, load_run_config
from tankcodesign.cost import analytic_operating_cost_example1
from tankcodesign.errors import OptimizationError
from tankcodesign.model import (
    ChainSpec,
    CostParams,
    PriceModel,
    QuantizedDemandModel,
    ThresholdPolicy,
    is_nonincreasing,
)
from tankcodesign.optimize import (
    CandidateResult,
    SpsaResult,
    codesign_sweep,
    cost_surface,
    initial_vector,
    operating_objective,
    optimize_policy_for_tank,
    select_best,
)
from tests.conftest import (
    CONFIG_DIR,
    EXAMPLE1_OPERATING_N,
    EXAMPLE1_TOTAL,
    EXAMPLE2_OPERATING_N,
    EXAMPLE3_CAPITAL,
    EXAMPLE3_TOTAL,
    N_YEAR,
)

PRICE = PriceModel.constant(20.0, 10.0)
PARAMS = CostParams(eps_p=1.0, penalty_w=0.0, capital_cost=lambda volume: 10000.0 * volume)
CANDIDATES = [float(volume) for volume in range(4, 13)]

codesign_module = importlib.import_module("tankcodesign.optimize.codesign")


def candidate(volume, total):
    return CandidateResult(volume, ThresholdPolicy(np.zeros((1, 1))), 0.0, total, total)


def test_initial_vector_starts_at_mean_price(small_instance):
    _, price, spec, _, _ = small_instance
    assert initial_vector(price, spec, "constant").tolist() == [20.0]
    assert initial_vector(price, spec, "per_phase").tolist() == [15.0, 25.0]
    assert initial_vector(price, spec, "per_state").tolist() == [15.0] * 3 + [25.0] * 3


def test_objective_matches_closed_form():
    spec = example1_geometry(8)
    objective = operating_objective(example1_demand(), PRICE, spec, PARAMS, "constant")
    assert objective(np.array([23.0])) == pytest.approx(
        analytic_operating_cost_example1(23.0, 8, PRICE, PARAMS), abs=1e-10
    )


def test_objective_is_infinite_for_reducible_chains(idle_instance):
    demand, price, spec = idle_instance
    objective = operating_objective(demand, price, spec, PARAMS, "constant")
    assert objective(np.array([20.0])) == np.inf


def test_objective_is_finite_with_transient_states():
    spec = example1_geometry(8)
    objective = operating_objective(example1_demand(), PRICE, spec, PARAMS, "constant")
    # the tank cycles between empty and one unit, pumping from empty every other interval
    assert objective(np.array([-np.inf])) == pytest.approx(10.0)


def test_thresholds_outside_the_box_are_refused():
    escaped = SpsaResult(np.array([1000.0]), 0.0)
    with mock.patch.object(codesign_module, "spsa_minimize", return_value=escaped):
        with pytest.raises(OptimizationError, match="threshold box"):
            optimize_policy_for_tank(
                8.0, example1_demand(), PRICE, example1_geometry, PARAMS, SpsaConfig(iterations=10), "constant"
            )


def test_ties_go_to_the_smaller_volume():
    best = select_best([candidate(9.0, 100.0), candidate(8.0, 100.0 + 1e-8), candidate(7.0, 101.0)])
    assert best.volume == 8.0
    assert select_best([candidate(9.0, 99.0), candidate(8.0, 100.0)]).volume == 9.0


def test_policy_for_one_tank():
    optimum = optimize_policy_for_tank(
        8.0, example1_demand(), PRICE, example1_geometry, PARAMS, SpsaConfig(iterations=150, restarts=1), "constant"
    )
    assert optimum.policy.thresholds[0, 0] == pytest.approx(20.0, abs=0.2)
    assert optimum.operating_cost * N_YEAR == pytest.approx(EXAMPLE1_OPERATING_N, rel=5e-3)


def test_example1_codesign_sweep():
    spsa = SpsaConfig(iterations=150, restarts=1)
    result = codesign_sweep(
        CANDIDATES, example1_demand(), PRICE, example1_geometry, PARAMS, N_YEAR, spsa, "constant", threads=2
    )
    assert result.best_V == 8.0
    assert result.best_policy.thresholds[0, 0] == pytest.approx(20.0, abs=0.2)
    assert result.best.operating_N == pytest.approx(EXAMPLE1_OPERATING_N, rel=5e-3)
    assert result.J_star == pytest.approx(EXAMPLE1_TOTAL, rel=5e-3)
    assert result.J_star <= min(c.total for c in result.per_candidate) * (1.0 + 1e-9)
    assert [c.volume for c in result.per_candidate] == CANDIDATES
    frame = result.candidates_frame()
    assert frame["V"].tolist() == CANDIDATES


def test_invalid_candidates_are_recorded_as_failures():
    spsa = SpsaConfig(iterations=50, restarts=1)
    result = codesign_sweep([1.0, 8.0], example1_demand(), PRICE, example1_geometry, PARAMS, N_YEAR, spsa, "constant")
    assert result.best_V == 8.0
    assert [volume for volume, _ in result.failures] == [1.0]
    assert "band ordering" in result.failures[0][1]
    assert result.to_dict()["failures"][0]["V"] == 1.0


def test_sweep_without_valid_candidate_fails():
    with pytest.raises(OptimizationError, match="no candidate"):
        codesign_sweep(
            [1.0], example1_demand(), PRICE, example1_geometry, PARAMS, N_YEAR, SpsaConfig(iterations=10), "constant"
        )

    with pytest.raises(ValueError, match="at least one candidate"):
        codesign_sweep([], example1_demand(), PRICE, example1_geometry, PARAMS, N_YEAR, SpsaConfig(), "constant")


def test_cost_surface_minimum():
    thresholds = [float(alpha) for alpha in range(12, 29)]
    frame = cost_surface(CANDIDATES, thresholds, example1_demand(), PRICE, example1_geometry, PARAMS, N_YEAR, True)
    assert len(frame) == len(CANDIDATES) * len(thresholds)
    best = frame.loc[frame["total"].idxmin()]
    assert (best["V"], best["alpha"]) == (8.0, 20.0)
    assert best["total"] == pytest.approx(EXAMPLE1_TOTAL, rel=5e-3)


def test_closed_form_surface_matches_chain_surface():
    args = ([5.0, 8.0], [15.0, 20.0, 26.0], example1_demand(), PRICE, example1_geometry, PARAMS, N_YEAR)
    closed = cost_surface(*args, closed_form=True)
    numeric = cost_surface(*args)
    np.testing.assert_allclose(closed["total"], numeric["total"], rtol=1e-9)


def test_per_state_thresholds_on_a_random_demand_tank():
    demand = QuantizedDemandModel(1.0, np.array([[0.0, 0.3, 0.4, 0.3]]))
    rule = GeometryRule(rule="demand_levels", zeta=4)
    params = CostParams(eps_p=1.0, penalty_w=0.0, capital_cost=lambda volume: 1000.0 * volume)
    spsa = SpsaConfig(iterations=200, restarts=1)
    spec = rule.build(10.0, demand)
    optimum = optimize_policy_for_tank(10.0, demand, PRICE, lambda volume: rule.build(volume, demand), params, spsa)
    at_mean = operating_objective(demand, PRICE, spec, params)(np.full(spec.band_size, 20.0))
    assert optimum.policy.shape == (1, spec.band_size)
    assert optimum.operating_cost <= at_mean + 1e-9


def test_spec_builder_is_called_per_candidate():
    built = []

    def builder(volume):
        built.append(volume)
        return ChainSpec(n=int(volume), n_p=0, n_s=int(volume) - 1, n_r=0, zeta=2, delta_x=1.0)

    codesign_sweep([6.0, 7.0], example1_demand(), PRICE, builder, PARAMS, 10, SpsaConfig(iterations=20), "constant")
    assert sorted(built) == [6.0, 7.0]


def sweep_bundled(name):
    config = load_run_config(CONFIG_DIR / name)
    instance = config.instance
    return codesign_sweep(
        config.candidates,
        instance.demand_model,
        instance.price_model,
        instance.spec_for,
        instance.params,
        config.horizon.N,
        config.spsa_config(),
        config.policy_shape,
        threads=2,
    )


@pytest.mark.slow
def test_state_dependent_thresholds_decrease_with_volume():
    best = sweep_bundled("example2.json").best
    assert best.volume == 8.0
    assert best.operating_N == pytest.approx(EXAMPLE2_OPERATING_N, rel=1e-2)
    assert is_nonincreasing(best.policy.thresholds[0], tolerance=0.05)
    assert best.policy.thresholds[0, 0] > best.policy.thresholds[0, -1]


@pytest.mark.slow
def test_uncertain_demand_codesign():
    result = sweep_bundled("example3.json")
    assert result.failures == []
    assert result.best_V == 9.6
    assert result.best.capital == pytest.approx(EXAMPLE3_CAPITAL, abs=1e-6)
    assert result.J_star == pytest.approx(EXAMPLE3_TOTAL, rel=1e-2)
