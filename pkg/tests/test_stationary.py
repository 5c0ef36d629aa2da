import importlib
from unittest import mock

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from tankcodesign.chain import (
    analytic_pi0_example1,
    analytic_stationary_example1,
    balance_residual,
    build_chain,
    example1_demand,
    example1_geometry,
    stationary,
    stationary_table,
    visit_frequencies_match,
)
from tankcodesign.errors import InvalidInstanceError, ReducibleChainError, StationarySolveError
from tankcodesign.model import ChainSpec, PriceModel, QuantizedDemandModel, ThresholdPolicy
from tankcodesign.config import load_run_config
from tests.conftest import CONFIG_DIR, chain_instances

PRICE = PriceModel.constant(20.0, 10.0)

stationary_module = importlib.import_module("tankcodesign.chain.stationary")


def numeric_pi(alpha, volume):
    spec = example1_geometry(volume)
    transitions = build_chain(example1_demand(), PRICE, spec, ThresholdPolicy.constant(alpha, spec))
    return stationary(transitions).pi


def test_symmetric_threshold_gives_uniform_band():
    pi = numeric_pi(20.0, 8)
    assert pi[0] == pytest.approx(0.0625, abs=1e-12)
    np.testing.assert_allclose(pi[1:8], 0.125, atol=1e-12)
    assert pi[8] == pytest.approx(0.0625, abs=1e-12)


def test_closed_form_below_the_mean():
    p = float(PRICE.cdf(0, 18.0))
    assert p == pytest.approx(0.42074, abs=1e-5)
    assert analytic_pi0_example1(18.0, 8, PRICE) == pytest.approx(numeric_pi(18.0, 8)[0], abs=1e-9)


@pytest.mark.parametrize("volume", range(4, 13))
@pytest.mark.parametrize("alpha", [float(alpha) for alpha in range(12, 29)])
def test_closed_form_matches_linear_solve(alpha, volume):
    pi = numeric_pi(alpha, volume)
    assert analytic_pi0_example1(alpha, volume, PRICE) == pytest.approx(pi[0], abs=1e-9)
    np.testing.assert_allclose(analytic_stationary_example1(alpha, volume, PRICE), pi, atol=1e-9)


def test_closed_form_near_the_symmetric_point_is_continuous():
    near = analytic_pi0_example1(20.0 + 1e-9, 8, PRICE)
    assert near == pytest.approx(1.0 / 16.0, abs=1e-7)


def test_closed_form_rejects_non_integer_volume():
    with pytest.raises(InvalidInstanceError, match="integer tank size"):
        analytic_pi0_example1(20.0, 7.5, PRICE)


def test_closed_form_rejects_degenerate_pumping():
    with pytest.raises(ReducibleChainError):
        analytic_pi0_example1(np.inf, 8, PRICE)


def test_chain_with_several_closed_classes_is_refused(idle_instance):
    demand, price, spec = idle_instance
    transitions = build_chain(demand, price, spec, ThresholdPolicy.constant(20.0, spec))
    with pytest.raises(ReducibleChainError, match="not unique: chain has 3 closed"):
        stationary(transitions)


def test_transient_states_carry_no_mass():
    spec = example1_geometry(8)
    transitions = build_chain(example1_demand(), PRICE, spec, ThresholdPolicy.constant(-np.inf, spec))
    distribution = stationary(transitions)
    np.testing.assert_allclose(distribution.pi, [0.5, 0.5] + [0.0] * 7, atol=1e-12)
    assert distribution.residual <= 1e-10


def test_hand_enumerated_chain_with_unreachable_empty_tank():
    demand = QuantizedDemandModel(1.0, np.array([[0.5, 0.5]]))
    spec = ChainSpec(n=4, n_p=1, n_s=2, n_r=0, zeta=2, delta_x=1.0)
    distribution = stationary(build_chain(demand, PRICE, spec, ThresholdPolicy.constant(20.0, spec)))
    np.testing.assert_allclose(distribution.pi, [0.0, 1 / 12, 1 / 3, 5 / 12, 1 / 6], atol=1e-12)


def test_uncertain_demand_chain_solves_at_the_mean_price():
    instance = load_run_config(CONFIG_DIR / "example3.json").instance
    spec = instance.spec_for(9.6)
    price = instance.price_model
    transitions = build_chain(instance.demand_model, price, spec, ThresholdPolicy.at_mean(price.mean, spec))
    distribution = stationary(transitions)
    assert distribution.probability(0) == 0.0
    assert distribution.pi.sum() == pytest.approx(1.0, abs=1e-12)
    assert distribution.residual <= 1e-10
    assert np.all(distribution.pi[1:] > 0.0)


def test_residual_above_tolerance_is_reported(unit_demand, example1_spec):
    transitions = build_chain(unit_demand, PRICE, example1_spec, ThresholdPolicy.constant(20.0, example1_spec))
    with mock.patch.object(stationary_module, "solve_balance", return_value=np.full(example1_spec.size, 1.0)):
        with pytest.raises(StationarySolveError, match="residual") as info:
            stationary(transitions)

    assert info.value.residual > 1e-10


def test_sparse_path_agrees_with_dense_path(unit_demand, example1_spec):
    transitions = build_chain(unit_demand, PRICE, example1_spec, ThresholdPolicy.constant(23.0, example1_spec))
    dense = stationary(transitions).pi
    with mock.patch.object(stationary_module, "DENSE_SOLVER_LIMIT", 0):
        sparse_pi = stationary(transitions).pi

    np.testing.assert_allclose(sparse_pi, dense, atol=1e-12)


def test_large_periodic_chain_uses_sparse_solver():
    period_T = 24
    probs = np.zeros((period_T, 13))
    probs[:, 8:13] = 0.2
    demand = QuantizedDemandModel(0.1, probs)
    spec = ChainSpec(n=300, n_p=11, n_s=288, n_r=0, zeta=20, delta_x=0.1, period_T=period_T)
    price = PriceModel(np.linspace(15.0, 30.0, period_T), np.full(period_T, 6.0))
    transitions = build_chain(demand, price, spec, ThresholdPolicy.at_mean(price.mean, spec))
    assert spec.size > 5000
    distribution = stationary(transitions)
    assert distribution.pi.sum() == pytest.approx(1.0)
    assert distribution.residual <= 1e-10
    # every phase is visited once per cycle
    np.testing.assert_allclose(distribution.table().sum(axis=1), 1.0 / period_T, atol=1e-10)


def test_visit_frequency_gap():
    spec = example1_geometry(2)
    transitions = build_chain(example1_demand(), PRICE, spec, ThresholdPolicy.constant(20.0, spec))
    distribution = stationary(transitions)
    assert visit_frequencies_match(distribution, np.array([1, 2, 1]), 4) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError, match="expected N"):
        visit_frequencies_match(distribution, np.array([1, 2, 1]), 5)


def test_stationary_table_lists_states_in_flat_order(small_instance):
    demand, price, spec, policy, _ = small_instance
    frame = stationary_table(stationary(build_chain(demand, price, spec, policy)))
    assert frame[["i", "kappa"]].iloc[7].tolist() == [0, 1]
    assert frame["pi"].sum() == pytest.approx(1.0)


@given(chain_instances())
@settings(
    deadline=None,
    max_examples=40,
    suppress_health_check=[*settings.default.suppress_health_check, HealthCheck.too_slow],
)
def test_stationary_vector_is_a_fixed_point(instance):
    demand, price, spec, policy = instance
    transitions = build_chain(demand, price, spec, policy)
    distribution = stationary(transitions)
    assert np.all(distribution.pi >= 0.0)
    assert distribution.pi.sum() == pytest.approx(1.0, abs=1e-12)
    assert balance_residual(transitions, distribution.pi) <= 1e-10
