import numpy as np
import pytest

from tankcodesign.chain import build_chain, stationary, visit_frequencies_match
from tankcodesign.cost import evaluate_policy
from tankcodesign.errors import InvalidInstanceError
from tankcodesign.model import ChainSpec, CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy
from tankcodesign.simulate import convergence_report, empirical_transition_matrix, relative_error, simulate
from tests.conftest import EXAMPLE1_OPERATING_N, N_YEAR


@pytest.fixture
def example1_setup(unit_demand, example1_price, example1_spec, example1_params):
    return ThresholdPolicy.constant(20.0, example1_spec), unit_demand, example1_price, example1_spec, example1_params


def test_time_average_approaches_expected_cost(example1_setup):
    result = simulate(*example1_setup, N=N_YEAR, x0=0, seed=1)
    assert result.W_N * N_YEAR == pytest.approx(EXAMPLE1_OPERATING_N, rel=1.5e-2)
    assert result.visit_counts.sum() == N_YEAR
    assert result.empty_events == 0


def test_same_seed_same_run(small_instance):
    demand, price, spec, policy, params = small_instance
    first = simulate(policy, demand, price, spec, params, N=5000, x0=3, seed=42)
    second = simulate(policy, demand, price, spec, params, N=5000, x0=3, seed=42)
    assert first.W_N == second.W_N
    np.testing.assert_array_equal(first.visit_counts, second.visit_counts)
    other = simulate(policy, demand, price, spec, params, N=5000, x0=3, seed=43)
    assert other.W_N != first.W_N


def test_price_stream_does_not_depend_on_demand_model(small_instance):
    demand, price, spec, policy, params = small_instance
    heavier = QuantizedDemandModel(1.0, np.array([[0.0, 0.2, 0.8], [0.0, 0.3, 0.7]]))
    first = simulate(policy, demand, price, spec, params, N=500, x0=3, seed=5, record_trajectory=True)
    second = simulate(policy, heavier, price, spec, params, N=500, x0=3, seed=5, record_trajectory=True)
    np.testing.assert_array_equal(first.trajectory["price"], second.trajectory["price"])


def test_visit_frequencies_and_transitions_match_the_chain(small_instance):
    demand, price, spec, policy, params = small_instance
    transitions = build_chain(demand, price, spec, policy)
    distribution = stationary(transitions)
    N = 1_000_000
    result = simulate(policy, demand, price, spec, params, N=N, x0=0, seed=2024)
    assert visit_frequencies_match(distribution, result.visit_counts, N) < 5e-3
    empirical = empirical_transition_matrix(result.transition_counts).toarray()
    visited = np.asarray(result.transition_counts.sum(axis=1)).ravel() >= 100_000
    assert visited.any()
    np.testing.assert_allclose(empirical[visited], transitions.dense()[visited], atol=5e-3)
    expected, _ = evaluate_policy(policy, price, demand, spec, params)
    assert result.W_N == pytest.approx(expected.total_per_interval, rel=2e-2)


def test_full_tank_without_demand_costs_nothing():
    demand = QuantizedDemandModel.constant(1.0, 0)
    spec = ChainSpec(n=6, n_p=0, n_s=4, n_r=0, zeta=2, delta_x=1.0)
    price = PriceModel.constant(20.0, 10.0)
    result = simulate(ThresholdPolicy.constant(20.0, spec), demand, price, spec, CostParams(), N=1000, x0=6, seed=0)
    assert result.W_N == 0.0
    assert result.visit_counts[6] == 1000
    assert result.enforced_events == 0


def test_trajectory_record(small_instance):
    demand, price, spec, policy, params = small_instance
    result = simulate(policy, demand, price, spec, params, N=200, x0=6, seed=3, record_trajectory=True)
    frame = result.trajectory
    assert list(frame.columns) == ["k", "kappa", "i", "price", "demand_tau", "pumped", "cost"]
    assert frame["i"].iloc[0] == 6
    assert frame["kappa"].tolist()[:4] == [0, 1, 0, 1]
    assert frame["cost"].sum() == pytest.approx(result.W_N * 200)
    # enforced pumping at or below n_p, never above n_s
    assert frame.loc[frame["i"] <= spec.n_p, "pumped"].all()
    assert not frame.loc[frame["i"] > spec.n_s, "pumped"].any()
    next_i = np.maximum(frame["i"] + spec.zeta * frame["pumped"] - frame["demand_tau"], 0)
    np.testing.assert_array_equal(next_i.to_numpy()[:-1], frame["i"].to_numpy()[1:])
    assert result.trajectory_summary.shape == (2,)


def test_simulation_rejects_bad_arguments(small_instance):
    demand, price, spec, policy, params = small_instance
    with pytest.raises(ValueError, match="x0 must lie"):
        simulate(policy, demand, price, spec, params, N=10, x0=7, seed=0)

    with pytest.raises(ValueError, match="N must be positive"):
        simulate(policy, demand, price, spec, params, N=0, x0=0, seed=0)

    bad = QuantizedDemandModel(1.0, np.array([[0.1, 0.5, 0.3], [0.2, 0.6, 0.2]]))
    with pytest.raises(InvalidInstanceError):
        simulate(policy, bad, price, spec, params, N=10, x0=0, seed=0)


def test_partial_horizon_average(small_instance):
    demand, price, spec, policy, params = small_instance
    result = simulate(policy, demand, price, spec, params, N=100, x0=0, seed=9)
    assert result.average_cost(100) == pytest.approx(result.W_N)
    assert result.average_cost(10) == pytest.approx(float(np.mean(result.costs[:10])))
    with pytest.raises(ValueError, match="horizon"):
        result.average_cost(101)


def test_relative_error():
    assert relative_error(101.0, 100.0) == pytest.approx(0.01)
    assert relative_error(0.5, 0.0) == 0.5


def test_convergence_report_starts_from_both_ends(example1_setup):
    frame = convergence_report(*example1_setup, seeds=[0, 1], N_grid=[1000, N_YEAR])
    assert list(frame.columns) == ["seed", "N", "x0", "W_N", "rel_error"]
    assert len(frame) == 8
    assert sorted(frame["x0"].unique().tolist()) == [0, 8]
    assert (frame.loc[frame["N"] == N_YEAR, "rel_error"] < 1.5e-2).all()


@pytest.mark.slow
def test_hundred_seeds_stay_within_one_percent(example1_setup):
    frame = convergence_report(*example1_setup, seeds=list(range(100)), N_grid=[N_YEAR], x0s=[0])
    within = int((frame["rel_error"] < 1e-2).sum())
    assert within >= 95
    assert frame["W_N"].mean() * N_YEAR == pytest.approx(EXAMPLE1_OPERATING_N, rel=5e-3)


@pytest.mark.slow
def test_full_tank_start_converges_too(example1_setup):
    frame = convergence_report(*example1_setup, seeds=list(range(10)), N_grid=[N_YEAR], x0s=[8])
    assert frame["W_N"].mean() * N_YEAR == pytest.approx(EXAMPLE1_OPERATING_N, rel=5e-3)
