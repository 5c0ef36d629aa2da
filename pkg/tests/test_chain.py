import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from scipy.stats import norm

from tankcodesign.chain import (
    build_chain,
    check_irreducible,
    closed_classes,
    count_communicating_classes,
    pump_probabilities,
    transition_table,
)
from tankcodesign.errors import DimensionMismatchError, InvalidInstanceError
from tankcodesign.model import ChainSpec, PriceModel, QuantizedDemandModel, ThresholdPolicy
from tankcodesign.config import load_run_config
from tests.conftest import CONFIG_DIR, chain_instances


def test_example1_rows_follow_random_walk(unit_demand, example1_price, example1_spec):
    policy = ThresholdPolicy.constant(25.0, example1_spec)
    dense = build_chain(unit_demand, example1_price, example1_spec, policy).dense()
    p = float(example1_price.cdf(0, 25.0))
    assert dense[0, 1] == pytest.approx(1.0)
    for i in range(1, 8):
        assert dense[i, i + 1] == pytest.approx(p)
        assert dense[i, i - 1] == pytest.approx(1.0 - p)

    assert dense[8, 7] == pytest.approx(1.0)
    np.testing.assert_allclose(dense.sum(axis=1), 1.0, atol=1e-12)


def test_clamp_at_empty_merges_targets():
    demand = QuantizedDemandModel(1.0, np.array([[0.0, 0.5, 0.5]]))
    spec = ChainSpec(n=5, n_p=1, n_s=3, n_r=0, zeta=2, delta_x=1.0)
    price = PriceModel.constant(20.0, 10.0)
    dense = build_chain(demand, price, spec, ThresholdPolicy.constant(-np.inf, spec)).dense()
    # from i = 2 without pumping: 2 - 1 = 1 or 2 - 2 = 0
    assert dense[2, 1] == pytest.approx(0.5)
    assert dense[2, 0] == pytest.approx(0.5)
    # from i = 0 with pumping: 0 + 2 - 1 = 1 or 0 + 2 - 2 = 0
    assert dense[0].tolist() == [0.5, 0.5, 0.0, 0.0, 0.0, 0.0]


def test_hand_built_two_phase_chain():
    demand = QuantizedDemandModel(1.0, np.array([[0.0, 1.0], [0.0, 1.0]]))
    spec = ChainSpec(n=3, n_p=0, n_s=2, n_r=0, zeta=2, delta_x=1.0, period_T=2)
    price = PriceModel(np.array([10.0, 30.0]), np.array([5.0, 5.0]))
    policy = ThresholdPolicy(np.array([[10.0, 10.0], [30.0, 30.0]]))
    transitions = build_chain(demand, price, spec, policy)
    block = transitions.block(0)
    assert block.shape == (4, 4)
    np.testing.assert_allclose(block[1], [0.5, 0.0, 0.5, 0.0])
    assert transitions.block(1)[3, 2] == pytest.approx(1.0)
    # only transitions from phase 0 to 1 and from 1 to 0 exist
    assert transitions.dense()[:4, :4].sum() == 0.0


def test_pump_probabilities_match_price_cdf(small_instance):
    _, price, spec, policy, _ = small_instance
    table = pump_probabilities(price, spec, policy)
    assert table.shape == (2, 7)
    assert table[1, 0] == 1.0 and table[1, 6] == 0.0
    assert table[0, 2] == pytest.approx(float(price.cdf(0, 18.0)))


def test_build_chain_rejects_invalid_instance(example1_spec, example1_price):
    demand = QuantizedDemandModel(1.0, np.array([[0.0, 0.9]]))
    with pytest.raises(InvalidInstanceError, match="probability normalization"):
        build_chain(demand, example1_price, example1_spec, ThresholdPolicy.constant(20.0, example1_spec))


def test_build_chain_rejects_mismatched_policy(unit_demand, example1_price, example1_spec):
    with pytest.raises(DimensionMismatchError):
        build_chain(unit_demand, example1_price, example1_spec, ThresholdPolicy(np.zeros((1, 3))))


def test_never_pumping_band_is_reducible(unit_demand, example1_price, example1_spec):
    transitions = build_chain(
        unit_demand, example1_price, example1_spec, ThresholdPolicy.constant(-np.inf, example1_spec)
    )
    assert not check_irreducible(transitions)
    assert count_communicating_classes(transitions) > 1
    # the tank settles into 0 <-> 1
    assert [states.tolist() for states in closed_classes(transitions)] == [[0, 1]]


def test_transition_table_lists_nonzero_entries(unit_demand, example1_price, example1_spec):
    transitions = build_chain(unit_demand, example1_price, example1_spec, ThresholdPolicy.constant(20.0, example1_spec))
    frame = transition_table(transitions)
    assert list(frame.columns) == ["from_i", "from_kappa", "to_i", "to_kappa", "prob"]
    assert len(frame) == transitions.matrix.nnz == 16
    assert frame.iloc[0].tolist() == [0, 0, 1, 0, 1.0]


@given(chain_instances())
@settings(
    deadline=None,
    max_examples=40,
    suppress_health_check=[*settings.default.suppress_health_check, HealthCheck.too_slow],
)
def test_random_instances_are_stochastic_and_irreducible(instance):
    demand, price, spec, policy = instance
    transitions = build_chain(demand, price, spec, policy)
    np.testing.assert_allclose(transitions.row_sums, 1.0, atol=1e-12)
    assert transitions.matrix.min() >= 0.0
    assert check_irreducible(transitions)


def brute_force_matrix(demand, price, spec, policy):
    n1 = spec.n + 1
    dense = np.zeros((spec.size, spec.size))
    for kappa in range(spec.period_T):
        target = ((kappa + 1) % spec.period_T) * n1
        for i in range(n1):
            if i <= spec.n_p:
                p = 1.0
            elif i <= spec.n_s:
                alpha = policy.thresholds[kappa, i - spec.n_p - 1]
                p = float(norm.cdf(alpha, loc=price.mean[kappa], scale=price.std[kappa]))
            else:
                p = 0.0

            for tau in range(demand.levels_m):
                a = demand.probs[kappa, tau]
                if a == 0.0:
                    continue

                if p > 0.0:
                    dense[kappa * n1 + i, target + max(0, i + spec.zeta - tau)] += p * a

                if p < 1.0:
                    dense[kappa * n1 + i, target + max(0, i - tau)] += (1.0 - p) * a

    return dense


@given(chain_instances(max_n=6, max_levels=3))
@settings(
    deadline=None,
    max_examples=40,
    suppress_health_check=[*settings.default.suppress_health_check, HealthCheck.too_slow],
)
def test_accumulated_mass_matches_enumeration(instance):
    demand, price, spec, policy = instance
    dense = build_chain(demand, price, spec, policy).dense()
    np.testing.assert_allclose(dense, brute_force_matrix(*instance), atol=1e-14)


def test_hand_enumerated_five_state_chain():
    demand = QuantizedDemandModel(1.0, np.array([[0.5, 0.5]]))
    spec = ChainSpec(n=4, n_p=1, n_s=2, n_r=0, zeta=2, delta_x=1.0)
    dense = build_chain(demand, PriceModel.constant(20.0, 10.0), spec, ThresholdPolicy.constant(20.0, spec)).dense()
    expected = [
        [0.0, 0.5, 0.5, 0.0, 0.0],
        [0.0, 0.0, 0.5, 0.5, 0.0],
        [0.0, 0.25, 0.25, 0.25, 0.25],
        [0.0, 0.0, 0.5, 0.5, 0.0],
        [0.0, 0.0, 0.0, 0.5, 0.5],
    ]
    np.testing.assert_allclose(dense, expected, atol=1e-15)


def test_full_tank_rows_stay_inside_the_tank(unit_demand, example1_price, example1_spec):
    transitions = build_chain(unit_demand, example1_price, example1_spec, ThresholdPolicy.constant(20.0, example1_spec))
    assert transitions.dense()[example1_spec.n].tolist() == [0.0] * 7 + [1.0, 0.0]


def test_uncertain_demand_geometry_builds_above_the_band():
    instance = load_run_config(CONFIG_DIR / "example3.json").instance
    spec = instance.spec_for(9.6)
    price = instance.price_model
    transitions = build_chain(instance.demand_model, price, spec, ThresholdPolicy.at_mean(price.mean, spec))
    assert transitions.matrix.shape == (97, 97)
    np.testing.assert_allclose(transitions.row_sums, 1.0, atol=1e-12)
    # states above n_p = 12 lose at most 12 quanta, states at or below it gain at least 8
    assert transitions.dense()[:, 0].sum() == 0.0
    assert not check_irreducible(transitions)
    assert len(closed_classes(transitions)) == 1


def test_absorbing_states_form_separate_closed_classes(idle_instance):
    demand, price, spec = idle_instance
    transitions = build_chain(demand, price, spec, ThresholdPolicy.constant(20.0, spec))
    assert sorted(states.tolist() for states in closed_classes(transitions)) == [[6], [7], [8]]
