import numpy as np
import pytest

from tankcodesign.chain import example1_demand, example1_geometry
from tankcodesign.config import SpsaConfig, load_run_config
from tankcodesign.model import CostParams, ThresholdPolicy
from tankcodesign.optimize import optimize_policy_for_tank
from tankcodesign.sensitivity import (
    difference_pct,
    rows_frame,
    sensitivity_fixed_design,
    sensitivity_misassumed_design,
    stationary_profiles,
)
from tests.conftest import CONFIG_DIR, N_YEAR

PARAMS = CostParams(eps_p=1.0, penalty_w=0.0, capital_cost=lambda volume: 10000.0 * volume)


def test_fixed_design_under_shifted_prices():
    spec = example1_geometry(8)
    policy = ThresholdPolicy.constant(20.0, spec)
    grid = [(20.0, 10.0), (24.0, 10.0), (16.0, 10.0), (20.0, 14.0)]
    rows = sensitivity_fixed_design(policy, 8.0, grid, example1_demand(), spec, PARAMS, N_YEAR)
    assert [(row.mu, row.sigma) for row in rows] == grid
    assert rows[0].diff_pct == 0.0
    assert rows[1].diff_pct > 0.0 > rows[2].diff_pct
    assert all(row.volume == 8.0 and row.capital == 80000.0 for row in rows)
    assert rows[1].total == pytest.approx(rows[1].capital + rows[1].operating_N)


def test_fixed_design_baseline_outside_the_grid():
    spec = example1_geometry(8)
    policy = ThresholdPolicy.constant(20.0, spec)
    rows = sensitivity_fixed_design(
        policy, 8.0, [(24.0, 10.0)], example1_demand(), spec, PARAMS, N_YEAR, baseline=(20.0, 10.0)
    )
    reference = sensitivity_fixed_design(policy, 8.0, [(20.0, 10.0)], example1_demand(), spec, PARAMS, N_YEAR)
    assert rows[0].diff_pct == pytest.approx(difference_pct(rows[0].operating_N, reference[0].operating_N))


def test_empty_grid_is_rejected():
    spec = example1_geometry(8)
    with pytest.raises(ValueError, match="non-empty"):
        sensitivity_fixed_design(
            ThresholdPolicy.constant(20.0, spec), 8.0, [], example1_demand(), spec, PARAMS, N_YEAR
        )


def test_misassumed_design_is_never_better_than_the_true_design():
    rows = sensitivity_misassumed_design(
        [(20.0, 10.0), (26.0, 10.0), (20.0, 4.0)],
        (20.0, 10.0),
        [6.0, 7.0, 8.0, 9.0, 10.0],
        example1_demand(),
        example1_geometry,
        PARAMS,
        N_YEAR,
        SpsaConfig(iterations=100, restarts=1),
        "constant",
    )
    assert rows[0].diff_pct == 0.0
    assert rows[0].volume == 8.0
    assert all(row.diff_pct > -1e-3 for row in rows)
    frame = rows_frame(rows)
    assert list(frame.columns) == ["mu", "sigma", "V", "capital", "operating_N", "total", "diff_pct"]
    assert frame["V"].tolist()[0] == 8.0


def test_stationary_profiles_stack_every_grid_point():
    spec = example1_geometry(8)
    policy = ThresholdPolicy.constant(20.0, spec)
    frame = stationary_profiles(policy, example1_demand(), spec, [(20.0, 10.0), (25.0, 5.0)])
    assert len(frame) == 2 * spec.size
    np.testing.assert_allclose(frame.groupby(["mu", "sigma"])["pi"].sum(), 1.0)
    symmetric = frame[frame["mu"] == 20.0]
    assert symmetric["pi"].iloc[0] == pytest.approx(1.0 / 16.0)


@pytest.fixture(scope="module")
def uncertain_demand():
    config = load_run_config(CONFIG_DIR / "example3.json")
    return config, config.instance


@pytest.mark.slow
def test_fixed_design_price_shifts(uncertain_demand):
    config, instance = uncertain_demand
    optimum = optimize_policy_for_tank(
        9.6,
        instance.demand_model,
        instance.price_model,
        instance.spec_for,
        instance.params,
        config.spsa_config(),
        config.policy_shape,
    )
    rows = sensitivity_fixed_design(
        optimum.policy,
        9.6,
        [(20.0, 10.0), (24.0, 10.0), (16.0, 20.0)],
        instance.demand_model,
        instance.spec_for(9.6),
        instance.params,
        config.horizon.N,
    )
    assert [row.diff_pct for row in rows] == pytest.approx([0.0, 36.07, -84.71], abs=2.0)


@pytest.mark.slow
def test_misassumed_designs(uncertain_demand):
    config, instance = uncertain_demand
    expected = {
        (20.0, 10.0): (9.6, 0.0),
        (20.0, 20.0): (12.3, 1.41),
        (20.0, 5.0): (7.5, 1.40),
        (24.0, 5.0): (7.5, 7.37),
        (16.0, 20.0): (12.3, 2.77),
    }
    rows = sensitivity_misassumed_design(
        list(expected),
        (20.0, 10.0),
        config.candidates,
        instance.demand_model,
        instance.spec_for,
        instance.params,
        config.horizon.N,
        config.spsa_config(),
        config.policy_shape,
        threads=2,
    )
    for row in rows:
        volume, diff_pct = expected[(row.mu, row.sigma)]
        assert row.volume == volume
        assert row.diff_pct == pytest.approx(diff_pct, abs=2.0)
