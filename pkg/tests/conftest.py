from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as hst
from hypothesis.strategies import composite

from tankcodesign.chain import example1_demand, example1_geometry
from tankcodesign.model import ChainSpec, CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy

N_YEAR = 175200
EXAMPLE1_OPERATING_N = 1140421.0
EXAMPLE1_TOTAL = 1220421.0
EXAMPLE2_OPERATING_N = 1105603.0
EXAMPLE3_TOTAL = 1201112.0
EXAMPLE3_CAPITAL = 96000.0

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture
def example1_price() -> PriceModel:
    return PriceModel.constant(20.0, 10.0)


@pytest.fixture
def example1_spec() -> ChainSpec:
    return example1_geometry(8)


@pytest.fixture
def example1_params() -> CostParams:
    return CostParams(eps_p=1.0, penalty_w=0.0, capital_cost=lambda volume: 10000.0 * volume)


@pytest.fixture
def unit_demand() -> QuantizedDemandModel:
    return example1_demand()


@pytest.fixture
def idle_instance():
    """Zero demand: every state above n_s is absorbing, so the chain has three closed classes."""
    demand = QuantizedDemandModel.constant(1.0, 0)
    spec = ChainSpec(n=8, n_p=0, n_s=5, n_r=0, zeta=2, delta_x=1.0)
    return demand, PriceModel.constant(20.0, 10.0), spec


@pytest.fixture
def small_instance():
    """Two-phase instance with random demand on a small tank."""
    demand = QuantizedDemandModel(1.0, np.array([[0.1, 0.5, 0.4], [0.2, 0.6, 0.2]]))
    price = PriceModel(np.array([15.0, 25.0]), np.array([5.0, 8.0]))
    spec = ChainSpec(n=6, n_p=1, n_s=4, n_r=1, zeta=2, delta_x=1.0, period_T=2)
    policy = ThresholdPolicy(np.array([[18.0, 16.0, 14.0], [26.0, 22.0, 20.0]]))
    params = CostParams(eps_p=1.5, penalty_w=3.0)
    return demand, price, spec, policy, params


@composite
def demand_tables(draw, period_T=None, max_levels=4):
    """Row-stochastic demand tables with levels 1 and 2 always possible."""
    period_T = period_T if period_T is not None else draw(hst.integers(min_value=1, max_value=3))
    levels = draw(hst.integers(min_value=3, max_value=max_levels))
    weights = draw(
        hst.lists(
            hst.lists(hst.floats(min_value=0.05, max_value=1.0), min_size=levels, max_size=levels),
            min_size=period_T,
            max_size=period_T,
        )
    )
    probs = np.array(weights)
    probs[:, 0] = 0.0
    probs[:, 3:] = 0.0
    return probs / probs.sum(axis=1, keepdims=True)


@composite
def chain_instances(draw, max_n=12, max_levels=4):
    """Valid instances with two-quantum pumping and demand levels 1 and 2."""
    probs = draw(demand_tables(max_levels=max_levels))
    period_T = probs.shape[0]
    n = draw(hst.integers(min_value=5, max_value=max_n))
    spec = ChainSpec(n=n, n_p=1, n_s=n - 1, n_r=1, zeta=2, delta_x=1.0, period_T=period_T)
    mean = np.array(draw(hst.lists(hst.floats(10.0, 30.0), min_size=period_T, max_size=period_T)))
    std = np.array(draw(hst.lists(hst.floats(2.0, 12.0), min_size=period_T, max_size=period_T)))
    price = PriceModel(mean, std)
    offsets = draw(
        hst.lists(hst.floats(-2.0, 2.0), min_size=period_T * spec.band_size, max_size=period_T * spec.band_size)
    )
    policy = ThresholdPolicy(
        np.repeat(mean[:, None], spec.band_size, axis=1) + np.reshape(offsets, (period_T, spec.band_size))
        * np.repeat(std[:, None], spec.band_size, axis=1)
    )
    return QuantizedDemandModel(1.0, probs), price, spec, policy
