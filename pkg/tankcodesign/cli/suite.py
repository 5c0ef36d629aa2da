from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable, Dict, List, NamedTuple, Tuple

import numpy as np
import pandas as pd

from tankcodesign.chain import analytic_pi0_example1, build_chain, example1_demand, example1_geometry, stationary
from tankcodesign.config import RunConfig, load_run_config
from tankcodesign.model import PriceModel, ThresholdPolicy, is_nonincreasing
from tankcodesign.optimize import CoDesignResult, codesign_sweep, optimize_policy_for_tank
from tankcodesign.sensitivity import sensitivity_fixed_design, sensitivity_misassumed_design
from tankcodesign.simulate import convergence_report

logger = logging.getLogger(__name__)

CONSTANT_DEMAND_OPERATING = 1_140_421.0
CONSTANT_DEMAND_TOTAL = 1_220_421.0
STATE_THRESHOLD_OPERATING = 1_105_603.0
UNCERTAIN_DEMAND_TOTAL = 1_201_112.0
UNCERTAIN_DEMAND_CAPITAL = 96_000.0
NONINCREASING_TOLERANCE = 0.05

FIXED_DESIGN_DIFF_PCT: Dict[Tuple[float, float], float] = {
    (20.0, 10.0): 0.0,
    (20.0, 20.0): -57.27,
    (20.0, 5.0): 29.88,
    (24.0, 10.0): 36.07,
    (24.0, 20.0): -21.30,
    (24.0, 5.0): 64.57,
    (16.0, 10.0): -27.35,
    (16.0, 20.0): -84.71,
    (16.0, 5.0): 1.15,
}

MISASSUMED_DESIGN: Dict[Tuple[float, float], Tuple[float, float]] = {
    (20.0, 10.0): (9.6, 0.0),
    (20.0, 20.0): (12.3, 1.41),
    (20.0, 5.0): (7.5, 1.40),
    (24.0, 10.0): (9.6, 4.01),
    (24.0, 20.0): (12.3, 2.77),
    (24.0, 5.0): (7.5, 7.37),
    (16.0, 10.0): (9.6, 4.01),
    (16.0, 20.0): (12.3, 2.77),
    (16.0, 5.0): (7.5, 7.37),
}


class SuiteCheck(NamedTuple):
    """
    One reference check.

    Attributes:
        name: What is checked.
        value: Obtained value.
        expected: Reference value.
        tolerance: Accepted deviation, relative for costs and absolute otherwise.
        passed: Whether the check passed.
    """

    name: str
    value: float
    expected: float
    tolerance: float
    passed: bool


def relative_check(name: str, value: float, expected: float, tolerance: float) -> SuiteCheck:
    """Pass when |value - expected| ≤ tolerance·|expected|."""
    return SuiteCheck(name, value, expected, tolerance, abs(value - expected) <= tolerance * abs(expected))


def absolute_check(name: str, value: float, expected: float, tolerance: float) -> SuiteCheck:
    """Pass when |value - expected| ≤ tolerance."""
    return SuiteCheck(name, value, expected, tolerance, abs(value - expected) <= tolerance)


def _sweep(config: RunConfig, threads: int) -> CoDesignResult:
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
        threads,
    )


def constant_demand_checks(config: RunConfig, threads: int) -> List[SuiteCheck]:
    """Constant demand with one threshold: the optimum sits at V = 8 and α = μ."""
    result = _sweep(config, threads)
    best = result.best
    return [
        absolute_check("constant demand: tank volume", best.volume, 8.0, 1e-9),
        absolute_check("constant demand: threshold", float(best.policy.thresholds[0, 0]), 20.0, 0.2),
        relative_check("constant demand: operating cost", best.operating_N, CONSTANT_DEMAND_OPERATING, 0.005),
        relative_check("constant demand: total cost", best.total, CONSTANT_DEMAND_TOTAL, 0.005),
    ]


def closed_form_checks() -> List[SuiteCheck]:
    """Closed-form empty-tank probability against the numeric solve."""
    price = PriceModel.constant(20.0, 10.0)
    gap = 0.0
    for volume in range(4, 13):
        spec = example1_geometry(volume)
        for alpha in range(12, 29):
            policy = ThresholdPolicy.constant(alpha, spec)
            distribution = stationary(build_chain(example1_demand(), price, spec, policy))
            gap = max(gap, abs(distribution.probability(0) - analytic_pi0_example1(alpha, volume, price)))

    return [absolute_check("closed-form empty-tank probability", gap, 0.0, 1e-9)]


def state_threshold_checks(config: RunConfig, threads: int) -> List[SuiteCheck]:
    """Constant demand with state-dependent thresholds."""
    best = _sweep(config, threads).best
    nonincreasing = is_nonincreasing(best.policy.thresholds[0], tolerance=NONINCREASING_TOLERANCE)
    return [
        absolute_check("state thresholds: tank volume", best.volume, 8.0, 1e-9),
        relative_check("state thresholds: operating cost", best.operating_N, STATE_THRESHOLD_OPERATING, 0.01),
        absolute_check("state thresholds: nonincreasing in volume", float(nonincreasing), 1.0, 0.0),
    ]


def uncertain_demand_checks(config: RunConfig, threads: int) -> List[SuiteCheck]:
    """Uncertain demand with state-dependent thresholds."""
    best = _sweep(config, threads).best
    return [
        absolute_check("uncertain demand: tank volume", best.volume, 9.6, 1e-9),
        relative_check("uncertain demand: total cost", best.total, UNCERTAIN_DEMAND_TOTAL, 0.01),
        absolute_check("uncertain demand: capital cost", best.capital, UNCERTAIN_DEMAND_CAPITAL, 1e-6),
    ]


def ergodic_checks(config: RunConfig, runs: int = 100) -> List[SuiteCheck]:
    """Time averages of seeded runs against the expected operating cost at V = 8, α = 20."""
    instance = config.instance
    spec = instance.spec_for(8.0)
    policy = ThresholdPolicy.constant(20.0, spec)
    seeds = list(range(config.seed, config.seed + runs))
    report = convergence_report(
        policy, instance.demand_model, instance.price_model, spec, instance.params, seeds, [config.horizon.N]
    )
    checks = []
    for x0, group in report.groupby("x0"):
        passing = int(np.count_nonzero(group["rel_error"] < 0.01))
        checks.append(absolute_check(f"ergodic average from x0={x0}: runs within 1%", passing, runs, 0.01 * runs))

    return checks


def sensitivity_checks(config: RunConfig, threads: int) -> List[SuiteCheck]:
    """Fixed-design and misassumed-design price sensitivity."""
    instance = config.instance
    study = config.sensitivity
    volume = study.tank_volume if study.tank_volume is not None else config.volume()
    spec = instance.spec_for(volume)
    optimum = optimize_policy_for_tank(
        volume,
        instance.demand_model,
        instance.price_model,
        instance.spec_for,
        instance.params,
        config.spsa_config(),
        config.policy_shape,
    )
    checks = []
    fixed = sensitivity_fixed_design(
        optimum.policy,
        volume,
        list(FIXED_DESIGN_DIFF_PCT),
        instance.demand_model,
        spec,
        instance.params,
        config.horizon.N,
    )
    for row in fixed:
        expected = FIXED_DESIGN_DIFF_PCT[(row.mu, row.sigma)]
        checks.append(absolute_check(f"fixed design ({row.mu:g}, {row.sigma:g}): diff %", row.diff_pct, expected, 2.0))

    misassumed = sensitivity_misassumed_design(
        list(MISASSUMED_DESIGN),
        study.true_params,
        config.candidates,
        instance.demand_model,
        instance.spec_for,
        instance.params,
        config.horizon.N,
        config.spsa_config(),
        config.policy_shape,
        threads,
    )
    for row in misassumed:
        volume, diff = MISASSUMED_DESIGN[(row.mu, row.sigma)]
        label = f"misassumed design ({row.mu:g}, {row.sigma:g})"
        checks.append(absolute_check(f"{label}: tank volume", row.volume, volume, 1e-9))
        checks.append(absolute_check(f"{label}: diff %", row.diff_pct, diff, 2.0))

    return checks


def run_reference_suite(config_dir: Path, seed: int = 0, threads: int = 1) -> pd.DataFrame:
    """
    Run every reference check on the bundled example configurations.

    Args:
        config_dir: Directory holding example1.json, example2.json and example3.json.
        seed: Run seed.
        threads: Worker threads.

    Returns:
        Frame with one row per check: name, value, expected, tolerance, passed.
    """
    configs = {
        name: load_run_config(config_dir / f"{name}.json").with_overrides(seed=seed)
        for name in ("example1", "example2", "example3")
    }
    stages: List[Tuple[str, Callable[[], List[SuiteCheck]]]] = [
        ("constant demand", lambda: constant_demand_checks(configs["example1"], threads)),
        ("closed form", closed_form_checks),
        ("state thresholds", lambda: state_threshold_checks(configs["example2"], threads)),
        ("uncertain demand", lambda: uncertain_demand_checks(configs["example3"], threads)),
        ("ergodic averages", lambda: ergodic_checks(configs["example1"])),
        ("sensitivity", lambda: sensitivity_checks(configs["example3"], threads)),
    ]
    checks: List[SuiteCheck] = []
    for label, stage in stages:
        logger.info("Reference suite: %s", label)
        checks.extend(stage())

    return pd.DataFrame(checks, columns=list(SuiteCheck._fields))
