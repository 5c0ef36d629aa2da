from __future__ import annotations

import logging
from dataclasses import asdict
from typing import Any, Callable, Dict, List

import numpy as np

from tankcodesign.chain import (
    build_chain,
    check_irreducible,
    closed_classes,
    stationary,
    stationary_table,
    transition_table,
)
from tankcodesign.cli.outputs import Artifacts
from tankcodesign.config import ModelDocument, RunConfig
from tankcodesign.cost import CostBreakdown, cost_report, evaluate_policy, npv_factor
from tankcodesign.errors import InvalidInstanceError
from tankcodesign.optimize import codesign_sweep, cost_surface, optimize_policy_for_tank
from tankcodesign.sensitivity import (
    rows_frame,
    sensitivity_fixed_design,
    sensitivity_misassumed_design,
    stationary_profiles,
)
from tankcodesign.simulate import convergence_report, simulate

logger = logging.getLogger(__name__)

Command = Callable[[RunConfig, Artifacts], None]


def simulation_seeds(config: RunConfig) -> List[int]:
    """Consecutive seeds of the Monte Carlo runs, starting at the run seed."""
    return list(range(config.seed, config.seed + config.simulation.runs))


def _report(config: RunConfig, volume: float, breakdown: CostBreakdown) -> Dict[str, float]:
    capital = config.instance.params.capital_cost(volume)
    horizon = config.horizon
    npv = None
    if horizon.K is not None:
        factor = npv_factor(horizon.N, horizon.K, horizon.beta, horizon.xi)
        npv = capital + horizon.K * breakdown.total_per_interval * factor

    return cost_report(capital, breakdown, horizon.N, npv)


def run_validate(config: RunConfig, artifacts: Artifacts) -> None:
    """Check the instance at the tank volume and every candidate."""
    volumes = ([config.tank_volume] if config.tank_volume is not None else []) + list(config.candidates)
    if not volumes:
        raise ValueError("validate needs tank_volume or candidates")

    reports = {str(volume): config.instance.check(volume) for volume in volumes}
    artifacts.json(
        "validation.json",
        {volume: {check.name: check.passed for check in report.checks} for volume, report in reports.items()},
    )
    failures = sorted({name for report in reports.values() for name in report.failures})
    if failures:
        raise InvalidInstanceError("invalid instance: " + ", ".join(failures), failures)


def run_chain(config: RunConfig, artifacts: Artifacts) -> None:
    """Build the transition matrix and dump its nonzero entries."""
    spec = config.instance.spec_for(config.volume())
    transitions = build_chain(
        config.instance.demand_model, config.instance.price_model, spec, config.policy(spec)
    )
    artifacts.csv("transitions.csv", transition_table(transitions))
    artifacts.json(
        "chain.json",
        {
            "chain_spec": asdict(spec),
            "states": spec.size,
            "nonzeros": int(transitions.matrix.nnz),
            "irreducible": check_irreducible(transitions),
            "closed_classes": len(closed_classes(transitions)),
            "max_row_sum_error": float(np.max(np.abs(transitions.row_sums - 1.0))),
        },
    )


def run_stationary(config: RunConfig, artifacts: Artifacts) -> None:
    """Solve the stationary distribution."""
    spec = config.instance.spec_for(config.volume())
    transitions = build_chain(
        config.instance.demand_model, config.instance.price_model, spec, config.policy(spec)
    )
    distribution = stationary(transitions)
    artifacts.csv("stationary.csv", stationary_table(distribution))
    artifacts.json("stationary.json", {"states": spec.size, "residual": distribution.residual})


def run_evaluate(config: RunConfig, artifacts: Artifacts) -> None:
    """Cost breakdown of the configured design."""
    instance = config.instance
    volume = config.volume()
    spec = instance.spec_for(volume)
    policy = config.policy(spec)
    breakdown, _ = evaluate_policy(policy, instance.price_model, instance.demand_model, spec, instance.params)
    artifacts.json("cost.json", _report(config, volume, breakdown))


def run_optimize(config: RunConfig, artifacts: Artifacts) -> None:
    """Optimize the thresholds of the configured tank volume."""
    instance = config.instance
    volume = config.volume()
    optimum = optimize_policy_for_tank(
        volume,
        instance.demand_model,
        instance.price_model,
        instance.spec_for,
        instance.params,
        config.spsa_config(),
        config.policy_shape,
    )
    spec = instance.spec_for(volume)
    breakdown, _ = evaluate_policy(optimum.policy, instance.price_model, instance.demand_model, spec, instance.params)
    artifacts.json(
        "policy.json",
        {"V": volume, "thresholds": optimum.policy.thresholds.tolist(), "cost": _report(config, volume, breakdown)},
    )


def run_codesign(config: RunConfig, artifacts: Artifacts) -> None:
    """Sweep the candidate tank volumes."""
    instance = config.instance
    if not config.candidates:
        raise ValueError("codesign needs candidates")

    result = codesign_sweep(
        config.candidates,
        instance.demand_model,
        instance.price_model,
        instance.spec_for,
        instance.params,
        config.horizon.N,
        config.spsa_config(),
        config.policy_shape,
        config.threads,
    )
    artifacts.json("codesign.json", result.to_dict())
    artifacts.csv("candidates.csv", result.candidates_frame())


def run_simulate(config: RunConfig, artifacts: Artifacts) -> None:
    """Monte Carlo runs of the configured design and their convergence report."""
    instance = config.instance
    spec = instance.spec_for(config.volume())
    policy = config.policy(spec)
    seeds = simulation_seeds(config)
    arguments = (policy, instance.demand_model, instance.price_model, spec, instance.params)
    report = convergence_report(
        *arguments, seeds, config.simulation.horizons(), config.simulation.initial_states(spec)
    )
    artifacts.csv("convergence.csv", report)
    final = report[report["N"] == report["N"].max()]
    artifacts.json(
        "simulation.json",
        {
            "runs": len(final),
            "max_rel_error": float(final["rel_error"].max()),
            "median_rel_error": float(final["rel_error"].median()),
        },
    )
    if config.simulation.trajectory:
        first = simulate(*arguments, config.simulation.N, config.simulation.initial_states(spec)[0], seeds[0], True)
        artifacts.csv("trajectory.csv", first.trajectory)  # type: ignore[arg-type]


def run_sensitivity(config: RunConfig, artifacts: Artifacts) -> None:
    """Both price-parameter sensitivity studies."""
    instance = config.instance
    study = config.sensitivity
    if not study.fixed_grid and not study.assumed_grid:
        raise ValueError("sensitivity needs fixed_grid or assumed_grid")

    if study.fixed_grid:
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
        rows = sensitivity_fixed_design(
            optimum.policy, volume, study.fixed_grid, instance.demand_model, spec, instance.params, config.horizon.N
        )
        artifacts.csv("sensitivity_fixed.csv", rows_frame(rows))
        profiles = stationary_profiles(optimum.policy, instance.demand_model, spec, study.fixed_grid)
        artifacts.csv("stationary_profiles.csv", profiles)

    if study.assumed_grid:
        if not config.candidates:
            raise ValueError("the misassumed-design study needs candidates")

        rows = sensitivity_misassumed_design(
            study.assumed_grid,
            study.true_params,
            config.candidates,
            instance.demand_model,
            instance.spec_for,
            instance.params,
            config.horizon.N,
            config.spsa_config(),
            config.policy_shape,
            config.threads,
        )
        artifacts.csv("sensitivity_misassumed.csv", rows_frame(rows))


def run_surface(config: RunConfig, artifacts: Artifacts) -> None:
    """Co-design cost over the configured grid of volumes and constant thresholds."""
    instance = config.instance
    surface = config.surface
    if not surface.volumes or not surface.thresholds:
        raise ValueError("surface needs volumes and thresholds")

    frame = cost_surface(
        surface.volumes,
        surface.thresholds,
        instance.demand_model,
        instance.price_model,
        instance.spec_for,
        instance.params,
        config.horizon.N,
        surface.closed_form,
    )
    artifacts.csv("surface.csv", frame)
    best = frame.loc[frame["total"].idxmin()]
    artifacts.json(
        "surface.json", {"V": float(best["V"]), "alpha": float(best["alpha"]), "total": float(best["total"])}
    )


def run_fit(config: RunConfig, artifacts: Artifacts) -> None:
    """Fit the demand and price models and export them."""
    instance = config.instance
    volume = config.tank_volume
    spec = instance.spec_for(volume) if volume is not None else None
    document = ModelDocument.from_models(instance.demand_model, instance.price_model, spec, instance.cost)
    artifacts.json("model.json", document.model_dump(mode="json", exclude_none=True))
    summary: Dict[str, Any] = {
        "levels_m": instance.demand_model.levels_m,
        "period_T": instance.demand_model.period_T,
        "mean_levels": instance.demand_model.mean_levels.tolist(),
        "price_mean": instance.price_model.mean.tolist(),
        "price_std": instance.price_model.std.tolist(),
    }
    if volume is not None:
        summary["validation"] = {check.name: check.passed for check in instance.check(volume).checks}

    artifacts.json("fit.json", summary)


COMMANDS: Dict[str, Command] = {
    "validate": run_validate,
    "chain": run_chain,
    "stationary": run_stationary,
    "evaluate": run_evaluate,
    "optimize": run_optimize,
    "codesign": run_codesign,
    "simulate": run_simulate,
    "sensitivity": run_sensitivity,
    "surface": run_surface,
    "fit": run_fit,
}
