from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd

from tankcodesign.chain import build_chain, stationary
from tankcodesign.config import SpsaConfig
from tankcodesign.constants import TIE_RELATIVE_TOLERANCE
from tankcodesign.cost import evaluate_policy, expected_operating_cost
from tankcodesign.errors import CoDesignError, OptimizationError, ReducibleChainError, StationarySolveError
from tankcodesign.model import (
    ChainSpec,
    CostParams,
    PriceModel,
    QuantizedDemandModel,
    ThresholdPolicy,
    validate_instance,
)
from tankcodesign.optimize.box import Box
from tankcodesign.optimize.spsa import spsa_minimize
from tankcodesign.types import Objective, PolicyShape

logger = logging.getLogger(__name__)

SpecBuilder = Callable[[float], ChainSpec]


class PolicyOptimum(NamedTuple):
    """
    Optimized thresholds of one tank.

    Attributes:
        policy: Optimized threshold policy.
        operating_cost: Its expected operating cost per interval ℓ̄.
    """

    policy: ThresholdPolicy
    operating_cost: float


@dataclass(frozen=True)
class CandidateResult:
    """
    Evaluation of one candidate tank volume.

    Attributes:
        volume: Tank volume V.
        policy: Optimized thresholds.
        capital: Capital cost c_t(V).
        operating_N: Operating cost over the horizon, N·ℓ̄.
        total: Co-design cost J.
    """

    volume: float
    policy: ThresholdPolicy
    capital: float
    operating_N: float
    total: float


@dataclass(frozen=True)
class CoDesignResult:
    """
    Outcome of the sweep over candidate tank volumes.

    Attributes:
        best_V: Tank volume attaining J_star.
        best_policy: Thresholds of the best tank.
        per_candidate: Evaluated candidates, in input order.
        J_star: Minimum co-design cost.
        failures: (volume, cause) of every candidate that could not be evaluated.
    """

    best_V: float
    best_policy: ThresholdPolicy
    per_candidate: List[CandidateResult]
    J_star: float
    failures: List[Tuple[float, str]] = field(default_factory=list)

    @property
    def best(self) -> CandidateResult:
        """The winning candidate."""
        return next(candidate for candidate in self.per_candidate if candidate.volume == self.best_V)

    def candidates_frame(self) -> pd.DataFrame:
        """Table `V,capital,operating_N,total` of the evaluated candidates."""
        return pd.DataFrame(
            [(c.volume, c.capital, c.operating_N, c.total) for c in self.per_candidate],
            columns=["V", "capital", "operating_N", "total"],
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready summary with the thresholds of every candidate."""
        return {
            "best_V": self.best_V,
            "J_star": self.J_star,
            "best_thresholds": self.best_policy.thresholds.tolist(),
            "per_candidate": [
                {
                    "V": c.volume,
                    "thresholds": c.policy.thresholds.tolist(),
                    "capital": c.capital,
                    "operating_N": c.operating_N,
                    "total": c.total,
                }
                for c in self.per_candidate
            ],
            "failures": [{"V": volume, "cause": cause} for volume, cause in self.failures],
        }


def initial_vector(price: PriceModel, spec: ChainSpec, shape: PolicyShape) -> np.ndarray:
    """
    Starting decision vector with every threshold at its phase mean price.

    The constant shape starts at the mean over phases.
    """
    if shape == "constant":
        return np.array([float(np.mean(price.mean))])

    if shape == "per_phase":
        return price.mean.copy()

    return ThresholdPolicy.at_mean(price.mean, spec).to_vector()


def operating_objective(
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec: ChainSpec,
    params: CostParams,
    shape: PolicyShape = "per_state",
) -> Objective:
    """
    Map a decision vector to its expected operating cost per interval.

    Decision vectors giving a reducible or unsolvable chain evaluate to +inf.

    Args:
        demand: Demand model.
        price: Price model.
        spec: Chain geometry of the tank.
        params: Cost parameters.
        shape: How the vector maps onto thresholds.

    Returns:
        The objective ℓ̄(𝛂).
    """

    def objective(vector: np.ndarray) -> float:
        policy = ThresholdPolicy.from_vector(vector, spec, shape)
        try:
            distribution = stationary(build_chain(demand, price, spec, policy))
        except (ReducibleChainError, StationarySolveError) as error:
            logger.debug("Rejected thresholds: %s", error)
            return np.inf

        return expected_operating_cost(distribution, policy, price, spec, params).total_per_interval

    return objective


def optimize_policy_for_tank(
    volume: float,
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec_builder: SpecBuilder,
    params: CostParams,
    spsa: SpsaConfig,
    shape: PolicyShape = "per_state",
) -> PolicyOptimum:
    """
    Optimize the thresholds of one tank volume.

    Starts from thresholds at the mean price and minimizes ℓ̄(𝛂, V) by SPSA
    inside the configured box.

    Args:
        volume: Tank volume V.
        demand: Demand model.
        price: Price model.
        spec_builder: Maps a tank volume to its chain geometry.
        params: Cost parameters.
        spsa: Optimizer configuration.
        shape: Threshold policy shape.

    Returns:
        Optimized policy and its ℓ̄.

    Raises:
        InvalidInstanceError: If the tank volume gives an invalid instance.
        OptimizationError: If every restart failed or the thresholds left the box.
    """
    spec = spec_builder(volume)
    validate_instance(demand, price, spec).raise_for_failures()
    config = spsa.resolve(price)
    box = Box.from_config(config)
    objective = operating_objective(demand, price, spec, params, shape)
    result = spsa_minimize(
        objective, ThresholdPolicy.dimension(spec, shape), config, box.project(initial_vector(price, spec, shape)), box
    )
    policy = ThresholdPolicy.from_vector(result.x, spec, shape)
    failures = policy.violations(box.lower, box.upper)
    if failures:
        raise OptimizationError(f"optimized thresholds for tank volume {volume} are invalid", failures)

    breakdown, _ = evaluate_policy(policy, price, demand, spec, params)
    logger.info("Tank volume %g: operating cost %.6g per interval", volume, breakdown.total_per_interval)
    return PolicyOptimum(policy, breakdown.total_per_interval)


def select_best(candidates: Sequence[CandidateResult]) -> CandidateResult:
    """
    Candidate with the smallest total, the smallest volume among near ties.

    Totals within a relative TIE_RELATIVE_TOLERANCE of the minimum tie.
    """
    J_star = min(candidate.total for candidate in candidates)
    tolerance = TIE_RELATIVE_TOLERANCE * max(abs(J_star), 1.0)
    tied = [candidate for candidate in candidates if candidate.total - J_star <= tolerance]
    return min(tied, key=lambda candidate: candidate.volume)


def codesign_sweep(
    candidates: Sequence[float],
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec_builder: SpecBuilder,
    params: CostParams,
    N: int,
    spsa: SpsaConfig,
    shape: PolicyShape = "per_state",
    threads: int = 1,
) -> CoDesignResult:
    """
    Co-design the tank volume and thresholds over candidate volumes.

    Optimizes the thresholds of every candidate, computes J = c_t(V) + N·ℓ̄
    and returns the minimizer, ties broken toward the smaller volume.
    Candidates that cannot be evaluated are recorded as failures.

    Args:
        candidates: Candidate tank volumes.
        demand: Demand model.
        price: Price model.
        spec_builder: Maps a tank volume to its chain geometry.
        params: Cost parameters.
        N: Horizon in intervals.
        spsa: Optimizer configuration, shared by every candidate.
        shape: Threshold policy shape.
        threads: Worker threads; 0 lets the executor choose.

    Returns:
        The sweep result.

    Raises:
        ValueError: If there are no candidates.
        OptimizationError: If no candidate could be evaluated.
    """
    if not candidates:
        raise ValueError("at least one candidate tank volume is required")

    def evaluate(volume: float) -> CandidateResult | str:
        try:
            optimum = optimize_policy_for_tank(volume, demand, price, spec_builder, params, spsa, shape)
        except (CoDesignError, ValueError, ArithmeticError) as error:
            logger.warning("Candidate tank volume %g failed: %s", volume, error)
            return str(error)

        capital = params.capital_cost(volume)
        operating = N * optimum.operating_cost
        return CandidateResult(volume, optimum.policy, capital, operating, capital + operating)

    with ThreadPoolExecutor(max_workers=threads or None) as executor:
        outcomes = list(executor.map(evaluate, candidates))

    evaluated = [outcome for outcome in outcomes if isinstance(outcome, CandidateResult)]
    failures = [(volume, outcome) for volume, outcome in zip(candidates, outcomes) if isinstance(outcome, str)]
    if not evaluated:
        raise OptimizationError("no candidate tank volume could be evaluated", [f"V={v}: {c}" for v, c in failures])

    best = select_best(evaluated)
    logger.info("Best tank volume %g with co-design cost %.6g", best.volume, best.total)
    return CoDesignResult(best.volume, best.policy, evaluated, best.total, failures)
