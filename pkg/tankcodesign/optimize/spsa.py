from __future__ import annotations

import logging
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from tankcodesign.config import SpsaConfig
from tankcodesign.errors import OptimizationError
from tankcodesign.optimize.box import Box
from tankcodesign.types import Objective

logger = logging.getLogger(__name__)

CALIBRATION_SAMPLES = 4


class SpsaResult(NamedTuple):
    """
    Best point found by the optimizer.

    Attributes:
        x: Best-seen decision vector.
        value: Objective at x.
        history: Best-seen value after every iteration of the winning restart.
    """

    x: np.ndarray
    value: float
    history: Tuple[float, ...] = ()


def _evaluate(objective: Objective, point: np.ndarray) -> float:
    value = float(objective(point))
    if not np.isfinite(value):
        raise ArithmeticError(f"objective returned {value}")

    return value


def perturbation_gradient(
    objective: Objective, x: np.ndarray, c_k: float, delta: np.ndarray, box: Box
) -> np.ndarray:
    """
    Simultaneous-perturbation gradient estimate from two evaluations.

    Both perturbed points are projected onto the box and the difference
    quotient uses the projected step.

    Args:
        objective: Function to minimize.
        x: Current point.
        c_k: Perturbation size.
        delta: Perturbation direction with entries ±1.
        box: Feasible box.

    Returns:
        Gradient estimate.

    Raises:
        ArithmeticError: If the objective is not finite at a perturbed point.
    """
    plus = box.project(x + c_k * delta)
    minus = box.project(x - c_k * delta)
    gradient: np.ndarray = (_evaluate(objective, plus) - _evaluate(objective, minus)) / (plus - minus)
    return gradient


def finite_difference_gradient(objective: Objective, x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """
    Central-difference gradient.

    Args:
        objective: Function to differentiate.
        x: Point.
        step: Difference step.

    Returns:
        Gradient estimate, one entry per coordinate.

    Examples:
        >>> finite_difference_gradient(lambda x: float(np.sum(x**2)), np.array([1.0, -2.0])).round(6).tolist()
        [2.0, -4.0]
    """
    x = np.asarray(x, dtype=float)
    gradient = np.empty_like(x)
    for j in range(len(x)):
        shift = np.zeros_like(x)
        shift[j] = step
        gradient[j] = (objective(x + shift) - objective(x - shift)) / (2.0 * step)

    return gradient


def calibrate_gain(
    objective: Objective, x: np.ndarray, config: SpsaConfig, c0: float, A: float, box: Box, rng: np.random.Generator
) -> float:
    """
    Step gain a0 whose first step moves about `calibration_step` per coordinate.

    Averages the magnitude of a few gradient estimates at the starting point,
    skipping samples that hit a non-finite value.

    Returns:
        The calibrated a0.
    """
    magnitudes: List[float] = []
    for _ in range(CALIBRATION_SAMPLES):
        delta = rng.choice([-1.0, 1.0], size=len(x))
        try:
            magnitudes.append(float(np.mean(np.abs(perturbation_gradient(objective, x, c0, delta, box)))))
        except ArithmeticError as error:
            logger.debug("Calibration sample rejected: %s", error)

    scale = config.calibration_step * (A + 1.0) ** config.alpha_exp
    magnitude = float(np.mean(magnitudes)) if magnitudes else 0.0
    if not magnitude > 0.0:
        return scale

    return scale / magnitude


def _run(
    objective: Objective, start: np.ndarray, config: SpsaConfig, c0: float, A: float, box: Box, rng: np.random.Generator
) -> SpsaResult:
    a0 = config.a0 if config.a0 is not None else calibrate_gain(objective, start, config, c0, A, box, rng)
    x = box.project(start)
    best_x, best = x, _evaluate(objective, x)
    history = [best]
    for k in range(config.iterations):
        a_k = a0 / (A + k + 1.0) ** config.alpha_exp
        c_k = c0 / (k + 1.0) ** config.gamma_exp
        delta = rng.choice([-1.0, 1.0], size=len(x))
        try:
            step = box.project(x - a_k * perturbation_gradient(objective, x, c_k, delta, box))
            value = _evaluate(objective, step)
        except ArithmeticError as error:
            logger.debug("SPSA iteration %d rejected: %s", k, error)
            history.append(best)
            continue

        x = step
        if value < best:
            best_x, best = x, value

        history.append(best)

    return SpsaResult(best_x, best, tuple(history))


def _refine(objective: Objective, result: SpsaResult, box: Box) -> SpsaResult:
    try:
        polished = minimize(
            objective, result.x, method="L-BFGS-B", bounds=[(box.lower, box.upper)] * len(result.x)
        )
    except (ValueError, ArithmeticError) as error:
        logger.debug("Local refinement failed: %s", error)
        return result

    if np.isfinite(polished.fun) and polished.fun < result.value:
        logger.debug("Local refinement improved %.6g to %.6g", result.value, polished.fun)
        x = box.project(polished.x)
        return SpsaResult(x, float(objective(x)), result.history)

    return result


def spsa_minimize(
    objective: Objective,
    dim: int,
    config: SpsaConfig,
    x0: Optional[np.ndarray] = None,
    box: Optional[Box] = None,
) -> SpsaResult:
    """
    Minimize a function over a box by simultaneous-perturbation stochastic approximation.

    Iterates x_{k+1} = Π(x_k - a_k·ĝ_k) with ĝ_k estimated from two
    evaluations under a Bernoulli ±1 perturbation, a_k = a0/(A + k + 1)^alpha_exp
    and c_k = c0/(k + 1)^gamma_exp. The first restart starts at x0, later
    ones at jittered copies of it, each with its own perturbation stream
    seeded by (seed, restart). An iteration touching a non-finite value is
    skipped and the iterate stays put; a restart is abandoned only when its
    starting point is non-finite. The best-seen point over all restarts is returned, polished by
    L-BFGS-B when `config.refine` is set.

    Args:
        objective: Function to minimize.
        dim: Dimension of the decision vector.
        config: Optimizer configuration; unset A and c0 default to 10% of the
            iterations and 1% of the box length.
        x0: Starting point; the box midpoint when unset.
        box: Feasible box; taken from config when unset.

    Returns:
        Best point, its value and the best-seen history of the winning restart.

    Raises:
        ValueError: If dim < 1 or no box is available.
        OptimizationError: If every restart failed.
    """
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")

    box = box if box is not None else Box.from_config(config)
    A = config.A if config.A is not None else 0.1 * config.iterations
    c0 = config.c0 if config.c0 is not None else 0.01 * float(box.length)
    x0 = np.full(dim, box.midpoint) if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (dim,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({dim},)")

    best: Optional[SpsaResult] = None
    causes: List[str] = []
    for restart in range(config.restarts):
        rng = np.random.default_rng([config.seed, restart])
        start = x0 if restart == 0 else box.project(x0 + rng.normal(scale=10.0 * c0, size=dim))
        try:
            result = _run(objective, start, config, c0, A, box, rng)
        except ArithmeticError as error:
            causes.append(f"restart {restart}: {error}")
            logger.warning("SPSA restart %d abandoned: %s", restart, error)
            continue

        logger.debug("SPSA restart %d reached %.6g", restart, result.value)
        if best is None or result.value < best.value:
            best = result

    if best is None:
        raise OptimizationError("every SPSA restart failed", causes)

    if config.refine:
        best = _refine(objective, best, box)

    return best
