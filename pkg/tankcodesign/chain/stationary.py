from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import spsolve

from tankcodesign.chain.irreducible import closed_classes
from tankcodesign.chain.transition import TransitionMatrix
from tankcodesign.constants import DENSE_SOLVER_LIMIT, STATIONARY_RESIDUAL_TOLERANCE
from tankcodesign.errors import DimensionMismatchError, ReducibleChainError, StationarySolveError
from tankcodesign.model import ChainSpec
from tankcodesign.model.utils import frozen_array

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    """
    Stationary probabilities π_κ^i of the tank-volume chain.

    Attributes:
        pi: Probability vector in flat (phase-major) state order.
        spec: Geometry of the chain.
        residual: Infinity norm of Pᵀπ - π at solve time.
    """

    pi: np.ndarray
    spec: ChainSpec
    residual: float = 0.0

    def __post_init__(self) -> None:
        if len(self.pi) != self.spec.size:
            raise DimensionMismatchError(f"pi has {len(self.pi)} entries, geometry needs {self.spec.size}")

        object.__setattr__(self, "pi", frozen_array(self.pi))

    def __len__(self) -> int:
        return len(self.pi)

    def table(self) -> np.ndarray:
        """Probabilities as a [T × (n + 1)] table indexed [κ, i]."""
        return self.pi.reshape(self.spec.period_T, self.spec.n + 1)

    def probability(self, i: int, kappa: int = 0) -> float:
        """Stationary probability π_κ^i."""
        return float(self.pi[self.spec.flat_index(i, kappa)])


def balance_residual(transitions: TransitionMatrix, pi: np.ndarray) -> float:
    """Infinity norm of Pᵀπ - π."""
    return float(np.max(np.abs(transitions.matrix.T @ pi - pi)))


def solve_balance(matrix: sparse.spmatrix) -> np.ndarray:
    """
    Solve Pᵀπ = π with the last balance equation replaced by Σπ = 1.

    Dense LU for small chains, sparse LU above DENSE_SOLVER_LIMIT states.

    Args:
        matrix: Irreducible stochastic matrix.

    Returns:
        Raw solution vector.

    Raises:
        StationarySolveError: If the linear system is singular.
    """
    size = matrix.shape[0]
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    try:
        if size <= DENSE_SOLVER_LIMIT:
            system = matrix.toarray().T - np.eye(size)
            system[-1, :] = 1.0
            solution: np.ndarray = scipy.linalg.solve(system, rhs)
        else:
            lil = (matrix.T - sparse.identity(size, format="csr")).tolil()
            lil[size - 1, :] = np.ones(size)
            solution = spsolve(lil.tocsc(), rhs)

    except (np.linalg.LinAlgError, ValueError) as error:
        raise StationarySolveError(f"balance equations could not be solved: {error}") from error

    return solution


def stationary(
    transitions: TransitionMatrix,
    tolerance: float = STATIONARY_RESIDUAL_TOLERANCE,
) -> StationaryDistribution:
    """
    Unique stationary distribution of a chain with a single closed class.

    Solves the balance and normalization equations directly on the closed
    communicating class; states outside it are transient and get π = 0.
    Power iteration is not used because the chain has period T.

    Args:
        transitions: Transition matrix.
        tolerance: Largest accepted residual of Pᵀπ = π.

    Returns:
        Stationary distribution with its residual.

    Raises:
        ReducibleChainError: If the chain has more than one closed class.
        StationarySolveError: If the solve fails or the residual exceeds tolerance.
    """
    classes = closed_classes(transitions)
    if len(classes) != 1:
        raise ReducibleChainError(
            f"stationary distribution not unique: chain has {len(classes)} closed communicating classes"
        )

    states = classes[0]
    if len(states) < len(transitions):
        logger.debug("%d of %d states are transient", len(transitions) - len(states), len(transitions))

    recurrent = np.clip(solve_balance(transitions.matrix[states][:, states]), 0.0, None)
    total = recurrent.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise StationarySolveError("balance equations produced no probability mass")

    pi = np.zeros(len(transitions))
    pi[states] = recurrent / total
    residual = balance_residual(transitions, pi)
    if not residual <= tolerance:
        raise StationarySolveError(f"stationary residual {residual:.3e} exceeds {tolerance:.1e}", residual)

    logger.debug("Solved stationary distribution of %d states, residual %.2e", len(pi), residual)
    return StationaryDistribution(pi, transitions.spec, residual)


def visit_frequencies_match(distribution: StationaryDistribution, counts: np.ndarray, N: int) -> float:
    """
    Largest gap between empirical visit frequencies and stationary probabilities.

    Args:
        distribution: Stationary distribution.
        counts: Visit count per state in flat order.
        N: Number of steps; must equal counts.sum().

    Returns:
        max over states of |counts / N - π|.

    Raises:
        DimensionMismatchError: If counts has the wrong length.
        ValueError: If counts do not sum to N.
    """
    counts = np.asarray(counts)
    if len(counts) != len(distribution):
        raise DimensionMismatchError(f"counts has {len(counts)} entries, chain has {len(distribution)} states")

    if int(counts.sum()) != N or N <= 0:
        raise ValueError(f"counts sum to {int(counts.sum())}, expected N = {N}")

    return float(np.max(np.abs(counts / N - distribution.pi)))
