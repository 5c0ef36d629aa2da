from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy import sparse

from tankcodesign.model import ChainSpec, PriceModel, QuantizedDemandModel, ThresholdPolicy, validate_instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """
    Transition probabilities of the tank-volume chain.

    Entry (flat(i, κ), flat(j, mod(κ + 1, T))) is the probability of moving
    from volume index i to j during an interval of phase κ. All other
    entries are zero, so the matrix is block superdiagonal with a wraparound
    block from the last phase to the first.

    Attributes:
        matrix: Sparse row-stochastic matrix of size (n + 1)·T.
        spec: Geometry the chain was built for.
    """

    matrix: sparse.csr_matrix
    spec: ChainSpec

    def __post_init__(self) -> None:
        """
        Validate the matrix type and size.

        Raises:
            TypeError: If matrix is not a scipy sparse matrix.
            ValueError: If the matrix is not square of size spec.size.
        """
        if not sparse.issparse(self.matrix):
            raise TypeError(f"matrix must be a scipy sparse matrix, got {type(self.matrix)}")

        if self.matrix.shape != (self.spec.size, self.spec.size):
            raise ValueError(f"matrix has shape {self.matrix.shape}, geometry needs {self.spec.size} states")

    def __len__(self) -> int:
        """Number of states n̄."""
        return self.spec.size

    @property
    def row_sums(self) -> np.ndarray:
        """Sum of every row; ones for a stochastic matrix."""
        sums: np.ndarray = np.asarray(self.matrix.sum(axis=1)).ravel()
        return sums

    def dense(self) -> np.ndarray:
        """Dense copy of the matrix."""
        dense: np.ndarray = self.matrix.toarray()
        return dense

    def block(self, kappa: int) -> np.ndarray:
        """
        Dense block P_κ from phase κ to phase mod(κ + 1, T).

        Args:
            kappa: Source phase.

        Returns:
            Array [(n + 1) × (n + 1)].
        """
        n1 = self.spec.n + 1
        target = (kappa + 1) % self.spec.period_T
        block: np.ndarray = self.matrix[kappa * n1 : (kappa + 1) * n1, target * n1 : (target + 1) * n1].toarray()
        return block


def pump_probabilities(price: PriceModel, spec: ChainSpec, policy: ThresholdPolicy) -> np.ndarray:
    """
    Probability of pumping in every state, [T × (n + 1)].

    One at or below n_p, F_κ(α_κ(iΔx)) in the band and zero above n_s.

    Args:
        price: Price model.
        spec: Chain geometry.
        policy: Thresholds matching the geometry.

    Returns:
        Table indexed [κ, i].
    """
    return price.cdf_table(policy.pump_thresholds(spec))


def build_chain(
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec: ChainSpec,
    policy: ThresholdPolicy,
) -> TransitionMatrix:
    """
    Build the transition matrix of the closed-loop tank volume.

    From state (i, κ) with demand level τ (probability a_κ^τ) the volume
    index moves to max(0, i + ζ - τ) when the pump runs and to i - τ
    otherwise. The pump runs with probability one at or below n_p,
    F_κ(α_κ(iΔx)) in the band and never above n_s. Contributions that land
    on the same target are summed.

    Args:
        demand: Quantized demand model.
        price: Gaussian price model.
        spec: Chain geometry.
        policy: Thresholds for the band states.

    Returns:
        Row-stochastic transition matrix.

    Raises:
        InvalidInstanceError: If the instance fails validation.
        DimensionMismatchError: If the policy does not match the geometry.
    """
    validate_instance(demand, price, spec).raise_for_failures()
    policy.check_dimensions(spec)

    n1 = spec.n + 1
    volumes = np.arange(n1)
    pumping = pump_probabilities(price, spec, policy)
    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    data: List[np.ndarray] = []
    for kappa in range(spec.period_T):
        levels = np.flatnonzero(demand.probs[kappa] > 0.0)
        weights = demand.probs[kappa, levels]
        source = np.broadcast_to((kappa * n1 + volumes)[:, None], (n1, len(levels)))
        offset = ((kappa + 1) % spec.period_T) * n1
        for inflow, probability in ((spec.zeta, pumping[kappa]), (0, 1.0 - pumping[kappa])):
            targets = np.maximum(volumes[:, None] + inflow - levels[None, :], 0)
            mass = probability[:, None] * weights[None, :]
            # pump targets above n only occur for states that never pump
            keep = mass > 0.0
            rows.append(source[keep])
            cols.append(offset + targets[keep])
            data.append(mass[keep])

    coo = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(spec.size, spec.size),
    )
    matrix = coo.tocsr()  # sums duplicate (row, col) entries
    matrix.eliminate_zeros()
    logger.debug("Built chain with %d states and %d transitions", spec.size, matrix.nnz)
    return TransitionMatrix(matrix, spec)
