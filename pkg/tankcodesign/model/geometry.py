from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple

from tankcodesign.model.demand import QuantizedDemandModel


class ChainState(NamedTuple):
    """
    A state (i, κ) of the tank-volume chain.

    Attributes:
        i: Volume index, volume = i·Δx.
        kappa: Phase index κ = mod(k, T).
    """

    i: int
    kappa: int


@dataclass(frozen=True)
class ChainSpec:
    """
    Integer geometry of a quantized tank.

    Volumes are multiples of Δx: V = n·Δx, the enforced-pumping ceiling is
    n_p·Δx, the threshold-pumping ceiling n_s·Δx and the penalty ceiling
    n_r·Δx. Pumping adds ζ quanta per interval.

    States are ordered phase-major: flat index κ·(n + 1) + i.

    Attributes:
        n: Maximum volume index.
        n_p: Enforced-pumping ceiling index.
        n_s: Threshold-pumping ceiling index.
        n_r: Penalty ceiling index.
        zeta: Pump inflow as a multiple of the demand quantum.
        delta_x: Volume quantum Δx.
        period_T: Phases per cycle.

    Examples:
        >>> spec = ChainSpec(n=8, n_p=0, n_s=7, n_r=0, zeta=2, delta_x=1.0, period_T=1)
        >>> spec.size, spec.band_size, spec.volume
        (9, 7, 8.0)
        >>> spec.flat_index(3, 0), spec.state(3)
        (3, ChainState(i=3, kappa=0))
    """

    n: int
    n_p: int
    n_s: int
    n_r: int
    zeta: int
    delta_x: float
    period_T: int = 1

    def __post_init__(self) -> None:
        """
        Validate field types.

        Raises:
            TypeError: If an index field is not an integer.
            ValueError: If delta_x or period_T is not positive.
        """
        for name in ("n", "n_p", "n_s", "n_r", "zeta", "period_T"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an integer, got {value!r}")

        if not self.delta_x > 0.0:
            raise ValueError(f"delta_x must be positive, got {self.delta_x}")

        if self.period_T < 1:
            raise ValueError(f"period_T must be positive, got {self.period_T}")

    @property
    def size(self) -> int:
        """Number of chain states n̄ = (n + 1)·T."""
        return (self.n + 1) * self.period_T

    @property
    def band_size(self) -> int:
        """Number of threshold-pumping states per phase, n_s - n_p."""
        return self.n_s - self.n_p

    @property
    def volume(self) -> float:
        """Tank volume V = n·Δx."""
        return self.n * self.delta_x

    def flat_index(self, i: int, kappa: int) -> int:
        """
        Flat state index of (i, κ).

        Raises:
            IndexError: If i or κ is out of range.
        """
        if not 0 <= i <= self.n:
            raise IndexError(f"Volume index {i} out of bounds [0, {self.n}]")

        if not 0 <= kappa < self.period_T:
            raise IndexError(f"Phase {kappa} out of bounds [0, {self.period_T})")

        return kappa * (self.n + 1) + i

    def state(self, flat: int) -> ChainState:
        """
        Inverse of `flat_index`.

        Raises:
            IndexError: If flat is out of range.
        """
        if not 0 <= flat < self.size:
            raise IndexError(f"Flat index {flat} out of bounds")

        kappa, i = divmod(flat, self.n + 1)
        return ChainState(i, kappa)

    def violations(self) -> List[str]:
        """Names of the violated ordering invariants."""
        failures: List[str] = []
        if self.n_r < 0:
            failures.append("penalty index nonnegativity")

        if not 0 <= self.n_p < self.n_s < self.n:
            failures.append("band ordering")

        if self.zeta < 1:
            failures.append("pump flow multiple")

        return failures

    def guard_violations(self, demand: QuantizedDemandModel) -> List[str]:
        """
        Names of the violated overflow and underflow guards.

        Overflow: pumping at the band top under the smallest possible demand
        stays within the tank, n_s + ζ - τ_min ≤ n.
        Underflow: not pumping just above the enforced band under the largest
        possible demand stays nonnegative, n_p + 1 - τ_max ≥ 0.

        Args:
            demand: Demand model supplying τ_min and τ_max.

        Returns:
            Empty list if both guards hold.
        """
        failures: List[str] = []
        if self.n_s + self.zeta - demand.min_level > self.n:
            failures.append("overflow guard")

        if self.n_p + 1 - demand.max_level < 0:
            failures.append("underflow guard")

        return failures
