from dataclasses import dataclass, field
from typing import List

from tankcodesign.errors import InvalidInstanceError
from tankcodesign.types import CapitalCost


def zero_capital(volume: float) -> float:
    """Capital cost of a free tank."""
    return 0.0


@dataclass(frozen=True)
class CostParams:
    """
    Cost parameters of the co-design problem.

    Attributes:
        eps_p: Energy drawn by the pump in one interval (price·eps_p is currency).
        penalty_w: Penalty per interval spent at or below n_r·Δx.
        capital_cost: Nondecreasing map from tank volume to capital cost.
    """

    eps_p: float = 1.0
    penalty_w: float = 0.0
    capital_cost: CapitalCost = field(default=zero_capital, compare=False)

    def violations(self) -> List[str]:
        """Names of the violated value invariants."""
        failures: List[str] = []
        if not self.eps_p > 0.0:
            failures.append("pump energy positivity")

        if self.penalty_w < 0.0:
            failures.append("penalty nonnegativity")

        return failures

    def raise_for_violations(self) -> None:
        """
        Raise if a value invariant is violated.

        Raises:
            InvalidInstanceError: Naming every violated invariant.
        """
        failures = self.violations()
        if failures:
            raise InvalidInstanceError("invalid cost parameters: " + ", ".join(failures), failures)
