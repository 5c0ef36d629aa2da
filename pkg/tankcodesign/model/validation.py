from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List, NamedTuple

from tankcodesign.errors import InvalidInstanceError
from tankcodesign.model.demand import QuantizedDemandModel
from tankcodesign.model.geometry import ChainSpec
from tankcodesign.model.price import PriceModel

CHECKS = (
    "demand probability nonnegativity",
    "probability normalization",
    "price standard deviation positivity",
    "period agreement",
    "penalty index nonnegativity",
    "band ordering",
    "pump flow multiple",
    "overflow guard",
    "underflow guard",
)


class Check(NamedTuple):
    """
    Outcome of a single modelling-assumption check.

    Attributes:
        name: Constraint name.
        passed: Whether the constraint holds.
    """

    name: str
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    """
    Pass/fail outcome for every modelling assumption of an instance.

    Attributes:
        checks: One entry per constraint, in a fixed order.
    """

    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True if every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        """Names of the failed checks."""
        return [check.name for check in self.checks if not check.passed]

    def raise_for_failures(self) -> None:
        """
        Raise if any check failed.

        Raises:
            InvalidInstanceError: Naming every violated constraint.
        """
        if not self.passed:
            raise InvalidInstanceError("invalid instance: " + ", ".join(self.failures), self.failures)


def validate_instance(demand: QuantizedDemandModel, price: PriceModel, spec: ChainSpec) -> ValidationReport:
    """
    Check an instance against every modelling assumption.

    Covers demand probabilities, price parameters, period agreement, the
    band ordering 0 ≤ n_p < n_s < n, the pump flow multiple and the
    overflow/underflow guards. Guards are only evaluated when the ordering
    holds.

    Args:
        demand: Quantized demand model.
        price: Gaussian price model.
        spec: Chain geometry.

    Returns:
        Report with one check per constraint; never raises for invalid data.

    Warnings:
        RuntimeWarning: If the penalty band reaches above the enforced-pumping band.
    """
    failed = set(demand.violations())
    failed.update(price.violations())
    if not demand.period_T == price.period_T == spec.period_T:
        failed.add("period agreement")

    failed.update(spec.violations())
    if spec.n_r > spec.n_p:
        warnings.warn(
            "Penalty band reaches into the threshold band; the penalty is charged where pumping is optional",
            RuntimeWarning,
        )

    if not failed.intersection({"band ordering", "pump flow multiple"}):
        failed.update(spec.guard_violations(demand))

    return ValidationReport([Check(name, name not in failed) for name in CHECKS])
