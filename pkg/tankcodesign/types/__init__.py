from typing import Callable, Literal, TypeAlias, Union

import numpy as np

Float: TypeAlias = Union[float, np.floating]
Objective: TypeAlias = Callable[[np.ndarray], float]
CapitalCost: TypeAlias = Callable[[float], float]
PolicyShape: TypeAlias = Literal["constant", "per_phase", "per_state"]
GeometryRuleKind: TypeAlias = Literal["margins", "demand_levels"]
