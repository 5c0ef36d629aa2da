from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from tankcodesign.config.instance import Instance
from tankcodesign.config.spsa import SpsaConfig
from tankcodesign.model import ChainSpec, ThresholdPolicy
from tankcodesign.types import PolicyShape

PriceParameters = Tuple[float, float]


class HorizonConfig(BaseModel):
    """
    Planning horizon and discounting.

    Attributes:
        N: Horizon in intervals.
        K: Intervals per year; enables the net present cost when set.
        beta: Annual inflation rate.
        xi: Annual discount rate.
    """

    N: int = Field(default=175200, ge=0, description="Horizon in intervals")
    K: Optional[int] = Field(default=None, gt=0, description="Intervals per year")
    beta: float = Field(default=0.0, description="Annual inflation rate")
    xi: float = Field(default=0.0, description="Annual discount rate")

    @model_validator(mode="after")
    def validate_years(self) -> HorizonConfig:
        """
        Validate the discounting parameters.

        Raises:
            ValueError: If K does not divide N or xi = -1.
        """
        if self.K is not None and self.N % self.K:
            raise ValueError(f"K = {self.K} must divide N = {self.N}")

        if self.xi == -1.0:
            raise ValueError("xi must not be -1")

        return self


class SimulationConfig(BaseModel):
    """
    Monte Carlo runs.

    Seeds are consecutive from the run seed.

    Attributes:
        runs: Number of seeded runs.
        N: Steps per run.
        N_grid: Horizons at which the convergence report is taken; defaults to [N].
        x0: Initial volume indices; defaults to the empty and the full tank.
        trajectory: Write the trajectory of the first run.
    """

    runs: int = Field(default=1, ge=1, description="Number of seeded runs")
    N: int = Field(default=175200, gt=0, description="Steps per run")
    N_grid: List[int] = Field(default_factory=list, description="Report horizons")
    x0: List[int] = Field(default_factory=list, description="Initial volume indices")
    trajectory: bool = Field(default=False, description="Write the first trajectory")

    @model_validator(mode="after")
    def validate_grid(self) -> SimulationConfig:
        """
        Validate the report horizons.

        Raises:
            ValueError: If a horizon is not in [1, N].
        """
        if any(not 0 < size <= self.N for size in self.N_grid):
            raise ValueError(f"report horizons must lie in [1, {self.N}]")

        return self

    def horizons(self) -> List[int]:
        """Report horizons, in increasing order."""
        return sorted(set(self.N_grid)) if self.N_grid else [self.N]

    def initial_states(self, spec: ChainSpec) -> List[int]:
        """Initial volume indices for a geometry."""
        return list(self.x0) if self.x0 else [0, spec.n]


class SensitivityConfig(BaseModel):
    """
    Price-parameter sensitivity studies.

    Attributes:
        tank_volume: Tank volume of the fixed design; defaults to the run tank volume.
        fixed_grid: True (μ, σ) values evaluated against the fixed design.
        assumed_grid: Assumed (μ̃, σ̃) values used at design time.
        true_params: True (μ, σ) used to evaluate the misassumed designs.
    """

    tank_volume: Optional[float] = Field(default=None, gt=0.0, description="Fixed design tank volume")
    fixed_grid: List[PriceParameters] = Field(default_factory=list, description="True price parameters")
    assumed_grid: List[PriceParameters] = Field(default_factory=list, description="Assumed price parameters")
    true_params: PriceParameters = Field(default=(20.0, 10.0), description="True price parameters")

    @model_validator(mode="after")
    def validate_grids(self) -> SensitivityConfig:
        """
        Validate the standard deviations of every grid point.

        Raises:
            ValueError: If a standard deviation is not positive.
        """
        for _, sigma in [*self.fixed_grid, *self.assumed_grid, self.true_params]:
            if not sigma > 0.0:
                raise ValueError(f"price standard deviations must be positive, got {sigma}")

        return self


class SurfaceConfig(BaseModel):
    """
    Grid of tank volumes and constant thresholds for the co-design cost surface.

    Attributes:
        volumes: Tank volumes.
        thresholds: Constant thresholds.
        closed_form: Use the closed form of the constant-demand, unit-quantum example.
    """

    volumes: List[float] = Field(default_factory=list, description="Tank volumes")
    thresholds: List[float] = Field(default_factory=list, description="Constant thresholds")
    closed_form: bool = Field(default=False, description="Use the closed-form operating cost")


class RunConfig(BaseModel):
    """
    Everything a CLI run needs.

    Attributes:
        instance: The co-design instance.
        tank_volume: Tank volume for single-design tasks.
        thresholds: Decision vector of the policy for single-design tasks; thresholds at the mean price when unset.
        policy_shape: How decision vectors map onto thresholds.
        candidates: Candidate tank volumes of the co-design sweep.
        horizon: Planning horizon.
        spsa: Optimizer configuration; its seed is replaced by the run seed.
        simulation: Monte Carlo runs.
        sensitivity: Sensitivity studies.
        surface: Cost surface grid.
        seed: Run seed.
        threads: Worker threads across candidates and grid points; 0 picks automatically.
    """

    instance: Instance
    tank_volume: Optional[float] = Field(default=None, gt=0.0, description="Tank volume")
    thresholds: Optional[List[float]] = Field(default=None, description="Threshold decision vector")
    policy_shape: PolicyShape = Field(default="per_state", description="Threshold policy shape")
    candidates: List[float] = Field(default_factory=list, description="Candidate tank volumes")
    horizon: HorizonConfig = Field(default_factory=HorizonConfig)
    spsa: SpsaConfig = Field(default_factory=SpsaConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    sensitivity: SensitivityConfig = Field(default_factory=SensitivityConfig)
    surface: SurfaceConfig = Field(default_factory=SurfaceConfig)
    seed: int = Field(default=0, ge=0, description="Run seed")
    threads: int = Field(default=1, ge=0, description="Worker threads")

    @model_validator(mode="after")
    def validate_candidates(self) -> RunConfig:
        """
        Validate the candidate tank volumes.

        Raises:
            ValueError: If a candidate is not positive.
        """
        if any(not volume > 0.0 for volume in self.candidates):
            raise ValueError("candidate tank volumes must be positive")

        return self

    def with_overrides(
        self,
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        candidates: Optional[List[float]] = None,
        iterations: Optional[int] = None,
        restarts: Optional[int] = None,
        box: Optional[Tuple[float, float]] = None,
    ) -> RunConfig:
        """
        Copy with command-line overrides applied; unset overrides keep the configured value.

        Args:
            seed: Run seed.
            threads: Worker threads.
            candidates: Candidate tank volumes.
            iterations: SPSA iterations per restart.
            restarts: SPSA restarts.
            box: SPSA threshold box (lower, upper).

        Returns:
            The validated copy.

        Raises:
            pydantic.ValidationError: If an override breaks a field constraint.
        """
        spsa = self.spsa.model_dump()
        if iterations is not None:
            spsa["iterations"] = iterations

        if restarts is not None:
            spsa["restarts"] = restarts

        if box is not None:
            spsa["box_lo"], spsa["box_hi"] = box

        update = {"seed": seed, "threads": threads, "candidates": candidates}
        fields = dict(self) | {key: value for key, value in update.items() if value is not None}
        fields["spsa"] = SpsaConfig.model_validate(spsa)
        return RunConfig.model_validate(fields)

    def spsa_config(self) -> SpsaConfig:
        """Optimizer configuration seeded with the run seed."""
        return self.spsa.model_copy(update={"seed": self.seed})

    def volume(self) -> float:
        """
        Tank volume of single-design tasks.

        Raises:
            ValueError: If tank_volume is not set.
        """
        if self.tank_volume is None:
            raise ValueError("tank_volume is required for this task")

        return self.tank_volume

    def policy(self, spec: ChainSpec) -> ThresholdPolicy:
        """Threshold policy of single-design tasks."""
        if self.thresholds is None:
            return ThresholdPolicy.at_mean(self.instance.price_model.mean, spec)

        return ThresholdPolicy.from_vector(np.asarray(self.thresholds), spec, self.policy_shape)


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Load a run configuration from JSON.

    Relative CSV paths are resolved against the directory of the file.

    Args:
        path: JSON configuration file.

    Returns:
        The validated configuration.
    """
    path = Path(path)
    config = RunConfig.model_validate_json(path.read_text())
    return config.model_copy(update={"instance": config.instance.with_base_dir(path.parent)})
