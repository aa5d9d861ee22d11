"""Bi-objective CUSUM design problem: minimize (C_E, ARL_delta) over (n, h, H)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .economics import (
    LITERAL,
    CostModelVariant,
    CostTimeParams,
    ProcessModel,
    expected_cost_per_cycle,
)
from .run_length import ChartDesign, arl_profile

__all__ = [
    "ArlConstraints",
    "ChartDesignProblem",
    "ConstraintPolicy",
    "DesignSpace",
    "Evaluation",
    "decode",
    "encode",
    "evaluate",
]


class ConstraintPolicy(str, Enum):
    ENFORCE = "enforce"
    PENALTY = "penalty"
    OFF = "off"


@dataclass(frozen=True)
class DesignSpace:
    n_range: tuple[int, int]
    h_range: tuple[float, float]
    H_range: tuple[float, float]

    def __post_init__(self) -> None:
        n_lo, n_hi = self.n_range
        if int(n_lo) != n_lo or int(n_hi) != n_hi or n_lo < 1:
            raise ValueError(f"n range must be positive integers, got {self.n_range!r}")
        object.__setattr__(self, "n_range", (int(n_lo), int(n_hi)))
        object.__setattr__(self, "h_range", tuple(float(v) for v in self.h_range))
        object.__setattr__(self, "H_range", tuple(float(v) for v in self.H_range))
        for name in ("n_range", "h_range", "H_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} needs lower < upper, got {(lo, hi)!r}")
        if self.h_range[0] <= 0 or self.H_range[0] <= 0:
            raise ValueError("h and H ranges must be strictly positive")

    @property
    def lower(self) -> np.ndarray:
        return np.array([self.n_range[0], self.h_range[0], self.H_range[0]], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.n_range[1], self.h_range[1], self.H_range[1]], dtype=float)

    def contains(self, design: ChartDesign) -> bool:
        return (self.n_range[0] <= design.n <= self.n_range[1]
                and self.h_range[0] <= design.h <= self.h_range[1]
                and self.H_range[0] <= design.decision_interval <= self.H_range[1])


@dataclass(frozen=True)
class ArlConstraints:
    arl_lower_bound: float = 200.0
    arl_upper_bound: float = 14.0
    policy: ConstraintPolicy = ConstraintPolicy.ENFORCE

    def __post_init__(self) -> None:
        object.__setattr__(self, "policy", ConstraintPolicy(self.policy))
        if not self.arl_lower_bound > self.arl_upper_bound > 0:
            raise ValueError(
                "need arl_lower_bound > arl_upper_bound > 0, got "
                f"{self.arl_lower_bound!r}, {self.arl_upper_bound!r}")


@dataclass(frozen=True)
class Evaluation:
    """Objectives ``(C_E, ARL_delta)`` plus constraint bookkeeping.

    Under the penalty policy the objectives already carry the violation and
    ``feasible`` is True so the optimizer treats the point as unconstrained;
    ``violation`` still reports the raw amount.
    """

    objectives: tuple[float, float]
    violation: float
    feasible: bool
    arl0: float = math.nan

    @property
    def cost(self) -> float:
        return self.objectives[0]

    @property
    def arl_delta(self) -> float:
        return self.objectives[1]


def evaluate(design: ChartDesign, process: ProcessModel, params: CostTimeParams,
             constraints: ArlConstraints, variant: CostModelVariant = LITERAL,
             space: DesignSpace | None = None) -> Evaluation:
    if space is not None and not space.contains(design):
        raise ValueError(f"design {design!r} lies outside the design space")
    rl = arl_profile(process.delta, design.decision_interval)
    cost = expected_cost_per_cycle(design, process, params, rl, variant)
    policy = constraints.policy
    if policy is ConstraintPolicy.OFF:
        return Evaluation((cost, rl.arl_delta), 0.0, True, rl.arl0)

    violation = (max(0.0, constraints.arl_lower_bound - rl.arl0)
                 + max(0.0, rl.arl_delta - constraints.arl_upper_bound))
    if policy is ConstraintPolicy.PENALTY:
        return Evaluation((cost + violation, rl.arl_delta + violation), violation, True, rl.arl0)
    return Evaluation((cost, rl.arl_delta), violation, violation == 0.0, rl.arl0)


def decode(genes, space: DesignSpace, delta: float) -> ChartDesign:
    """Clamp genes ``(n, h, H)`` into ``space`` and round the n gene."""
    g = np.clip(np.asarray(genes, dtype=float), space.lower, space.upper)
    return ChartDesign.for_shift(int(math.floor(g[0] + 0.5)), float(g[1]), float(g[2]), delta)


def encode(design: ChartDesign) -> np.ndarray:
    return np.array([design.n, design.h, design.decision_interval], dtype=float)


@dataclass
class ChartDesignProblem:
    """The optimizer-facing bundle of model, space, constraints and variant."""

    process: ProcessModel
    params: CostTimeParams
    space: DesignSpace
    constraints: ArlConstraints = field(default_factory=ArlConstraints)
    variant: CostModelVariant = LITERAL

    n_objectives = 2

    @property
    def lower(self) -> np.ndarray:
        return self.space.lower

    @property
    def upper(self) -> np.ndarray:
        return self.space.upper

    def decode(self, genes) -> ChartDesign:
        return decode(genes, self.space, self.process.delta)

    def evaluate_design(self, design: ChartDesign) -> Evaluation:
        return evaluate(design, self.process, self.params, self.constraints, self.variant,
                        self.space)

    def evaluate(self, genes) -> Evaluation:
        return self.evaluate_design(self.decode(genes))
