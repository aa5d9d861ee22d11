"""Expected cost per cycle for an economically designed CUSUM chart."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .run_length import ChartDesign, RunLengthProfile

__all__ = [
    "CostBreakdown",
    "CostModelVariant",
    "CostTimeParams",
    "LITERAL",
    "NO_IN_CONTROL_COST",
    "ProcessModel",
    "cost_breakdown",
    "expected_cost_per_cycle",
    "expected_in_control_samples",
    "expected_time_to_cause",
]


@dataclass(frozen=True)
class ProcessModel:
    """Shift size (sigma units) and assignable-cause rate (per hour)."""

    delta: float
    lam: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be > 0, got {self.delta!r}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be > 0, got {self.lam!r}")

    @property
    def mean_in_control_time(self) -> float:
        return 1.0 / self.lam


@dataclass(frozen=True)
class CostTimeParams:
    """Cost ($, $/hour) and time (hours) constants of the cost model.

    ``gamma1``/``gamma2`` are 1 if production continues during the search
    for / removal of an assignable cause, 0 otherwise.
    """

    c0: float
    c1: float
    w: float
    y_cost: float
    d: float
    y_var: float
    t: float
    t0: float
    t1: float
    t2: float
    gamma1: int = 1
    gamma2: int = 1

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith("gamma"):
                if v not in (0, 1) or isinstance(v, float) and not v.is_integer():
                    raise ValueError(f"{f.name} must be 0 or 1, got {v!r}")
                object.__setattr__(self, f.name, int(v))
            elif not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{f.name} must be finite and >= 0, got {v!r}")
        if not self.c1 > self.c0:
            raise ValueError(f"c1 must exceed c0, got c0={self.c0!r}, c1={self.c1!r}")


@dataclass(frozen=True)
class CostModelVariant:
    """Which form of the cost ratio to evaluate.

    The literal form includes the in-control quality cost ``c0 / lambda``
    in the numerator; published C_E values only reproduce without it.
    """

    include_in_control_cost: bool = True

    @property
    def name(self) -> str:
        return "literal" if self.include_in_control_cost else "no-in-control-cost"

    @classmethod
    def from_name(cls, name: str) -> "CostModelVariant":
        if name == "literal":
            return LITERAL
        if name == "no-in-control-cost":
            return NO_IN_CONTROL_COST
        raise ValueError(f"unknown cost variant {name!r}")


LITERAL = CostModelVariant(True)
NO_IN_CONTROL_COST = CostModelVariant(False)


def _check_rate_interval(lam: float, h: float) -> None:
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError(f"lambda must be > 0, got {lam!r}")
    if not (math.isfinite(h) and h > 0):
        raise ValueError(f"h must be > 0, got {h!r}")


def expected_time_to_cause(lam: float, h: float) -> float:
    """Mean time from the last in-control sample to the assignable cause.

    ``1/lam - h / (exp(lam*h) - 1)``; for ``lam*h < 1e-10`` the series
    limit ``h/2`` is returned.
    """
    _check_rate_interval(lam, h)
    x = lam * h
    if x < 1e-10:
        return h / 2.0
    return 1.0 / lam - h / math.expm1(x)


def expected_in_control_samples(lam: float, h: float) -> float:
    """Mean number of samples taken before the assignable cause occurs."""
    _check_rate_interval(lam, h)
    return 1.0 / math.expm1(lam * h)


@dataclass(frozen=True)
class CostBreakdown:
    """Itemized terms of the cost ratio; ``total`` is C_E."""

    tau: float
    s: float
    in_control_cost: float
    out_of_control_cost: float
    false_alarm_cost: float
    repair_cost: float
    sampling_cost: float
    cycle_length: float
    variant: str

    @property
    def total(self) -> float:
        numerator = (self.in_control_cost + self.out_of_control_cost + self.false_alarm_cost
                     + self.repair_cost + self.sampling_cost)
        return numerator / self.cycle_length


def cost_breakdown(design: ChartDesign, process: ProcessModel, params: CostTimeParams,
                   rl: RunLengthProfile,
                   variant: CostModelVariant = LITERAL) -> CostBreakdown:
    if not (rl.arl0 > 0 and rl.arl_delta > 0):
        raise ValueError(f"run lengths must be > 0, got {rl!r}")
    p, n, h = params, design.n, design.h
    lam = process.lam
    tau = expected_time_to_cause(lam, h)
    s = expected_in_control_samples(lam, h)

    detection = -tau + n * p.t + h * rl.arl_delta
    producing_after_shift = detection + p.gamma1 * p.t1 + p.gamma2 * p.t2
    cycle = 1.0 / lam + (1 - p.gamma1) * s * p.t0 / rl.arl0 + detection + p.t1 + p.t2
    if not cycle > 0:
        raise ValueError(f"non-positive expected cycle length {cycle!r}; check parameters")

    return CostBreakdown(
        tau=tau,
        s=s,
        in_control_cost=p.c0 / lam if variant.include_in_control_cost else 0.0,
        out_of_control_cost=p.c1 * producing_after_shift,
        false_alarm_cost=s * p.w / rl.arl0,
        repair_cost=p.y_cost,
        sampling_cost=(p.d + n * p.y_var) / h * (1.0 / lam + producing_after_shift),
        cycle_length=cycle,
        variant=variant.name,
    )


def expected_cost_per_cycle(design: ChartDesign, process: ProcessModel, params: CostTimeParams,
                            rl: RunLengthProfile,
                            variant: CostModelVariant = LITERAL) -> float:
    """Expected cost per cycle, C_E, for one design point."""
    return cost_breakdown(design, process, params, rl, variant).total
