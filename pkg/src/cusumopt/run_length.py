"""Closed-form CUSUM average run lengths (Siegmund's approximation).

All inputs are in standardized units: shifts and the reference value are
multiples of the process standard deviation, and the decision interval is
adjusted by the fixed constant ``BOUNDARY_CORRECTION`` before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ARL_CEILING",
    "BOUNDARY_CORRECTION",
    "DRIFT_ZERO_TOL",
    "ChartDesign",
    "RunLengthProfile",
    "arl_profile",
    "combine_two_sided",
    "in_control_one_sided",
    "one_sided_arl",
    "out_of_control_one_sided",
    "two_sided_arl",
]

BOUNDARY_CORRECTION = 1.166
# |drift| at or below this uses the b**2 limit; the closed form is 0/0 there
DRIFT_ZERO_TOL = 1e-8
# Dominated one-sided ARLs overflow for large drift * b; they barely move the
# two-sided value, so they are capped here.
ARL_CEILING = 1e12


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class ChartDesign:
    """Decision vector of a CUSUM chart.

    ``reference_value`` is K = shift / 2; build designs with
    :meth:`for_shift` unless K is known independently.
    """

    n: int
    h: float
    decision_interval: float
    reference_value: float = 0.5

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"sample size must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        _check_finite(h=self.h, decision_interval=self.decision_interval,
                      reference_value=self.reference_value)
        if self.h <= 0:
            raise ValueError(f"sampling interval must be > 0, got {self.h!r}")
        if self.decision_interval <= 0:
            raise ValueError(f"decision interval must be > 0, got {self.decision_interval!r}")
        if self.reference_value < 0:
            raise ValueError(f"reference value must be >= 0, got {self.reference_value!r}")

    @classmethod
    def for_shift(cls, n: int, h: float, decision_interval: float, delta: float) -> "ChartDesign":
        return cls(n, h, decision_interval, delta / 2.0)

    @property
    def b(self) -> float:
        return self.decision_interval + BOUNDARY_CORRECTION


@dataclass(frozen=True)
class RunLengthProfile:
    arl0: float
    arl_delta: float


def one_sided_arl(drift: float, b: float) -> float:
    """Siegmund's one-sided ARL for drift ``drift`` and adjusted interval ``b``.

    Uses ``(exp(-2*drift*b) + 2*drift*b - 1) / (2*drift**2)``, switching to
    the ``b**2`` limit when ``|drift| <= DRIFT_ZERO_TOL``.  The result is
    capped at ``ARL_CEILING``.
    """
    _check_finite(drift=drift, b=b)
    if b <= 0:
        raise ValueError(f"b must be > 0, got {b!r}")
    if abs(drift) <= DRIFT_ZERO_TOL:
        return min(b * b, ARL_CEILING)
    x = 2.0 * drift * b
    if -x > 700.0:
        return ARL_CEILING
    arl = (math.exp(-x) + x - 1.0) / (2.0 * drift * drift)
    return min(arl, ARL_CEILING)


def in_control_one_sided(K: float, b: float) -> float:
    """One-sided in-control ARL, ``(exp(2Kb) - 2Kb - 1) / (2K^2)``."""
    _check_finite(K=K, b=b)
    if K <= 0:
        raise ValueError(f"K must be > 0 (use one_sided_arl(0, b) for K = 0), got {K!r}")
    return one_sided_arl(-K, b)


def out_of_control_one_sided(delta: float, K: float, b: float) -> tuple[float, float]:
    """Return ``(arl_lower, arl_upper)`` for an upward shift ``delta``.

    The lower-sided chart sees drift ``-delta - K``, the upper-sided one
    ``delta - K``.  ``delta == K`` falls into the zero-drift branch.
    """
    _check_finite(delta=delta, K=K, b=b)
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta!r}")
    if K <= 0:
        raise ValueError(f"K must be > 0, got {K!r}")
    return one_sided_arl(-delta - K, b), one_sided_arl(delta - K, b)


def combine_two_sided(arl_minus: float, arl_plus: float) -> float:
    """Harmonic combination of two one-sided ARLs."""
    if not (arl_minus > 0 and arl_plus > 0):
        raise ValueError(f"ARLs must be > 0, got {arl_minus!r}, {arl_plus!r}")
    return 1.0 / (1.0 / arl_minus + 1.0 / arl_plus)


def arl_profile(delta: float, decision_interval: float) -> RunLengthProfile:
    """Two-sided ARL0 and ARL_delta for K = delta/2, b = H + 1.166.

    Sample size does not enter: the shift is not scaled by sqrt(n).
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta!r}")
    if not decision_interval > 0:
        raise ValueError(f"decision interval must be > 0, got {decision_interval!r}")
    K = delta / 2.0
    b = decision_interval + BOUNDARY_CORRECTION
    one_in = in_control_one_sided(K, b)
    arl0 = combine_two_sided(one_in, one_in)
    lower, upper = out_of_control_one_sided(delta, K, b)
    return RunLengthProfile(arl0=arl0, arl_delta=combine_two_sided(lower, upper))


def two_sided_arl(shift: float, K: float, decision_interval: float) -> float:
    """Two-sided ARL for any shift and reference value; shift 0 gives ARL0."""
    b = decision_interval + BOUNDARY_CORRECTION
    return combine_two_sided(one_sided_arl(-shift - K, b), one_sided_arl(shift - K, b))
