"""Independent checks: Monte-Carlo run lengths, renewal-cycle costs, grid fronts.

Random numbers come from numpy's PCG64 bit generator; Gaussian variates
use numpy's ziggurat ``standard_normal``.  A plan's seed is split with
``numpy.random.SeedSequence.spawn`` into one child stream per block of
``BLOCK_SIZE`` replications, and block results are combined by summation,
so estimates do not depend on the order blocks are executed in.

Within a block every replication receives one variate per step whether or
not it has already signalled.  Replication ``j`` therefore sees the same
observation stream for every (K, H), which gives exact common random
numbers across designs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .economics import LITERAL, CostModelVariant, CostTimeParams, ProcessModel
from .moea import FrontRow, ParetoFront
from .problem import DesignSpace
from .run_length import ChartDesign, RunLengthProfile, arl_profile

__all__ = [
    "BLOCK_SIZE",
    "CostEstimate",
    "MAX_STEPS",
    "RunLengthEstimate",
    "SimulationPlan",
    "grid_reference_front",
    "non_dominated_rows",
    "run_lengths",
    "simulate_cycle_cost",
    "simulate_run_length",
]

BLOCK_SIZE = 4096
MAX_STEPS = 10_000_000
Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimulationPlan:
    """Monte-Carlo plan in standardized units (target 0, sigma 1)."""

    replications: int
    rng_seed: int
    shift: float
    K: float
    H: float

    def __post_init__(self) -> None:
        if int(self.replications) != self.replications or self.replications < 1:
            raise ValueError(f"replications must be a positive integer, got {self.replications!r}")
        if not (math.isfinite(self.K) and self.K >= 0):
            raise ValueError(f"K must be >= 0, got {self.K!r}")
        if not (math.isfinite(self.H) and self.H > 0):
            raise ValueError(f"H must be > 0, got {self.H!r}")
        if not math.isfinite(self.shift):
            raise ValueError(f"shift must be finite, got {self.shift!r}")


@dataclass(frozen=True)
class RunLengthEstimate:
    mean: float
    half_width: float
    replications: int


@dataclass(frozen=True)
class CostEstimate:
    mean: float
    half_width: float
    replications: int


def _block_sizes(replications: int) -> list[int]:
    full, rest = divmod(replications, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _block_streams(seed: int, replications: int) -> list[tuple[int, np.random.Generator]]:
    sizes = _block_sizes(replications)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    return [(size, np.random.default_rng(child)) for size, child in zip(sizes, children)]


def _run_lengths_block(size: int, rng: np.random.Generator, shift: float, K: float,
                       H: float) -> np.ndarray:
    upper = np.zeros(size)
    lower = np.zeros(size)
    stopped_at = np.zeros(size, dtype=np.int64)
    active = np.ones(size, dtype=bool)
    step = 0
    while active.any():
        step += 1
        if step > MAX_STEPS:
            raise RuntimeError(
                f"{int(active.sum())} replications did not signal within {MAX_STEPS} steps "
                f"(K={K}, H={H}, shift={shift})")
        x = rng.standard_normal(size) + shift
        np.maximum(0.0, x - K + upper, out=upper)
        np.maximum(0.0, -K - x + lower, out=lower)
        signal = active & ((upper > H) | (lower > H))
        stopped_at[signal] = step
        active &= ~signal
    return stopped_at


def run_lengths(plan: SimulationPlan) -> np.ndarray:
    """Per-replication run lengths, in replication order."""
    return np.concatenate([_run_lengths_block(size, rng, plan.shift, plan.K, plan.H)
                           for size, rng in _block_streams(plan.rng_seed, plan.replications)])


def simulate_run_length(plan: SimulationPlan, map_fn: Callable = map) -> RunLengthEstimate:
    """Estimate the two-sided CUSUM ARL by direct simulation of the recursion.

    Both one-sided statistics start at zero; the run ends at the first
    observation where either exceeds H.
    """
    def block(args):
        size, rng = args
        lengths = _run_lengths_block(size, rng, plan.shift, plan.K, plan.H).astype(float)
        return lengths.sum(), np.square(lengths).sum()

    sums = list(map_fn(block, _block_streams(plan.rng_seed, plan.replications)))
    total = sum(s for s, _ in sums)
    total_sq = sum(q for _, q in sums)
    R = plan.replications
    mean = total / R
    var = max(total_sq / R - mean * mean, 0.0) * R / (R - 1) if R > 1 else 0.0
    return RunLengthEstimate(float(mean), Z95 * math.sqrt(var / R), R)


def simulate_cycle_cost(design: ChartDesign, process: ProcessModel, params: CostTimeParams,
                        replications: int, seed: int,
                        variant: CostModelVariant = LITERAL,
                        rl: RunLengthProfile | None = None) -> CostEstimate:
    """Renewal-reward estimate of the long-run cost ratio.

    Each cycle: an exponential in-control period (rate lambda) sampled every
    h hours, false alarms at each in-control sample with probability
    1/ARL0, a detection delay of a geometric number of samples with mean
    ARL_delta (exponential when ARL_delta < 1), sampling time n*t, then
    search and repair.  Cost accrues per the same cost items as the
    closed form; the estimate is total cost over total cycle time.
    """
    if int(replications) != replications or replications < 2:
        raise ValueError(f"replications must be an integer >= 2, got {replications!r}")
    if rl is None:
        rl = arl_profile(process.delta, design.decision_interval)
    p, n, h, lam = params, design.n, design.h, process.lam
    sample_rate = (p.d + n * p.y_var) / h

    cost_sum = length_sum = 0.0
    cost_sq = length_sq = cross = 0.0
    for size, rng in _block_streams(seed, replications):
        failure = rng.exponential(1.0 / lam, size)
        in_control_samples = np.floor(failure / h)
        false_alarms = rng.binomial(in_control_samples.astype(np.int64), 1.0 / rl.arl0)
        if rl.arl_delta >= 1.0:
            delay_samples = rng.geometric(1.0 / rl.arl_delta, size).astype(float)
        else:
            delay_samples = rng.exponential(rl.arl_delta, size)
        out_of_control = delay_samples * h - (failure - in_control_samples * h) + n * p.t
        producing_after_shift = out_of_control + p.gamma1 * p.t1 + p.gamma2 * p.t2

        length = (failure + (1 - p.gamma1) * false_alarms * p.t0 + out_of_control
                  + p.t1 + p.t2)
        cost = (p.c1 * producing_after_shift + p.w * false_alarms + p.y_cost
                + sample_rate * (failure + producing_after_shift))
        if variant.include_in_control_cost:
            cost = cost + p.c0 * failure

        cost_sum += cost.sum()
        length_sum += length.sum()
        cost_sq += np.square(cost).sum()
        length_sq += np.square(length).sum()
        cross += (cost * length).sum()

    R = replications
    ratio = cost_sum / length_sum
    mean_len = length_sum / R
    # delta-method variance of the ratio estimator
    resid_sq = cost_sq - 2 * ratio * cross + ratio * ratio * length_sq
    var = max(resid_sq, 0.0) / (R - 1) / (mean_len * mean_len)
    return CostEstimate(float(ratio), Z95 * math.sqrt(var / R), R)


def non_dominated_rows(rows: list[FrontRow]) -> list[FrontRow]:
    """Exact two-objective non-dominated subset, sorted by the first objective.

    Rows with identical objectives are collapsed to the first one seen.
    """
    ordered = sorted(rows, key=lambda r: (r.objectives[0], r.objectives[1]))
    kept = []
    best_second = math.inf
    for row in ordered:
        if row.objectives[1] < best_second:
            kept.append(row)
            best_second = row.objectives[1]
    return kept


def grid_reference_front(problem, space: DesignSpace, steps: tuple[int, int] = (100, 100),
                         max_points: int = 10_000_000) -> ParetoFront:
    """Evaluate every lattice point of ``space`` and return its non-dominated set.

    The lattice is all integers in the n range times ``steps`` evenly spaced
    values of h and of H.  When some points are feasible only those compete;
    otherwise the least-violating points are kept.
    """
    h_steps, H_steps = steps
    if h_steps < 2 or H_steps < 2:
        raise ValueError("need at least 2 grid steps per axis")
    ns = range(space.n_range[0], space.n_range[1] + 1)
    total = len(ns) * h_steps * H_steps
    if total > max_points:
        raise ValueError(f"grid has {total} points, more than the limit {max_points}")
    hs = np.linspace(*space.h_range, h_steps)
    Hs = np.linspace(*space.H_range, H_steps)

    rows = []
    for n in ns:
        for h in hs:
            for H in Hs:
                design = ChartDesign.for_shift(n, float(h), float(H), problem.process.delta)
                ev = problem.evaluate_design(design)
                rows.append((ev.violation if not ev.feasible else 0.0,
                             FrontRow(design, tuple(ev.objectives), bool(ev.feasible))))

    feasible = [r for v, r in rows if r.feasible]
    if not feasible:
        least = min(v for v, _ in rows)
        feasible = [r for v, r in rows if v == least]
    return ParetoFront(non_dominated_rows(feasible))
