"""Elitist non-dominated sorting genetic algorithm (NSGA-II).

The engine is generic over a *problem* object exposing ``lower`` and
``upper`` gene bounds (arrays), ``evaluate(genes)`` returning an object with
``objectives``, ``violation`` and ``feasible``, and ``decode(genes)``
mapping genes to whatever design object the caller wants in the front.
All objectives are minimized.

Dominance is constrained dominance: a feasible point beats an infeasible
one, two infeasible points are ordered by total violation, and two
feasible points by ordinary Pareto dominance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "FrontRow",
    "Individual",
    "MoeaConfig",
    "ParetoFront",
    "constrained_dominates",
    "crowded_compare",
    "crowding_distance",
    "evolve",
    "fast_non_dominated_sort",
    "polynomial_mutation",
    "sbx_crossover",
]


@dataclass(frozen=True)
class MoeaConfig:
    population_size: int = 100
    generations: int = 250
    crossover_probability: float = 0.9
    crossover_distribution_index: float = 20.0
    mutation_probability_per_gene: float = 1.0 / 3.0
    mutation_distribution_index: float = 20.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        N = self.population_size
        if int(N) != N or N < 4 or N % 2:
            raise ValueError(f"population_size must be an even integer >= 4, got {N!r}")
        if int(self.generations) != self.generations or self.generations < 1:
            raise ValueError(f"generations must be a positive integer, got {self.generations!r}")
        for name in ("crossover_probability", "mutation_probability_per_gene"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
        for name in ("crossover_distribution_index", "mutation_distribution_index"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not 0 <= int(self.rng_seed) < 2**64 or int(self.rng_seed) != self.rng_seed:
            raise ValueError(f"rng_seed must be an unsigned 64-bit integer, got {self.rng_seed!r}")


@dataclass
class Individual:
    genes: np.ndarray
    evaluation: Any
    rank: int = -1
    crowding: float = 0.0

    @property
    def objectives(self) -> tuple[float, ...]:
        return tuple(self.evaluation.objectives)


@dataclass(frozen=True)
class FrontRow:
    design: Any
    objectives: tuple[float, ...]
    feasible: bool


@dataclass
class ParetoFront:
    """Non-dominated rows sorted by the first objective."""

    rows: list[FrontRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objectives for r in self.rows], dtype=float).reshape(len(self.rows), -1)

    @property
    def feasible(self) -> bool:
        return all(r.feasible for r in self.rows)

    def endpoints(self) -> tuple[FrontRow, FrontRow]:
        """Rows with the smallest and largest first objective."""
        return self.rows[0], self.rows[-1]


def constrained_dominates(a, b) -> bool:
    """True if evaluation ``a`` constrained-dominates evaluation ``b``."""
    if a.feasible and not b.feasible:
        return True
    if not a.feasible:
        return not b.feasible and a.violation < b.violation
    fa, fb = a.objectives, b.objectives
    return all(x <= y for x, y in zip(fa, fb)) and any(x < y for x, y in zip(fa, fb))


def _domination_matrix(evals: Sequence) -> np.ndarray:
    F = np.array([e.objectives for e in evals], dtype=float)
    feas = np.array([bool(e.feasible) for e in evals])
    viol = np.array([float(e.violation) for e in evals])
    le = (F[:, None, :] <= F[None, :, :]).all(axis=2)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=2)
    pareto = le & lt
    both_feasible = feas[:, None] & feas[None, :]
    both_infeasible = ~feas[:, None] & ~feas[None, :]
    return ((feas[:, None] & ~feas[None, :])
            | (both_infeasible & (viol[:, None] < viol[None, :]))
            | (both_feasible & pareto))


def fast_non_dominated_sort(population: Sequence[Individual]) -> list[list[Individual]]:
    """Partition ``population`` into fronts and set each member's ``rank``."""
    m = len(population)
    if m == 0:
        return []
    dom = _domination_matrix([ind.evaluation for ind in population])
    remaining = dom.sum(axis=0)
    current = np.flatnonzero(remaining == 0)
    fronts: list[list[Individual]] = []
    rank = 0
    while current.size:
        members = []
        for i in current:
            population[i].rank = rank
            members.append(population[i])
        fronts.append(members)
        remaining = remaining - dom[current].sum(axis=0)
        remaining[current] = -1
        current = np.flatnonzero(remaining == 0)
        rank += 1
    return fronts


def crowding_distance(front: Sequence[Individual]) -> None:
    """Assign the crowding distance of every member of one front in place."""
    size = len(front)
    if size == 0:
        return
    for ind in front:
        ind.crowding = 0.0
    if size <= 2:
        for ind in front:
            ind.crowding = math.inf
        return
    F = np.array([ind.objectives for ind in front], dtype=float)
    dist = np.zeros(size)
    for k in range(F.shape[1]):
        order = np.argsort(F[:, k], kind="stable")
        vals = F[order, k]
        dist[order[0]] = dist[order[-1]] = math.inf
        span = vals[-1] - vals[0]
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    for ind, d in zip(front, dist):
        ind.crowding = float(d)


def crowded_compare(a: Individual, b: Individual) -> Individual:
    """Preferred of two individuals: lower rank, then larger crowding; ties go to ``a``."""
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    return a if a.crowding >= b.crowding else b


def sbx_crossover(p1: np.ndarray, p2: np.ndarray, lower: np.ndarray, upper: np.ndarray,
                  eta: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover, each gene recombined with probability 1/2.

    Children are drawn from the unbounded spread distribution and clipped,
    so optima sitting on a bound are reachable exactly.
    """
    c1, c2 = p1.astype(float).copy(), p2.astype(float).copy()
    for i in range(p1.size):
        if rng.random() > 0.5 or abs(p1[i] - p2[i]) <= 1e-14:
            continue
        u = rng.random()
        if u <= 0.5:
            beta = (2.0 * u) ** (1.0 / (eta + 1.0))
        else:
            beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0))
        mid, half = 0.5 * (p1[i] + p2[i]), 0.5 * (p2[i] - p1[i])
        c1[i] = min(max(mid - beta * half, lower[i]), upper[i])
        c2[i] = min(max(mid + beta * half, lower[i]), upper[i])
    return c1, c2


def polynomial_mutation(x: np.ndarray, lower: np.ndarray, upper: np.ndarray, eta: float,
                        prob: float, rng: np.random.Generator) -> np.ndarray:
    """Polynomial mutation applied gene-wise with probability ``prob``, then clipped."""
    y = x.astype(float).copy()
    power = 1.0 / (eta + 1.0)
    for i in range(y.size):
        if rng.random() >= prob:
            continue
        u = rng.random()
        dq = (2.0 * u) ** power - 1.0 if u < 0.5 else 1.0 - (2.0 * (1.0 - u)) ** power
        y[i] = min(max(y[i] + dq * (upper[i] - lower[i]), lower[i]), upper[i])
    return y


def _tournament(population: Sequence[Individual], rng: np.random.Generator) -> Individual:
    i, j = rng.integers(len(population), size=2)
    return crowded_compare(population[i], population[j])


def _evaluate_all(problem, genes: Iterable[np.ndarray], map_fn) -> list[Individual]:
    genes = list(genes)
    return [Individual(g, e) for g, e in zip(genes, map_fn(problem.evaluate, genes))]


def _rank_and_crowd(population: list[Individual]) -> list[list[Individual]]:
    fronts = fast_non_dominated_sort(population)
    for front in fronts:
        crowding_distance(front)
    return fronts


def _initial_population(problem, N: int, rng: np.random.Generator, map_fn,
                        attempts: int) -> list[Individual]:
    lower, upper = np.asarray(problem.lower, float), np.asarray(problem.upper, float)
    population = _evaluate_all(problem, lower + rng.random((N, lower.size)) * (upper - lower),
                               map_fn)
    # resample infeasible starters a bounded number of times; keep what remains
    for _ in range(attempts):
        bad = [k for k, ind in enumerate(population) if not ind.evaluation.feasible]
        if not bad:
            break
        fresh = _evaluate_all(
            problem, lower + rng.random((len(bad), lower.size)) * (upper - lower), map_fn)
        for k, ind in zip(bad, fresh):
            if ind.evaluation.feasible:
                population[k] = ind
    return population


def _final_front(problem, population: list[Individual]) -> ParetoFront:
    first = fast_non_dominated_sort(population)[0]
    if any(ind.evaluation.feasible for ind in first):
        first = [ind for ind in first if ind.evaluation.feasible]
    rows: dict[Any, FrontRow] = {}
    seen_objectives = set()
    for ind in sorted(first, key=lambda ind: ind.objectives):
        design = problem.decode(ind.genes)
        objectives = ind.objectives
        if design in rows or objectives in seen_objectives:
            continue
        seen_objectives.add(objectives)
        rows[design] = FrontRow(design, objectives, bool(ind.evaluation.feasible))
    return ParetoFront(list(rows.values()))


def evolve(problem, config: MoeaConfig = MoeaConfig(), *,
           on_generation: Callable[[int, list[Individual]], None] | None = None,
           map_fn: Callable = map, init_attempts: int = 20) -> ParetoFront:
    """Run NSGA-II and return the deduplicated first front of the final population.

    ``on_generation(k, population)`` is called after initialization (k=0)
    and after each generation's survivor selection.  ``map_fn`` may be a
    parallel map; random draws never depend on evaluation order.
    """
    rng = np.random.default_rng(config.rng_seed)
    lower, upper = np.asarray(problem.lower, float), np.asarray(problem.upper, float)
    N = config.population_size

    population = _initial_population(problem, N, rng, map_fn, init_attempts)
    _rank_and_crowd(population)
    if on_generation is not None:
        on_generation(0, population)

    for k in range(1, config.generations + 1):
        children = []
        for _ in range(N // 2):
            p1 = _tournament(population, rng)
            p2 = _tournament(population, rng)
            if rng.random() < config.crossover_probability:
                c1, c2 = sbx_crossover(p1.genes, p2.genes, lower, upper,
                                       config.crossover_distribution_index, rng)
            else:
                c1, c2 = p1.genes.copy(), p2.genes.copy()
            for c in (c1, c2):
                children.append(polynomial_mutation(
                    c, lower, upper, config.mutation_distribution_index,
                    config.mutation_probability_per_gene, rng))

        combined = population + _evaluate_all(problem, children, map_fn)
        survivors: list[Individual] = []
        for front in _rank_and_crowd(combined):
            room = N - len(survivors)
            if room == 0:
                break
            if len(front) <= room:
                survivors.extend(front)
            else:
                survivors.extend(sorted(front, key=lambda ind: -ind.crowding)[:room])
        population = survivors
        if on_generation is not None:
            on_generation(k, population)

    return _final_front(problem, population)
