"""Brute-force verification: exhaustive grid search and basin mapping.

Both operations are deliberately independent of any cleverness in the
descent engine so they can serve as desk-scale ground truth: the grid
search enumerates every lattice point, and the basin estimate runs one
deterministic agent from every lattice point and counts which starts
come to rest near the known optimum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

from .analysis import VicinityMeasure
from .engine import BoxDomain, Objective, RunConfig, _checked_eval, run
from .objectives import ObjectiveSpec

__all__ = ["BudgetExceededError", "GridSpec", "basin_measure_estimate", "grid_search"]

DEFAULT_EVALUATION_BUDGET = 10_000_000


class BudgetExceededError(ValueError):
    """A requested grid is larger than the evaluation budget allows."""


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Regular lattice with ``resolution`` points per axis, endpoints included."""

    resolution: int

    def __post_init__(self) -> None:
        if not isinstance(self.resolution, int) or self.resolution < 2:
            raise ValueError("resolution must be an integer >= 2")

    def axis_points(self, lower: float, upper: float) -> list[float]:
        # Affine combination keeps the endpoints exact and, for a symmetric
        # interval with odd resolution, the midpoint exactly zero.
        m = self.resolution - 1
        return [(lower * (m - i) + upper * i) / m for i in range(self.resolution)]

    def total_points(self, dimension: int) -> int:
        return self.resolution**dimension


def _check_budget(grid: GridSpec, dimension: int, budget: int) -> int:
    total = grid.total_points(dimension)
    if total > budget:
        raise BudgetExceededError(
            f"grid of {grid.resolution}^{dimension} = {total} points exceeds "
            f"the evaluation budget of {budget}"
        )
    return total


def grid_search(
    objective: Objective,
    domain: BoxDomain,
    grid: GridSpec,
    max_evaluations: int = DEFAULT_EVALUATION_BUDGET,
) -> tuple[tuple[float, ...], float]:
    """Exhaustive minimum over the lattice, ties to the lexicographically
    smallest point."""
    _check_budget(grid, domain.dimension, max_evaluations)
    axes = [grid.axis_points(lo, hi) for lo, hi in zip(domain.lower, domain.upper)]
    best_point: tuple[float, ...] | None = None
    best_value = 0.0
    for point in itertools.product(*axes):
        value = _checked_eval(objective, point)
        if best_point is None or value < best_value:
            best_point = point
            best_value = value
    assert best_point is not None
    return best_point, best_value


def basin_measure_estimate(
    spec: ObjectiveSpec,
    config: RunConfig,
    grid: GridSpec,
    success_radius: float,
    max_evaluations: int = DEFAULT_EVALUATION_BUDGET,
) -> VicinityMeasure:
    """Measure of the set of starts from which one agent reaches the optimum.

    Runs a single agent deterministically from every lattice point with the
    given speed schedule; a start counts toward the basin when the agent
    rests within ``success_radius`` of the known optimum.  The counted
    fraction scales the box measure into the basin measure.
    """
    if spec.known_optimum is None:
        raise ValueError(f"objective {spec.name!r} has no known optimum")
    if not success_radius > 0.0:
        raise ValueError("success_radius must be positive")
    domain = spec.default_domain
    total = _check_budget(grid, domain.dimension, max_evaluations)
    single = replace(config, n_raindrops=1)
    optimum_point, _ = spec.known_optimum
    axes = [grid.axis_points(lo, hi) for lo, hi in zip(domain.lower, domain.upper)]
    hits = 0
    for start in itertools.product(*axes):
        result = run(single, spec.objective, domain, initial_positions=(start,))
        if math.dist(result.global_best_x, optimum_point) <= success_radius:
            hits += 1
    box_measure = domain.measure()
    return VicinityMeasure(t_measure=(hits / total) * box_measure, s_measure=box_measure)
