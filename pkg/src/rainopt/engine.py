"""Axis-aligned population descent with halving step sizes.

A swarm of independent agents ("raindrops") falls uniformly on a box
domain.  Each iteration an agent inspects the 2n points reachable by
stepping its current speed along each coordinate axis, moves to the
best strictly improving one, and halves its speed when no inspected
point improves on its current value.  Sweeps repeat until the l2 norm
of all agent speeds drops to the configured tolerance; the resting
agents mark local optima and the best of them is the reported answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "BoxDomain",
    "Direction",
    "EvaluationError",
    "IterationTrace",
    "Objective",
    "Raindrop",
    "RunConfig",
    "RunResult",
    "candidate_directions",
    "default_initial_speed",
    "initialize_swarm",
    "run",
    "select_direction",
    "step_raindrop",
    "velocity_norm",
]

Point = tuple[float, ...]


class EvaluationError(RuntimeError):
    """An objective produced a non-finite value at a feasible point."""


@dataclass(frozen=True, slots=True)
class BoxDomain:
    """Axis-aligned box of feasible points, strictly positive side lengths."""

    lower: Point
    upper: Point

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper bounds must have the same length")
        if not self.lower:
            raise ValueError("domain dimension must be at least 1")
        for lo, hi in zip(self.lower, self.upper):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("bounds must be finite")
            if not lo < hi:
                raise ValueError(
                    f"each lower bound must lie strictly below its upper bound, got [{lo}, {hi}]"
                )

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def measure(self) -> float:
        """Volume of the box (product of side lengths)."""
        return math.prod(hi - lo for lo, hi in zip(self.lower, self.upper))

    def max_side(self) -> float:
        return max(hi - lo for lo, hi in zip(self.lower, self.upper))

    def contains(self, point: Sequence[float]) -> bool:
        if len(point) != len(self.lower):
            return False
        return all(lo <= x <= hi for x, lo, hi in zip(point, self.lower, self.upper))


@dataclass(frozen=True, slots=True)
class Objective:
    """Named, pure, deterministic scalar function of an n-vector."""

    name: str
    arity: int
    fn: Callable[[Sequence[float]], float]

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("objective name must be non-empty")
        if self.arity < 1:
            raise ValueError("objective arity must be at least 1")

    def __call__(self, point: Sequence[float]) -> float:
        return self.fn(point)


def _checked_eval(objective: Objective, point: Point) -> float:
    value = objective.fn(point)
    if type(value) is not float:
        value = float(value)
    if not math.isfinite(value):
        raise EvaluationError(
            f"objective {objective.name!r} returned non-finite value {value!r} "
            f"at point {tuple(point)!r}"
        )
    return value


@dataclass(frozen=True, slots=True)
class Direction:
    """Signed coordinate axis; as a vector it is ``sign * e_axis``."""

    axis: int
    sign: int

    def __post_init__(self) -> None:
        if self.axis < 0:
            raise ValueError("axis must be non-negative")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def as_vector(self, dimension: int) -> Point:
        if not 0 <= self.axis < dimension:
            raise ValueError("axis out of range for dimension")
        return tuple(
            float(self.sign) if k == self.axis else 0.0 for k in range(dimension)
        )


@lru_cache(maxsize=None)
def candidate_directions(dimension: int) -> tuple[Direction, ...]:
    """The 2n signed axis directions in canonical order.

    Positive axes first (axis 0..n-1), then negative axes in the same
    order.  The canonical index breaks ties everywhere in the engine.
    """
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    positive = tuple(Direction(k, 1) for k in range(dimension))
    negative = tuple(Direction(k, -1) for k in range(dimension))
    return positive + negative


@dataclass(frozen=True, slots=True)
class Raindrop:
    """One agent: a feasible position and a positive scalar speed.

    ``speed`` is always the initial speed divided by ``2**halvings``;
    binary halving keeps this exact in floating point.
    """

    position: Point
    speed: float
    halvings: int = 0

    def __post_init__(self) -> None:
        if type(self.position) is not tuple:
            object.__setattr__(
                self, "position", tuple(float(c) for c in self.position)
            )
        if not (self.speed > 0.0 and math.isfinite(self.speed)):
            raise ValueError("speed must be positive and finite")
        if self.halvings < 0:
            raise ValueError("halvings must be non-negative")


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Swarm size, initial speed, stopping tolerance, iteration cap, seed."""

    n_raindrops: int
    v0: float
    epsilon: float
    max_iterations: int = 10_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "v0", float(self.v0))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if not isinstance(self.n_raindrops, int) or self.n_raindrops < 1:
            raise ValueError("n_raindrops must be a positive integer")
        if not (self.v0 > 0.0 and math.isfinite(self.v0)):
            raise ValueError("v0 must be positive and finite")
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be positive and finite")
        initial_norm = self.v0 * math.sqrt(self.n_raindrops)
        if not self.epsilon < initial_norm:
            raise ValueError(
                "epsilon must be strictly below v0 * sqrt(n_raindrops); "
                f"got epsilon={self.epsilon} with initial speed norm {initial_norm}"
            )
        if math.log2(initial_norm / self.epsilon) > 1000.0:
            raise ValueError(
                "epsilon is so small relative to v0 that halving would underflow"
            )
        if not isinstance(self.max_iterations, int) or self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, slots=True)
class IterationTrace:
    """Post-sweep snapshot: speed norm and the best objective value seen."""

    iteration: int
    velocity_l2: float
    best_f: float
    best_x: Point


@dataclass(frozen=True, slots=True)
class RunResult:
    final_raindrops: tuple[Raindrop, ...]
    trace: tuple[IterationTrace, ...]
    global_best_x: Point
    global_best_f: float
    iterations_used: int
    converged: bool


def default_initial_speed(domain: BoxDomain) -> float:
    """Default agent speed: a quarter of the longest box side."""
    return domain.max_side() / 4.0


def select_direction(
    objective: Objective, domain: BoxDomain, position: Sequence[float], speed: float
) -> tuple[Direction, float] | None:
    """Best feasible stencil direction from ``position`` at step ``speed``.

    Evaluates the objective at every in-box point ``position +/- speed * e_k``
    and returns the direction of lowest value together with that value, ties
    going to the lowest canonical index.  Returns None when every stencil
    point falls outside the box.  The returned value may be no better than
    the current one; accepting the move is the caller's decision.
    """
    if not speed > 0.0:
        raise ValueError("speed must be positive")
    if type(position) is not tuple:
        position = tuple(float(c) for c in position)
    lower = domain.lower
    upper = domain.upper
    best: Direction | None = None
    best_value = 0.0
    for direction in candidate_directions(len(position)):
        k = direction.axis
        coord = position[k] + direction.sign * speed
        if coord < lower[k] or coord > upper[k]:
            continue
        candidate = position[:k] + (coord,) + position[k + 1 :]
        value = _checked_eval(objective, candidate)
        if best is None or value < best_value:
            best = direction
            best_value = value
    if best is None:
        return None
    return best, best_value


def _step(
    drop: Raindrop, current_value: float, objective: Objective, domain: BoxDomain
) -> tuple[Raindrop, float]:
    # Exactly one of {move at constant speed, halve in place} per call.
    selected = select_direction(objective, domain, drop.position, drop.speed)
    if selected is not None:
        direction, candidate_value = selected
        if candidate_value < current_value:
            k = direction.axis
            position = (
                drop.position[:k]
                + (drop.position[k] + direction.sign * drop.speed,)
                + drop.position[k + 1 :]
            )
            return Raindrop(position, drop.speed, drop.halvings), candidate_value
    return Raindrop(drop.position, drop.speed * 0.5, drop.halvings + 1), current_value


def step_raindrop(drop: Raindrop, objective: Objective, domain: BoxDomain) -> Raindrop:
    """Advance one agent: move to a strictly better stencil point or halve.

    The position moves (speed unchanged) only when the best feasible stencil
    point is strictly below the current value; otherwise the position stays
    and the speed halves.
    """
    if not domain.contains(drop.position):
        raise ValueError(f"raindrop position {drop.position!r} is outside the domain")
    current_value = _checked_eval(objective, drop.position)
    return _step(drop, current_value, objective, domain)[0]


def initialize_swarm(config: RunConfig, domain: BoxDomain) -> list[Raindrop]:
    """Drop N agents uniformly on the box, all at speed v0.

    Each agent's position comes from its own generator substream keyed by
    (seed, agent index), so agent i's start does not depend on how many
    agents are drawn around it.
    """
    drops = []
    lower = np.asarray(domain.lower)
    upper = np.asarray(domain.upper)
    for i in range(config.n_raindrops):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=(config.seed, i)))
        )
        coords = rng.uniform(lower, upper)
        drops.append(Raindrop(tuple(float(c) for c in coords), config.v0, 0))
    return drops


def velocity_norm(drops: Sequence[Raindrop]) -> float:
    """l2 norm of the swarm's speed vector."""
    if not drops:
        raise ValueError("velocity norm of an empty swarm is undefined")
    return math.sqrt(math.fsum(d.speed * d.speed for d in drops))


def run(
    config: RunConfig,
    objective: Objective,
    domain: BoxDomain,
    *,
    initial_positions: Iterable[Sequence[float]] | None = None,
    on_iteration: Callable[[int, tuple[Raindrop, ...]], None] | None = None,
) -> RunResult:
    """Run full sweeps until the speed norm reaches the tolerance.

    Each iteration steps every agent once, in index order.  Agents do not
    interact, so the result is a pure function of (config, objective,
    domain).  ``initial_positions`` replaces the seeded uniform fall with
    explicit feasible starts (one per agent); ``on_iteration`` observes the
    swarm after each sweep.  The run converges when the l2 norm of agent
    speeds is at most epsilon, else stops at ``max_iterations``.
    """
    if objective.arity != domain.dimension:
        raise ValueError(
            f"objective {objective.name!r} has arity {objective.arity}, "
            f"domain has dimension {domain.dimension}"
        )
    if initial_positions is None:
        drops = initialize_swarm(config, domain)
    else:
        drops = []
        for p in initial_positions:
            point = tuple(float(c) for c in p)
            if not domain.contains(point):
                raise ValueError(f"initial position {point!r} is outside the domain")
            drops.append(Raindrop(point, config.v0, 0))
        if len(drops) != config.n_raindrops:
            raise ValueError(
                f"expected {config.n_raindrops} initial positions, got {len(drops)}"
            )
    values = [_checked_eval(objective, d.position) for d in drops]
    trace: list[IterationTrace] = []
    iteration = 0
    norm = velocity_norm(drops)
    while norm > config.epsilon and iteration < config.max_iterations:
        iteration += 1
        for i, drop in enumerate(drops):
            drops[i], values[i] = _step(drop, values[i], objective, domain)
        norm = velocity_norm(drops)
        best_i = min(range(len(values)), key=values.__getitem__)
        trace.append(
            IterationTrace(iteration, norm, values[best_i], drops[best_i].position)
        )
        if on_iteration is not None:
            on_iteration(iteration, tuple(drops))
    best_i = min(range(len(values)), key=values.__getitem__)
    return RunResult(
        final_raindrops=tuple(drops),
        trace=tuple(trace),
        global_best_x=drops[best_i].position,
        global_best_f=values[best_i],
        iterations_used=iteration,
        converged=norm <= config.epsilon,
    )
