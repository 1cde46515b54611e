"""Built-in benchmark objectives, addressable by name.

``sinc2d`` is the two-dimensional separable sinc bowl whose global
minimum of -2 sits at the origin; the rest are standard multimodal
test functions with their usual boxes and known optima at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .engine import BoxDomain, Objective

__all__ = ["ObjectiveSpec", "ackley", "available_objectives", "lookup",
           "rastrigin", "sinc2d", "sphere"]

# Below this magnitude sin(t)/t is evaluated by its quadratic Taylor
# expansion; the truncation error at the threshold is far below one ulp.
_SINC_TAYLOR_THRESHOLD = 1e-8


def _sinc(t: float) -> float:
    if abs(t) > _SINC_TAYLOR_THRESHOLD:
        return math.sin(t) / t
    return 1.0 - t * t / 6.0


def sinc2d(point: Sequence[float]) -> float:
    """-sin(x)/x - sin(y)/y with the removable singularities filled in."""
    return -_sinc(point[0]) - _sinc(point[1])


def sphere(point: Sequence[float]) -> float:
    """Sum of squares; global minimum 0 at the origin."""
    return sum(c * c for c in point)


def rastrigin(point: Sequence[float]) -> float:
    """10n + sum(x_i^2 - 10 cos(2 pi x_i)); global minimum 0 at the origin."""
    return 10.0 * len(point) + sum(
        c * c - 10.0 * math.cos(2.0 * math.pi * c) for c in point
    )


def ackley(point: Sequence[float]) -> float:
    """Ackley's function; global minimum 0 at the origin."""
    n = len(point)
    s1 = sum(c * c for c in point)
    s2 = sum(math.cos(2.0 * math.pi * c) for c in point)
    return -20.0 * math.exp(-0.2 * math.sqrt(s1 / n)) - math.exp(s2 / n) + 20.0 + math.e


@dataclass(frozen=True, slots=True)
class ObjectiveSpec:
    """An objective bundled with its default box and known optimum."""

    objective: Objective
    default_domain: BoxDomain
    known_optimum: tuple[tuple[float, ...], float] | None = None

    def __post_init__(self) -> None:
        if self.objective.arity != self.default_domain.dimension:
            raise ValueError("objective arity must match the default domain dimension")
        if self.known_optimum is not None:
            point, value = self.known_optimum
            point = tuple(float(c) for c in point)
            value = float(value)
            object.__setattr__(self, "known_optimum", (point, value))
            if not self.default_domain.contains(point):
                raise ValueError("known optimum must be feasible in the default domain")
            if abs(self.objective(point) - value) > 1e-12:
                raise ValueError(
                    f"known optimum value {value} disagrees with "
                    f"{self.objective.name}({point}) = {self.objective(point)}"
                )

    @property
    def name(self) -> str:
        return self.objective.name

    @property
    def dimension(self) -> int:
        return self.objective.arity


def _sinc2d_spec(dimension: int | None) -> ObjectiveSpec:
    if dimension not in (None, 2):
        raise ValueError("sinc2d is two-dimensional")
    return ObjectiveSpec(
        Objective("sinc2d", 2, sinc2d),
        BoxDomain((-5.0, -5.0), (5.0, 5.0)),
        ((0.0, 0.0), -2.0),
    )


def _origin_spec(
    name: str, fn: Callable[[Sequence[float]], float], half_width: float
) -> Callable[[int | None], ObjectiveSpec]:
    def build(dimension: int | None) -> ObjectiveSpec:
        d = 2 if dimension is None else dimension
        if d < 1:
            raise ValueError("dimension must be at least 1")
        return ObjectiveSpec(
            Objective(name, d, fn),
            BoxDomain((-half_width,) * d, (half_width,) * d),
            ((0.0,) * d, 0.0),
        )

    return build


_REGISTRY: dict[str, Callable[[int | None], ObjectiveSpec]] = {
    "sinc2d": _sinc2d_spec,
    "sphere": _origin_spec("sphere", sphere, 5.12),
    "rastrigin": _origin_spec("rastrigin", rastrigin, 5.12),
    "ackley": _origin_spec("ackley", ackley, 32.768),
}


def available_objectives() -> list[str]:
    return sorted(_REGISTRY)


def lookup(name: str, dimension: int | None = None) -> ObjectiveSpec:
    """Objective spec by name, optionally in a non-default dimension."""
    try:
        build = _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown objective {name!r}; available: {', '.join(available_objectives())}"
        ) from None
    return build(dimension)
