"""Success-probability model, halving-count prediction, and clustering.

The model: an agent that lands inside the target basin around the known
optimum descends to it, so with landing probability p = |T|/|S| per
agent, N independent agents succeed with probability 1 - (1 - p)^N.
This module provides the closed form, a seeded empirical estimate of
the same rate, the halving-count iteration bound, and the grouping of
resting agents into distinct local optima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .engine import Objective, Raindrop, RunConfig, _checked_eval, run
from .objectives import ObjectiveSpec

__all__ = [
    "LocalOptimum",
    "SuccessEstimate",
    "VicinityMeasure",
    "cluster_local_optima",
    "empirical_success_probability",
    "expected_halvings",
    "theoretical_success_probability",
    "trial_seed",
]


@dataclass(frozen=True, slots=True)
class VicinityMeasure:
    """Measure of the reachable basin T inside the feasible set S."""

    t_measure: float
    s_measure: float
    ratio: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.s_measure > 0.0 and math.isfinite(self.s_measure)):
            raise ValueError("s_measure must be positive and finite")
        if not 0.0 <= self.t_measure <= self.s_measure:
            raise ValueError("t_measure must lie in [0, s_measure]")
        object.__setattr__(self, "ratio", self.t_measure / self.s_measure)


@dataclass(frozen=True, slots=True)
class SuccessEstimate:
    """Empirical success count over independent seeded trials."""

    trials: int
    successes: int
    tolerance: float
    rate: float = field(init=False)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "rate", self.successes / self.trials)


def theoretical_success_probability(vicinity: VicinityMeasure, n_raindrops: int) -> float:
    """Probability that at least one of N uniform landings hits the basin."""
    if n_raindrops < 1:
        raise ValueError("n_raindrops must be at least 1")
    if not 0.0 <= vicinity.ratio <= 1.0:
        raise ValueError("basin ratio must lie in [0, 1]")
    return 1.0 - (1.0 - vicinity.ratio) ** n_raindrops


def trial_seed(master_seed: int, trial: int) -> int:
    """Derived 64-bit seed for one trial, stable across platforms."""
    seq = np.random.SeedSequence(entropy=(master_seed, trial))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def empirical_success_probability(
    config: RunConfig,
    spec: ObjectiveSpec,
    trials: int,
    success_radius: float,
    master_seed: int,
) -> SuccessEstimate:
    """Fraction of seeded runs whose best point lands near the known optimum.

    Each trial re-runs the full swarm with a seed derived from
    (master_seed, trial index); a trial succeeds when the global best
    position lies within ``success_radius`` of the spec's known optimum.
    """
    if spec.known_optimum is None:
        raise ValueError(f"objective {spec.name!r} has no known optimum")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not success_radius > 0.0:
        raise ValueError("success_radius must be positive")
    optimum_point, _ = spec.known_optimum
    successes = 0
    for t in range(trials):
        trial_config = replace(config, seed=trial_seed(master_seed, t))
        result = run(trial_config, spec.objective, spec.default_domain)
        if math.dist(result.global_best_x, optimum_point) <= success_radius:
            successes += 1
    return SuccessEstimate(trials=trials, successes=successes, tolerance=success_radius)


def expected_halvings(v0: float, epsilon: float, n_raindrops: int) -> int:
    """Full-sweep halvings needed to drive the speed norm from sqrt(N)*v0
    below epsilon when no move is ever accepted: ceil(log2(v0*sqrt(N)/eps)).

    On an objective where no step improves (a constant, for instance) this
    is exactly the number of iterations the engine performs.
    """
    if n_raindrops < 1:
        raise ValueError("n_raindrops must be at least 1")
    if not v0 > 0.0:
        raise ValueError("v0 must be positive")
    initial_norm = v0 * math.sqrt(n_raindrops)
    if not 0.0 < epsilon < initial_norm:
        raise ValueError("epsilon must lie strictly between 0 and v0*sqrt(n_raindrops)")
    return math.ceil(math.log2(initial_norm / epsilon))


@dataclass(frozen=True, slots=True)
class LocalOptimum:
    """Cluster of resting positions: representative, value, member count."""

    position: tuple[float, ...]
    value: float
    multiplicity: int


def cluster_local_optima(
    drops: list[Raindrop] | tuple[Raindrop, ...],
    objective: Objective,
    radius: float,
) -> list[LocalOptimum]:
    """Group resting agents into distinct local optima.

    Positions are visited in ascending objective value; each joins the first
    cluster whose representative lies within ``radius`` (Euclidean), else it
    founds a new cluster and becomes its representative.  The result is
    sorted by ascending value, so the first entry is the global best.
    """
    if not drops:
        raise ValueError("cannot cluster an empty swarm")
    if not radius > 0.0:
        raise ValueError("radius must be positive")
    scored = sorted(
        ((_checked_eval(objective, d.position), d.position) for d in drops),
        key=lambda pair: (pair[0], pair[1]),
    )
    representatives: list[tuple[float, tuple[float, ...]]] = []
    counts: list[int] = []
    for value, position in scored:
        for j, (_, rep) in enumerate(representatives):
            if math.dist(position, rep) <= radius:
                counts[j] += 1
                break
        else:
            representatives.append((value, position))
            counts.append(1)
    return [
        LocalOptimum(position=rep, value=value, multiplicity=count)
        for (value, rep), count in zip(representatives, counts)
    ]
