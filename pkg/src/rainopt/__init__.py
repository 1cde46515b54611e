"""rainopt: population compass descent with halving step sizes.

Agents fall uniformly on a box, walk downhill along coordinate axes at
a per-agent speed, and halve that speed whenever no axis step strictly
improves; the run stops when the l2 norm of all speeds reaches a
tolerance.  Companion modules predict and measure the probability of
finding the global optimum and provide brute-force oracles.
"""

from .analysis import (
    LocalOptimum,
    SuccessEstimate,
    VicinityMeasure,
    cluster_local_optima,
    empirical_success_probability,
    expected_halvings,
    theoretical_success_probability,
    trial_seed,
)
from .engine import (
    BoxDomain,
    Direction,
    EvaluationError,
    IterationTrace,
    Objective,
    Raindrop,
    RunConfig,
    RunResult,
    candidate_directions,
    default_initial_speed,
    initialize_swarm,
    run,
    select_direction,
    step_raindrop,
    velocity_norm,
)
from .objectives import (
    ObjectiveSpec,
    ackley,
    available_objectives,
    lookup,
    rastrigin,
    sinc2d,
    sphere,
)
from .oracle import BudgetExceededError, GridSpec, basin_measure_estimate, grid_search

__version__ = "0.1.0"

__all__ = [
    "BoxDomain",
    "BudgetExceededError",
    "Direction",
    "EvaluationError",
    "GridSpec",
    "IterationTrace",
    "LocalOptimum",
    "Objective",
    "ObjectiveSpec",
    "Raindrop",
    "RunConfig",
    "RunResult",
    "SuccessEstimate",
    "VicinityMeasure",
    "ackley",
    "available_objectives",
    "basin_measure_estimate",
    "candidate_directions",
    "cluster_local_optima",
    "default_initial_speed",
    "empirical_success_probability",
    "expected_halvings",
    "grid_search",
    "initialize_swarm",
    "lookup",
    "rastrigin",
    "run",
    "select_direction",
    "sinc2d",
    "sphere",
    "step_raindrop",
    "theoretical_success_probability",
    "trial_seed",
    "velocity_norm",
]
