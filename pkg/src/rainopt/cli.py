"""Command-line front end.

Three subcommands:

* ``run``          - one optimization run; writes trace.csv, report.json and
                     optional positions_<j>.csv swarm snapshots.
* ``success-prob`` - repeated seeded runs; writes success.json comparing the
                     empirical success rate with the 1-(1-p)^N prediction.
* ``oracle``       - brute-force checks; grid mode prints the exhaustive
                     lattice minimum, basin mode prints the measured basin
                     ratio.

Exit codes: 0 converged/success, 1 usage or evaluation error, 2 iteration
cap reached.  All outputs are deterministic functions of the flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from .analysis import (
    VicinityMeasure,
    cluster_local_optima,
    empirical_success_probability,
    theoretical_success_probability,
)
from .engine import (
    BoxDomain,
    EvaluationError,
    Raindrop,
    RunConfig,
    RunResult,
    default_initial_speed,
    initialize_swarm,
    run,
)
from .objectives import ObjectiveSpec, lookup
from .oracle import GridSpec, basin_measure_estimate, grid_search

__all__ = ["main", "entry_point"]

_RUN_CONFIG_KEYS = (
    "objective",
    "n",
    "v0",
    "epsilon",
    "seed",
    "max_iters",
    "bounds",
    "out",
    "snapshot_every",
)


class _Parser(argparse.ArgumentParser):
    # Usage errors exit 1 (argparse's default of 2 is reserved for cap stops).
    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_bounds(text: str) -> BoxDomain:
    lows: list[float] = []
    highs: list[float] = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        pieces = part.split(",")
        if len(pieces) != 2:
            raise ValueError(
                f"malformed bounds segment {part!r}; expected 'lo,hi;lo,hi;...'"
            )
        try:
            lo, hi = float(pieces[0]), float(pieces[1])
        except ValueError:
            raise ValueError(f"malformed bounds segment {part!r}; values must be numeric")
        lows.append(lo)
        highs.append(hi)
    if not lows:
        raise ValueError("bounds must contain at least one 'lo,hi' pair")
    return BoxDomain(tuple(lows), tuple(highs))


def _load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read config file {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path!r} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ValueError(f"config file {path!r} must hold a JSON object")
    unknown = sorted(set(data) - set(_RUN_CONFIG_KEYS))
    if unknown:
        raise ValueError(
            f"config file {path!r} has unknown keys: {', '.join(unknown)}; "
            f"valid keys: {', '.join(_RUN_CONFIG_KEYS)}"
        )
    return data


def _pick(flag_value, file_config: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in file_config:
        return file_config[key]
    return default


def _resolve_spec_and_domain(
    name: str, bounds_text: str | None
) -> tuple[ObjectiveSpec, BoxDomain]:
    bounds = _parse_bounds(bounds_text) if bounds_text else None
    spec = lookup(name, dimension=bounds.dimension if bounds else None)
    return spec, bounds if bounds is not None else spec.default_domain


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _write_trace_csv(path: Path, result: RunResult, dimension: int) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["iteration", "velocity_l2", "best_f"]
            + [f"best_x_{k}" for k in range(dimension)]
        )
        for entry in result.trace:
            writer.writerow(
                [entry.iteration, entry.velocity_l2, entry.best_f, *entry.best_x]
            )


def _write_positions_csv(path: Path, drops: Sequence[Raindrop], dimension: int) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["raindrop"] + [f"x_{k}" for k in range(dimension)] + ["speed"])
        for i, drop in enumerate(drops):
            writer.writerow([i, *drop.position, drop.speed])


def _bounds_payload(domain: BoxDomain) -> list[list[float]]:
    return [[lo, hi] for lo, hi in zip(domain.lower, domain.upper)]


def _cmd_run(args: argparse.Namespace) -> int:
    file_config = _load_config_file(args.config) if args.config else {}
    objective_name = _pick(args.objective, file_config, "objective", "sinc2d")
    bounds_text = _pick(args.bounds, file_config, "bounds", None)
    spec, domain = _resolve_spec_and_domain(objective_name, bounds_text)
    v0 = _pick(args.v0, file_config, "v0", None)
    config = RunConfig(
        n_raindrops=int(_pick(args.n, file_config, "n", 30)),
        v0=float(v0) if v0 is not None else default_initial_speed(domain),
        epsilon=float(_pick(args.epsilon, file_config, "epsilon", 1e-3)),
        max_iterations=int(_pick(args.max_iters, file_config, "max_iters", 10_000)),
        seed=int(_pick(args.seed, file_config, "seed", 0)),
    )
    out_dir = Path(_pick(args.out, file_config, "out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    snapshot_every = int(_pick(args.snapshot_every, file_config, "snapshot_every", 0))
    if snapshot_every < 0:
        raise ValueError("--snapshot-every must be non-negative")

    dimension = domain.dimension
    snapshotted: set[int] = set()
    on_iteration = None
    if snapshot_every > 0:
        _write_positions_csv(
            out_dir / "positions_0.csv", initialize_swarm(config, domain), dimension
        )
        snapshotted.add(0)

        def on_iteration(iteration: int, drops: tuple[Raindrop, ...]) -> None:
            if iteration % snapshot_every == 0:
                _write_positions_csv(
                    out_dir / f"positions_{iteration}.csv", drops, dimension
                )
                snapshotted.add(iteration)

    result = run(config, spec.objective, domain, on_iteration=on_iteration)
    if snapshot_every > 0 and result.iterations_used not in snapshotted:
        _write_positions_csv(
            out_dir / f"positions_{result.iterations_used}.csv",
            result.final_raindrops,
            dimension,
        )

    _write_trace_csv(out_dir / "trace.csv", result, dimension)
    cluster_radius = 2.0 * config.epsilon * math.sqrt(dimension)
    clusters = cluster_local_optima(
        result.final_raindrops, spec.objective, cluster_radius
    )
    report = {
        "objective": spec.name,
        "dimension": dimension,
        "bounds": _bounds_payload(domain),
        "n_raindrops": config.n_raindrops,
        "v0": config.v0,
        "epsilon": config.epsilon,
        "max_iterations": config.max_iterations,
        "seed": config.seed,
        "global_best_x": list(result.global_best_x),
        "global_best_f": result.global_best_f,
        "iterations_used": result.iterations_used,
        "converged": result.converged,
        "cluster_radius": cluster_radius,
        "clusters": [
            {
                "position": list(c.position),
                "value": c.value,
                "multiplicity": c.multiplicity,
            }
            for c in clusters
        ],
        "trace_csv": "trace.csv",
    }
    _write_json(out_dir / "report.json", report)
    print(
        f"objective={spec.name} n={config.n_raindrops} v0={config.v0} "
        f"epsilon={config.epsilon} seed={config.seed}"
    )
    print(
        f"best_f={result.global_best_f!r} best_x={list(result.global_best_x)!r} "
        f"iterations={result.iterations_used} converged={result.converged}"
    )
    return 0 if result.converged else 2


def _cmd_success_prob(args: argparse.Namespace) -> int:
    spec, domain = _resolve_spec_and_domain(args.objective, args.bounds)
    if domain is not spec.default_domain:
        # Success is judged against the known optimum, so a custom box must
        # still contain it; ObjectiveSpec validation enforces that.
        spec = ObjectiveSpec(spec.objective, domain, spec.known_optimum)
    v0 = args.v0 if args.v0 is not None else default_initial_speed(domain)
    config = RunConfig(
        n_raindrops=args.n,
        v0=v0,
        epsilon=args.epsilon,
        max_iterations=args.max_iters,
        seed=args.seed,
    )
    estimate = empirical_success_probability(
        config, spec, trials=args.trials, success_radius=args.radius,
        master_seed=args.seed,
    )
    if args.theoretical_ratio is not None:
        ratio = args.theoretical_ratio
        ratio_source = "flag"
        oracle_resolution = None
    else:
        vicinity = basin_measure_estimate(
            spec, config, GridSpec(args.resolution), args.radius
        )
        ratio = vicinity.ratio
        ratio_source = "oracle"
        oracle_resolution = args.resolution
    predicted = theoretical_success_probability(
        VicinityMeasure(t_measure=ratio, s_measure=1.0), config.n_raindrops
    )
    gap = abs(estimate.rate - predicted)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "objective": spec.name,
        "dimension": domain.dimension,
        "bounds": _bounds_payload(domain),
        "n_raindrops": config.n_raindrops,
        "v0": config.v0,
        "epsilon": config.epsilon,
        "max_iterations": config.max_iterations,
        "master_seed": args.seed,
        "trials": estimate.trials,
        "successes": estimate.successes,
        "rate": estimate.rate,
        "success_radius": estimate.tolerance,
        "basin_ratio": ratio,
        "ratio_source": ratio_source,
        "oracle_resolution": oracle_resolution,
        "predicted_rate": predicted,
        "absolute_gap": gap,
    }
    _write_json(out_dir / "success.json", payload)
    print(f"empirical_rate={estimate.rate!r} ({estimate.successes}/{estimate.trials})")
    print(f"predicted_rate={predicted:.5f} basin_ratio={ratio!r} source={ratio_source}")
    print(f"absolute_gap={gap!r}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    spec, domain = _resolve_spec_and_domain(args.objective, args.bounds)
    if domain is not spec.default_domain:
        spec = ObjectiveSpec(spec.objective, domain, spec.known_optimum)
    grid = GridSpec(args.resolution)
    payload: dict = {
        "objective": spec.name,
        "dimension": domain.dimension,
        "bounds": _bounds_payload(domain),
        "mode": args.mode,
        "resolution": args.resolution,
    }
    if args.mode == "grid":
        point, value = grid_search(spec.objective, domain, grid)
        payload["minimum_x"] = list(point)
        payload["minimum_f"] = value
        print(f"minimum_x={list(point)!r}")
        print(f"minimum_f={value!r}")
    else:
        v0 = args.v0 if args.v0 is not None else default_initial_speed(domain)
        config = RunConfig(
            n_raindrops=1, v0=v0, epsilon=args.epsilon,
            max_iterations=args.max_iters, seed=0,
        )
        vicinity = basin_measure_estimate(spec, config, grid, args.radius)
        payload.update(
            v0=config.v0,
            epsilon=config.epsilon,
            success_radius=args.radius,
            t_measure=vicinity.t_measure,
            s_measure=vicinity.s_measure,
            ratio=vicinity.ratio,
        )
        print(f"t_measure={vicinity.t_measure!r}")
        print(f"s_measure={vicinity.s_measure!r}")
        print(f"ratio={vicinity.ratio:.4f}")
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_json(out_dir / "oracle.json", payload)
    return 0


def _add_common_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--objective", default="sinc2d", help="objective name")
    parser.add_argument("--v0", type=float, default=None,
                        help="initial speed (default: longest box side / 4)")
    parser.add_argument("--epsilon", type=float, default=1e-3,
                        help="stopping tolerance on the speed norm")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed")
    parser.add_argument("--max-iters", type=int, default=10_000, dest="max_iters",
                        help="iteration safety cap")
    parser.add_argument("--bounds", default=None,
                        help="box bounds 'lo,hi;lo,hi;...' (default: objective's box)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rainopt", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one optimization and write its trace")
    # Defaults are applied after merging with --config, so flags use None here.
    run_p.add_argument("--objective", default=None)
    run_p.add_argument("--n", type=int, default=None, help="number of raindrops")
    run_p.add_argument("--v0", type=float, default=None)
    run_p.add_argument("--epsilon", type=float, default=None)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    run_p.add_argument("--bounds", default=None)
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--snapshot-every", type=int, default=None,
                       dest="snapshot_every",
                       help="write positions_<j>.csv every k iterations (0 = off)")
    run_p.add_argument("--config", default=None,
                       help="JSON file with the same fields; flags take precedence")
    run_p.set_defaults(func=_cmd_run)

    sp = sub.add_parser("success-prob",
                        help="estimate the success rate over repeated seeded runs")
    _add_common_run_flags(sp)
    sp.add_argument("--n", type=int, default=30, help="number of raindrops")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--radius", type=float, default=0.1,
                    help="success radius around the known optimum")
    sp.add_argument("--resolution", type=int, default=101,
                    help="grid resolution for the oracle basin estimate")
    sp.add_argument("--theoretical-ratio", type=float, default=None,
                    dest="theoretical_ratio",
                    help="use this basin ratio instead of the oracle estimate")
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=_cmd_success_prob)

    orc = sub.add_parser("oracle", help="brute-force grid search or basin estimate")
    _add_common_run_flags(orc)
    orc.add_argument("--mode", choices=("grid", "basin"), default="grid")
    orc.add_argument("--resolution", type=int, default=201)
    orc.add_argument("--radius", type=float, default=0.1)
    orc.add_argument("--out", default=None)
    orc.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    raise SystemExit(main())
