"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 runtime/domain error. The seed in
use is always echoed to stderr so any run can be repeated.
"""

from __future__ import annotations

import argparse
import secrets
import sys
from pathlib import Path

from .errors import LifeError
from .experiments import SweepSpec, convergence_sweep, probability_grid, ring_experiment, trajectory_run
from .grid import Boundary
from .runner import SimConfig
from .seeding import DEFAULT_SCHEDULE, RingGeometry, RingSchedule
from .serialize import export_sweep_json, export_timeseries_csv, parse_pattern, render_pgm


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _probs(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated probabilities, got {text!r}")


def _boundary(text: str) -> Boundary:
    try:
        return Boundary(text)
    except ValueError:
        raise argparse.ArgumentTypeError("boundary must be 'dead' or 'torus'")


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lifecity", description="Game of Life city-migration experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="single uniformly seeded trajectory")
    run.add_argument("--width", type=int, required=True)
    run.add_argument("--height", type=int, required=True)
    run.add_argument("--p", type=float, required=True)
    run.add_argument("--steps", type=int, default=1000)
    run.add_argument("--boundary", type=_boundary, default=Boundary.DEAD)
    run.add_argument("--seed", type=_seed)
    run.add_argument("--out-csv", required=True)
    run.add_argument("--snapshot-at", type=int)
    run.add_argument("--out-pgm")
    run.add_argument("--scale", type=int, default=1)

    sweep = sub.add_parser("sweep", help="convergence-time sweep over p")
    sweep.add_argument("--width", type=int, default=10)
    sweep.add_argument("--height", type=int, default=10)
    sweep.add_argument("--p-min", type=float, default=0.1)
    sweep.add_argument("--p-max", type=float, default=1.0)
    sweep.add_argument("--p-step", type=float, default=0.1)
    sweep.add_argument("--trials", type=int, default=15)
    sweep.add_argument("--steps", type=int, default=1000)
    sweep.add_argument("--boundary", type=_boundary, default=Boundary.DEAD)
    sweep.add_argument("--seed", type=_seed)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out-json", required=True)

    rings = sub.add_parser("rings", help="concentric-ring city model")
    rings.add_argument("--outer-n", type=int, default=11)
    rings.add_argument("--inner-m", type=int)
    rings.add_argument("--probs", type=_probs, default=DEFAULT_SCHEDULE.probs)
    rings.add_argument("--steps", type=int, default=1000)
    rings.add_argument("--boundary", type=_boundary, default=Boundary.DEAD)
    rings.add_argument("--seed", type=_seed)
    rings.add_argument("--out-csv", required=True)
    rings.add_argument("--out-pgm-final")
    rings.add_argument("--scale", type=int, default=1)

    render = sub.add_parser("render", help="render a '.O' pattern file to PGM")
    render.add_argument("--in-pattern", required=True)
    render.add_argument("--out-pgm", required=True)
    render.add_argument("--scale", type=int, default=1)
    return parser


def _pick_seed(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _cmd_run(args) -> None:
    if (args.snapshot_at is None) != (args.out_pgm is None):
        raise UsageError("lifecity run: error: --snapshot-at and --out-pgm must be given together")
    seed = _pick_seed(args)
    snaps = (args.snapshot_at,) if args.snapshot_at is not None else ()
    cfg = SimConfig(max_steps=args.steps, boundary=args.boundary, snapshot_steps=snaps)
    rec = trajectory_run((args.width, args.height), args.p, cfg, base_seed=seed)
    Path(args.out_csv).write_text(export_timeseries_csv(rec), newline="\n")
    if args.out_pgm:
        Path(args.out_pgm).write_bytes(render_pgm(rec.snapshot(args.snapshot_at), args.scale))
    status = f"converged at t={rec.convergence_step}" if rec.converged else "not converged"
    print(f"{status}; final alive fraction {rec.final_fraction:.6f}", file=sys.stderr)


def _cmd_sweep(args) -> None:
    seed = _pick_seed(args)
    spec = SweepSpec(
        width=args.width,
        height=args.height,
        probabilities=probability_grid(args.p_min, args.p_max, args.p_step),
        trials_per_p=args.trials,
        cfg=SimConfig(max_steps=args.steps, boundary=args.boundary),
        base_seed=seed,
    )
    summary = convergence_sweep(spec, workers=args.workers)
    Path(args.out_json).write_text(export_sweep_json(summary), newline="\n")
    for e in summary.entries:
        mean = "-" if e.mean_convergence_steps is None else f"{e.mean_convergence_steps:.2f}"
        print(f"p={e.p:.2f} converged {e.converged_count}/{e.trial_count} mean_steps={mean}", file=sys.stderr)


def _cmd_rings(args) -> None:
    seed = _pick_seed(args)
    geom = RingGeometry(args.outer_n, args.inner_m)
    sched = RingSchedule(args.probs)
    cfg = SimConfig(max_steps=args.steps, boundary=args.boundary)
    rec = ring_experiment(geom, sched, cfg, base_seed=seed)
    Path(args.out_csv).write_text(export_timeseries_csv(rec.trial), newline="\n")
    if args.out_pgm_final:
        final = rec.trial.snapshot(args.steps)
        Path(args.out_pgm_final).write_bytes(render_pgm(final, args.scale))
    fr = " ".join(f"{v:.4f}" for v in rec.final_ring_fractions)
    print(f"final overall {rec.trial.final_fraction:.4f}; rings {fr}", file=sys.stderr)


def _cmd_render(args) -> None:
    grid = parse_pattern(Path(args.in_pattern).read_text())
    Path(args.out_pgm).write_bytes(render_pgm(grid, args.scale))


COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "rings": _cmd_rings, "render": _cmd_render}


def execute(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    except (LifeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(execute())


if __name__ == "__main__":
    main()
