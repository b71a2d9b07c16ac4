"""Experiment protocols: convergence sweeps, single trajectories, ring runs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from statistics import fmean

from .runner import SimConfig, TrialRecord, run_trial
from .seeding import (
    DEFAULT_SCHEDULE,
    TAG_RINGS,
    TAG_SWEEP,
    TAG_TRAJECTORY,
    RingGeometry,
    RingSchedule,
    SeedStream,
    _check_probability,
    bernoulli_seed,
    derive_trial_seed,
    ring_seed,
)
from .errors import InvalidConfig

DEFAULT_PROBABILITIES = tuple(round(0.1 * i, 10) for i in range(1, 11))


def probability_grid(p_min: float, p_max: float, p_step: float) -> tuple[float, ...]:
    """Inclusive arithmetic grid, rounded so 0.1-steps land on exact decimals."""
    if p_step <= 0:
        raise InvalidConfig(f"p_step must be positive, got {p_step}")
    n = int(round((p_max - p_min) / p_step + 1e-9)) + 1
    return tuple(round(p_min + i * p_step, 10) for i in range(n))


@dataclass(frozen=True)
class SweepSpec:
    width: int = 10
    height: int = 10
    probabilities: tuple[float, ...] = DEFAULT_PROBABILITIES
    trials_per_p: int = 15
    cfg: SimConfig = field(default_factory=SimConfig)
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "probabilities", tuple(float(p) for p in self.probabilities))
        if self.trials_per_p < 1:
            raise InvalidConfig(f"trials_per_p must be >= 1, got {self.trials_per_p}")
        for p in self.probabilities:
            _check_probability(p)


@dataclass(frozen=True)
class TrialOutcome:
    seed: int
    converged: bool
    convergence_step: int | None


@dataclass(frozen=True)
class SweepEntry:
    p: float
    trial_count: int
    converged_count: int
    mean_convergence_steps: float | None  # over converged trials only
    outcomes: tuple[TrialOutcome, ...]


@dataclass(frozen=True)
class SweepSummary:
    spec: SweepSpec
    entries: tuple[SweepEntry, ...]

    def entry(self, p: float) -> SweepEntry:
        for e in self.entries:
            if abs(e.p - p) < 1e-9:
                return e
        raise KeyError(p)


def _sweep_trial(width: int, height: int, p: float, seed: int, cfg: SimConfig) -> TrialOutcome:
    grid = bernoulli_seed(width, height, p, SeedStream(seed))
    rec = run_trial(grid, cfg, seed_used=seed)
    return TrialOutcome(seed, rec.converged, rec.convergence_step)


def _run_task(task) -> TrialOutcome:
    return _sweep_trial(*task)


def convergence_sweep(spec: SweepSpec, workers: int = 1) -> SweepSummary:
    """Run ``trials_per_p`` seeded trials per probability and aggregate.

    Trial (i, j) uses ``derive_trial_seed(base_seed, 1, i, j)``, so the result
    does not depend on ``workers``.
    """
    tasks = [
        (spec.width, spec.height, p, derive_trial_seed(spec.base_seed, TAG_SWEEP, i, j), spec.cfg)
        for i, p in enumerate(spec.probabilities)
        for j in range(spec.trials_per_p)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        outcomes = [_run_task(t) for t in tasks]

    entries = []
    n = spec.trials_per_p
    for i, p in enumerate(spec.probabilities):
        chunk = tuple(outcomes[i * n : (i + 1) * n])
        steps = [o.convergence_step for o in chunk if o.converged]
        entries.append(
            SweepEntry(
                p=p,
                trial_count=n,
                converged_count=len(steps),
                mean_convergence_steps=fmean(steps) if steps else None,
                outcomes=chunk,
            )
        )
    return SweepSummary(spec=spec, entries=tuple(entries))


def trajectory_run(
    grid_size: tuple[int, int],
    p: float,
    cfg: SimConfig = SimConfig(),
    base_seed: int = 0,
    trial_index: int = 0,
) -> TrialRecord:
    """One uniformly seeded trial on a (width, height) grid."""
    width, height = grid_size
    seed = derive_trial_seed(base_seed, TAG_TRAJECTORY, 0, trial_index)
    grid = bernoulli_seed(width, height, p, SeedStream(seed))
    return run_trial(grid, cfg, seed_used=seed)


@dataclass(frozen=True)
class RingRunRecord:
    trial: TrialRecord
    geometry: RingGeometry
    schedule: RingSchedule

    @property
    def final_ring_fractions(self) -> tuple[float, ...]:
        return tuple(s[-1] for s in self.trial.ring_series)

    @property
    def initial_ring_fractions(self) -> tuple[float, ...]:
        return tuple(s[0] for s in self.trial.ring_series)


def ring_experiment(
    geom: RingGeometry = RingGeometry(11),
    sched: RingSchedule = DEFAULT_SCHEDULE,
    cfg: SimConfig | None = None,
    base_seed: int = 0,
    trial_index: int = 0,
) -> RingRunRecord:
    """Seed the concentric-ring city and run it with per-ring metrics.

    Without explicit snapshot steps, the initial and final grids are kept.
    """
    sched.check(geom)
    cfg = cfg or SimConfig()
    snaps = cfg.snapshot_steps or tuple({0, cfg.max_steps})
    cfg = replace(cfg, record_rings=geom, snapshot_steps=snaps)
    seed = derive_trial_seed(base_seed, TAG_RINGS, 0, trial_index)
    grid = ring_seed(geom, sched, SeedStream(seed))
    return RingRunRecord(run_trial(grid, cfg, seed_used=seed), geom, sched)
