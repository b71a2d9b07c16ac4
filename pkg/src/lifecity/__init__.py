"""Deterministic Game of Life engine and city-migration experiment harness."""

from .errors import LifeError
from .experiments import (
    DEFAULT_PROBABILITIES,
    RingRunRecord,
    SweepEntry,
    SweepSpec,
    SweepSummary,
    TrialOutcome,
    convergence_sweep,
    ring_experiment,
    trajectory_run,
)
from .grid import (
    Boundary,
    CellMask,
    GridState,
    alive_fraction,
    grid_from_rows,
    grids_equal,
    masked_alive_fraction,
    neighbor_count,
    step,
    step_reference,
)
from .runner import SimConfig, TrialRecord, run_trial
from .seeding import (
    DEFAULT_SCHEDULE,
    RingGeometry,
    RingSchedule,
    SeedStream,
    bernoulli_seed,
    derive_trial_seed,
    ring_index,
    ring_mask,
    ring_seed,
)
from .serialize import export_sweep_json, export_timeseries_csv, parse_pattern, render_pgm, write_pattern

__version__ = "0.1.0"
