"""Single-trial simulation loop with convergence detection and metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import GeometryMismatch, InvalidConfig
from .grid import Boundary, GridState, step
from .seeding import RingGeometry


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one trial.

    ``fast_forward`` lets the loop stop early once the board enters a verified
    cycle of period >= 2 and fill the rest of the series by periodic
    extension. The resulting record is identical to simulating every step.
    ``cycle_max_period`` bounds which periods are detected (None: any).
    """

    max_steps: int = 1000
    boundary: Boundary = Boundary.DEAD
    record_rings: RingGeometry | None = None
    snapshot_steps: tuple[int, ...] = ()
    fast_forward: bool = True
    cycle_max_period: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "snapshot_steps", tuple(sorted(set(self.snapshot_steps))))
        if self.max_steps < 0:
            raise InvalidConfig(f"max_steps must be >= 0, got {self.max_steps}")
        for t in self.snapshot_steps:
            if not (0 <= t <= self.max_steps):
                raise InvalidConfig(f"snapshot step {t} outside [0, {self.max_steps}]")
        if self.cycle_max_period is not None and self.cycle_max_period < 2:
            raise InvalidConfig("cycle_max_period must be >= 2")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial.

    ``alive_series[t]`` is the alive fraction at step t, starting with the
    initial grid. ``ring_series[k][t]`` is the same restricted to ring k.
    ``cycle_period`` is diagnostic only: it never affects ``converged``.
    """

    converged: bool
    convergence_step: int | None
    alive_series: tuple[float, ...]
    ring_series: tuple[tuple[float, ...], ...] | None = None
    snapshots: tuple[tuple[int, GridState], ...] = ()
    seed_used: int | None = None
    cycle_period: int | None = None

    def snapshot(self, t: int) -> GridState:
        for st, g in self.snapshots:
            if st == t:
                return g
        raise KeyError(t)

    @property
    def final_fraction(self) -> float:
        return self.alive_series[-1]


@lru_cache(maxsize=16)
def _ring_bits(geom: RingGeometry) -> tuple[tuple[int, int], ...]:
    out = []
    for k in range(geom.ring_count):
        bits = GridState.from_array(geom.labels == k)._bits
        out.append((bits, geom.ring_size(k)))
    return tuple(out)


def run_trial(initial: GridState, cfg: SimConfig = SimConfig(), seed_used: int | None = None) -> TrialRecord:
    """Step ``initial`` until it reaches a fixed point or ``cfg.max_steps`` steps.

    A fixed point at step t means state(t) == state(t+1); the loop records
    state(t+1) and stops, so a converged record holds t + 2 samples.
    """
    rings = None
    if cfg.record_rings is not None:
        side = cfg.record_rings.side
        if initial.shape != (side, side):
            raise GeometryMismatch(f"grid {initial.shape} does not match ring geometry side {side}")
        rings = _ring_bits(cfg.record_rings)

    total = initial.width * initial.height
    alive: list[float] = []
    per_ring: list[list[float]] | None = [[] for _ in rings] if rings else None
    wanted = set(cfg.snapshot_steps)
    snaps: dict[int, GridState] = {}

    def metrics(g: GridState) -> tuple[float, tuple[float, ...]]:
        ring_vals = ()
        if rings:
            ring_vals = tuple((g._bits & bits).bit_count() / size for bits, size in rings)
        return g.alive_count / total, ring_vals

    def record(t: int, g: GridState, m=None) -> None:
        frac, ring_vals = m if m is not None else metrics(g)
        alive.append(frac)
        if per_ring is not None:
            for k, v in enumerate(ring_vals):
                per_ring[k].append(v)
        if t in wanted:
            snaps[t] = g

    converged = False
    conv_step = None
    cycle_period = None
    detect = cfg.fast_forward or cfg.cycle_max_period is not None
    seen: dict[int, int] = {}

    cur = initial
    t = 0
    record(0, cur)
    if detect:
        seen[hash(cur._bits)] = 0
    while t < cfg.max_steps:
        nxt = step(cur, cfg.boundary)
        if nxt._bits == cur._bits:
            converged, conv_step = True, t
            record(t + 1, nxt)
            # A fixed point persists, so later snapshots are this same grid.
            for st in wanted:
                if st > t + 1:
                    snaps[st] = nxt
            break
        t += 1
        cur = nxt
        record(t, cur)
        if not detect or cycle_period is not None:
            continue
        key = hash(cur._bits)
        if key not in seen:
            seen[key] = t
            continue
        period = t - seen[key]
        if cfg.cycle_max_period is not None and period > cfg.cycle_max_period:
            continue
        cycle = [cur]
        g = cur
        for _ in range(period):
            g = step(g, cfg.boundary)
            cycle.append(g)
        if cycle[-1]._bits != cur._bits:
            continue  # hash collision; keep simulating
        cycle_period = period
        if not cfg.fast_forward:
            continue
        cycle_metrics = [metrics(c) for c in cycle[:period]]
        for tt in range(t + 1, cfg.max_steps + 1):
            i = (tt - t) % period
            record(tt, cycle[i], cycle_metrics[i])
        break

    return TrialRecord(
        converged=converged,
        convergence_step=conv_step,
        alive_series=tuple(alive),
        ring_series=tuple(tuple(s) for s in per_ring) if per_ring is not None else None,
        snapshots=tuple(sorted(snaps.items())),
        seed_used=seed_used,
        cycle_period=cycle_period,
    )
