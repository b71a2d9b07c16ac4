"""Probabilistic grid initialisation.

Random draws come from numpy's PCG64 generator. A :class:`SeedStream` hands
out float64 uniforms in [0, 1) and a cell is alive iff its uniform is
strictly below the cell's probability. Exactly one uniform is drawn per cell,
in row-major order, whatever the probability, so p=0 and p=1 are exact and
two seedings from the same seed stay aligned cell for cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidConfig, InvalidProbability, OutOfBounds, RingOutOfRange, ScheduleLengthMismatch
from .grid import CellMask, GridState

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

TAG_SWEEP = 1
TAG_TRAJECTORY = 2
TAG_RINGS = 3


def splitmix64_finalize(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_trial_seed(base: int, experiment_tag: int, p_index: int, trial_index: int) -> int:
    """Per-trial 64-bit seed, independent of the order trials are evaluated in.

    ``base`` is XORed with a golden-ratio multiple of a counter built from the
    tag and indices, then passed through the SplitMix64 finalizer.
    """
    counter = experiment_tag * (1 << 32) + p_index * 1000003 + trial_index + 1
    mix = (base & MASK64) ^ ((GOLDEN_GAMMA * counter) & MASK64)
    return splitmix64_finalize(mix)


class SeedStream:
    """Single-consumer deterministic stream of uniforms, keyed by a 64-bit seed."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, shape) -> np.ndarray:
        return self._rng.random(shape)


def _check_probability(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise InvalidProbability(f"probability {p!r} outside [0, 1]")


def bernoulli_seed(width: int, height: int, p: float, stream: SeedStream) -> GridState:
    _check_probability(p)
    if width < 1 or height < 1:
        raise InvalidConfig(f"grid dimensions must be >= 1, got {width}x{height}")
    return GridState.from_array(stream.uniform((height, width)) < p)


def ring_index(outer_row: int, outer_col: int, outer_n: int) -> int:
    """Chebyshev distance of an outer cell from the centre outer cell."""
    if not (0 <= outer_row < outer_n and 0 <= outer_col < outer_n):
        raise OutOfBounds(f"outer cell ({outer_row}, {outer_col}) outside {outer_n}x{outer_n}")
    c = (outer_n - 1) // 2
    return max(abs(outer_row - c), abs(outer_col - c))


@dataclass(frozen=True)
class RingGeometry:
    """An outer_n x outer_n lattice of inner_m x inner_m blocks.

    The lattice only decides which ring each cell belongs to; the simulated
    grid is a single contiguous square of side ``outer_n * inner_m``.
    """

    outer_n: int = 11
    inner_m: int | None = None

    def __post_init__(self):
        if self.outer_n < 3 or self.outer_n % 2 == 0:
            raise InvalidConfig(f"outer_n must be odd and >= 3, got {self.outer_n}")
        if self.inner_m is None:
            object.__setattr__(self, "inner_m", self.outer_n - 1)
        if self.inner_m < 1:
            raise InvalidConfig(f"inner_m must be >= 1, got {self.inner_m}")

    @property
    def side(self) -> int:
        return self.outer_n * self.inner_m

    @property
    def ring_count(self) -> int:
        return (self.outer_n - 1) // 2 + 1

    @cached_property
    def labels(self) -> np.ndarray:
        """Ring id of every cell of the full grid, shape (side, side)."""
        idx = np.arange(self.outer_n)
        c = (self.outer_n - 1) // 2
        outer = np.maximum(np.abs(idx[:, None] - c), np.abs(idx[None, :] - c))
        return np.repeat(np.repeat(outer, self.inner_m, axis=0), self.inner_m, axis=1)

    def ring_size(self, k: int) -> int:
        return self.inner_m**2 if k == 0 else 8 * k * self.inner_m**2


@dataclass(frozen=True)
class RingSchedule:
    """Initial aliveness probability per ring, centre ring first."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        for p in self.probs:
            _check_probability(p)

    def check(self, geom: RingGeometry) -> None:
        if len(self.probs) != geom.ring_count:
            raise ScheduleLengthMismatch(
                f"schedule has {len(self.probs)} probabilities but geometry "
                f"outer_n={geom.outer_n} has {geom.ring_count} rings"
            )


# Six rings for outer_n=11; the centre ring repeats the densest listed value.
DEFAULT_SCHEDULE = RingSchedule((0.9, 0.9, 0.8, 0.6, 0.4, 0.2))


def ring_mask(geom: RingGeometry, k: int) -> CellMask:
    if not (0 <= k < geom.ring_count):
        raise RingOutOfRange(f"ring {k} not in [0, {geom.ring_count})")
    return CellMask.from_array(geom.labels == k)


def ring_seed(geom: RingGeometry, sched: RingSchedule, stream: SeedStream) -> GridState:
    sched.check(geom)
    probs = np.asarray(sched.probs)[geom.labels]
    return GridState.from_array(stream.uniform((geom.side, geom.side)) < probs)
