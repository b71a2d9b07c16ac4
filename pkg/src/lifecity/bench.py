"""Kernel benchmark: packed step vs. per-cell reference.

The reference needs several seconds per step on a 1024x1024 board, so it is
timed over ``reference_steps`` steps and extrapolated linearly to ``steps``
(its cost per step does not depend on the board contents).

Run with ``python -m lifecity.bench``.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from .grid import Boundary, step, step_reference
from .seeding import SeedStream, bernoulli_seed


@dataclass(frozen=True)
class BenchResult:
    size: int
    steps: int
    packed_seconds: float
    reference_seconds_per_step: float

    @property
    def reference_seconds(self) -> float:
        return self.reference_seconds_per_step * self.steps

    @property
    def speedup(self) -> float:
        return self.reference_seconds / self.packed_seconds


def run_benchmark(
    size: int = 1024,
    steps: int = 1000,
    reference_steps: int = 1,
    p: float = 0.3,
    seed: int = 1,
    boundary: Boundary = Boundary.TOROIDAL,
) -> BenchResult:
    grid = bernoulli_seed(size, size, p, SeedStream(seed))

    g = grid
    t0 = time.perf_counter()
    for _ in range(steps):
        g = step(g, boundary)
    packed = time.perf_counter() - t0

    g = grid
    t0 = time.perf_counter()
    for _ in range(reference_steps):
        g = step_reference(g, boundary)
    ref = (time.perf_counter() - t0) / reference_steps
    return BenchResult(size, steps, packed, ref)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(prog="python -m lifecity.bench")
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--reference-steps", type=int, default=1)
    args = ap.parse_args(argv)
    r = run_benchmark(args.size, args.steps, args.reference_steps)
    print(f"grid {r.size}x{r.size} toroidal, {r.steps} steps")
    print(f"packed kernel:     {r.packed_seconds:10.3f} s")
    print(f"reference (extrap): {r.reference_seconds:10.1f} s  ({r.reference_seconds_per_step:.3f} s/step)")
    print(f"speedup:           {r.speedup:10.1f}x")


if __name__ == "__main__":
    main()
