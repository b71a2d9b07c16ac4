"""Text and image formats: '.O' patterns, CSV series, JSON sweeps, binary PGM."""

from __future__ import annotations

import json

import numpy as np

from .errors import EmptyPattern, IllegalCharacter, InvalidScale, RaggedRows
from .experiments import SweepSummary
from .grid import GridState
from .runner import TrialRecord


def parse_pattern(text: str) -> GridState:
    """Parse plaintext rows of '.' (dead) and 'O' (alive).

    Lines starting with '!' are comments. A single trailing newline is allowed.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rows = []
    for lineno, line in enumerate(lines, 1):
        if line.startswith("!"):
            continue
        bad = set(line) - {".", "O"}
        if bad:
            raise IllegalCharacter(f"line {lineno}: {sorted(bad)[0]!r}")
        rows.append([ch == "O" for ch in line])
    if not rows or not any(rows):
        raise EmptyPattern("pattern has no cell rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(f"pattern row {i} has length {len(row)}, expected {width}")
    return GridState.from_array(rows)


def write_pattern(g: GridState) -> str:
    return "\n".join("".join("O" if v else "." for v in row) for row in g.to_rows())


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def export_timeseries_csv(rec: TrialRecord) -> str:
    header = ["t", "alive_fraction"]
    rings = rec.ring_series or ()
    header += [f"ring_{k}" for k in range(len(rings))]
    out = [",".join(header)]
    for t, frac in enumerate(rec.alive_series):
        out.append(",".join([str(t), _fmt(frac), *(_fmt(s[t]) for s in rings)]))
    return "\n".join(out) + "\n"


def sweep_to_dict(s: SweepSummary) -> dict:
    spec = s.spec
    return {
        "width": spec.width,
        "height": spec.height,
        "base_seed": spec.base_seed,
        "max_steps": spec.cfg.max_steps,
        "boundary": spec.cfg.boundary.value,
        "trials_per_p": spec.trials_per_p,
        "entries": [
            {
                "p": e.p,
                "trials": e.trial_count,
                "converged": e.converged_count,
                "mean_convergence_steps": e.mean_convergence_steps,
                "trial_results": [
                    {"seed": o.seed, "converged": o.converged, "convergence_step": o.convergence_step}
                    for o in e.outcomes
                ],
            }
            for e in s.entries
        ],
    }


def export_sweep_json(s: SweepSummary) -> str:
    return json.dumps(sweep_to_dict(s), sort_keys=True, indent=2) + "\n"


def render_pgm(g: GridState, scale: int = 1) -> bytes:
    """Binary P5 greymap; alive cells black (0), dead cells white (255)."""
    if not isinstance(scale, (int, np.integer)) or scale < 1:
        raise InvalidScale(f"scale must be an integer >= 1, got {scale!r}")
    pix = np.where(g.to_array(), 0, 255).astype(np.uint8)
    if scale > 1:
        pix = np.repeat(np.repeat(pix, scale, axis=0), scale, axis=1)
    header = f"P5\n{g.width * scale} {g.height * scale}\n255\n".encode("ascii")
    return header + pix.tobytes()
