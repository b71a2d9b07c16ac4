import json

import numpy as np
import pytest

from lifecity import (
    GridState,
    RingGeometry,
    SimConfig,
    SweepSpec,
    convergence_sweep,
    export_sweep_json,
    export_timeseries_csv,
    parse_pattern,
    render_pgm,
    ring_experiment,
    run_trial,
    trajectory_run,
    write_pattern,
)
from lifecity.errors import EmptyPattern, IllegalCharacter, InvalidScale, RaggedRows

from conftest import random_grid


def test_parse_blinker():
    g = parse_pattern(".O.\n.O.\n.O.")
    assert g.shape == (3, 3) and g.alive_count == 3
    assert [g.cell(r, 1) for r in range(3)] == [True] * 3


def test_parse_comments_and_trailing_newline():
    g = parse_pattern("!Name: block\n!\nOO\nOO\n")
    assert g == GridState.full(2, 2)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("", EmptyPattern),
        ("!only a comment\n", EmptyPattern),
        ("OO\nO", RaggedRows),
        ("OO\n\nOO", RaggedRows),
        ("O*\n..", IllegalCharacter),
        ("OO\r\nOO", IllegalCharacter),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_pattern(text)


def test_write_pattern():
    assert write_pattern(GridState.full(1, 1)) == "O"
    assert write_pattern(GridState.full(2, 2)) == "OO\nOO"
    assert write_pattern(GridState.empty(3, 1)) == "..."


def test_pattern_round_trip(rng):
    for _ in range(200):
        w, h = rng.integers(1, 40, size=2)
        g = random_grid(rng, int(w), int(h), rng.random())
        assert parse_pattern(write_pattern(g)) == g


def test_csv_all_dead():
    rec = run_trial(GridState.empty(10, 10))
    assert export_timeseries_csv(rec) == "t,alive_fraction\n0,0.000000\n1,0.000000\n"


def test_csv_ring_columns():
    rec = ring_experiment(cfg=SimConfig(max_steps=3), base_seed=2).trial
    text = export_timeseries_csv(rec)
    lines = text.split("\n")
    assert lines[0] == "t,alive_fraction,ring_0,ring_1,ring_2,ring_3,ring_4,ring_5"
    assert text.endswith("\n") and "\r" not in text
    rows = lines[1:-1]
    assert len(rows) == len(rec.alive_series)
    for t, row in enumerate(rows):
        fields = row.split(",")
        assert int(fields[0]) == t
        assert all(len(f.split(".")[1]) == 6 for f in fields[1:])
        assert float(fields[1]) == pytest.approx(rec.alive_series[t], abs=5e-7)


def test_csv_is_deterministic():
    a = trajectory_run((20, 20), 0.4, SimConfig(max_steps=50), base_seed=3)
    b = trajectory_run((20, 20), 0.4, SimConfig(max_steps=50), base_seed=3)
    assert export_timeseries_csv(a).encode() == export_timeseries_csv(b).encode()


def test_sweep_json_contents():
    spec = SweepSpec(probabilities=(0.5, 1.0), trials_per_p=3, cfg=SimConfig(max_steps=0), base_seed=1)
    data = json.loads(export_sweep_json(convergence_sweep(spec)))
    assert [e["p"] for e in data["entries"]] == [0.5, 1.0]
    for e in data["entries"]:
        assert e["trials"] == 3 and e["converged"] == 0
        assert e["mean_convergence_steps"] is None
        assert len(e["trial_results"]) == 3
        assert set(e["trial_results"][0]) == {"seed", "converged", "convergence_step"}


def test_sweep_json_exact_mean():
    s = convergence_sweep(SweepSpec(probabilities=(1.0,), base_seed=4))
    text = export_sweep_json(s)
    data = json.loads(text)
    assert data["entries"][0]["mean_convergence_steps"] == 2.0
    assert [r["seed"] for r in data["entries"][0]["trial_results"]] == [o.seed for o in s.entries[0].outcomes]
    assert text == json.dumps(data, sort_keys=True, indent=2) + "\n"
    assert text == export_sweep_json(convergence_sweep(SweepSpec(probabilities=(1.0,), base_seed=4)))


def test_pgm_block():
    assert render_pgm(GridState.full(2, 2), 1) == b"P5\n2 2\n255\n" + bytes(4)


def test_pgm_scaled_dead():
    data = render_pgm(GridState.empty(3, 3), 2)
    header = b"P5\n6 6\n255\n"
    assert data.startswith(header)
    assert data[len(header):] == b"\xff" * 36


def test_pgm_pixel_layout(rng):
    g = random_grid(rng, 7, 5, 0.5)
    scale = 3
    data = render_pgm(g, scale)
    header = f"P5\n{7 * scale} {5 * scale}\n255\n".encode()
    pix = np.frombuffer(data[len(header):], dtype=np.uint8)
    assert pix.size == 7 * 5 * scale**2
    img = pix.reshape(5 * scale, 7 * scale)
    for r in range(5):
        for c in range(7):
            block = img[r * scale : (r + 1) * scale, c * scale : (c + 1) * scale]
            assert np.all(block == (0 if g.cell(r, c) else 255))


@pytest.mark.parametrize("scale", [0, -1, 1.5])
def test_pgm_invalid_scale(scale):
    with pytest.raises(InvalidScale):
        render_pgm(GridState.empty(2, 2), scale)
