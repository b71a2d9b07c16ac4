import json
import subprocess
import sys

import pytest

from lifecity import GridState, parse_pattern
from lifecity.cli import execute


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [row.split(",") for row in lines[1:]]


def test_run_writes_csv_and_snapshot(tmp_path, capsys):
    csv, pgm = tmp_path / "t.csv", tmp_path / "s.pgm"
    code = execute(
        ["run", "--width", "30", "--height", "20", "--p", "0.4", "--steps", "50", "--seed", "5",
         "--out-csv", str(csv), "--snapshot-at", "10", "--out-pgm", str(pgm), "--scale", "2"]
    )
    assert code == 0
    assert "seed: 5" in capsys.readouterr().err
    header, rows = read_csv(csv)
    assert header == ["t", "alive_fraction"]
    assert [int(r[0]) for r in rows] == list(range(len(rows)))
    assert pgm.read_bytes().startswith(b"P5\n60 40\n255\n")


def test_run_high_density_converges_quickly(tmp_path):
    csv = tmp_path / "t.csv"
    assert execute(["run", "--width", "100", "--height", "100", "--p", "0.85", "--seed", "1", "--out-csv", str(csv)]) == 0
    _, rows = read_csv(csv)
    # Converged runs end with state(t) and state(t+1) equal, so last two rows match.
    assert len(rows) <= 12
    assert rows[-1][1] == rows[-2][1]


def test_run_boundary_flag(tmp_path):
    csv = tmp_path / "t.csv"
    assert execute(["run", "--width", "8", "--height", "8", "--p", "1", "--boundary", "torus",
                    "--seed", "0", "--out-csv", str(csv)]) == 0
    _, rows = read_csv(csv)
    # A full torus has 8 neighbours everywhere and dies in one step.
    assert [r[1] for r in rows] == ["1.000000", "0.000000", "0.000000"]


def test_sweep_is_byte_identical(tmp_path):
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    assert execute(["sweep", "--seed", "7", "--out-json", str(a)]) == 0
    assert execute(["sweep", "--seed", "7", "--out-json", str(b)]) == 0
    assert execute(["sweep", "--seed", "7", "--workers", "3", "--out-json", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    data = json.loads(a.read_text())
    assert len(data["entries"]) == 10 and data["entries"][-1]["mean_convergence_steps"] == 2.0
    assert all(e["trials"] == 15 for e in data["entries"])


def test_sweep_custom_grid(tmp_path):
    out = tmp_path / "s.json"
    assert execute(["sweep", "--width", "6", "--height", "8", "--p-min", "0.5", "--p-max", "0.9",
                    "--p-step", "0.2", "--trials", "2", "--steps", "20", "--seed", "1", "--out-json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [e["p"] for e in data["entries"]] == [0.5, 0.7, 0.9]
    assert (data["width"], data["height"], data["max_steps"]) == (6, 8, 20)


def test_rings_outputs(tmp_path):
    csv, pgm = tmp_path / "r.csv", tmp_path / "r.pgm"
    assert execute(["rings", "--outer-n", "5", "--inner-m", "4", "--probs", "0.9,0.5,0.2", "--steps", "30",
                    "--seed", "3", "--out-csv", str(csv), "--out-pgm-final", str(pgm)]) == 0
    header, rows = read_csv(csv)
    assert header == ["t", "alive_fraction", "ring_0", "ring_1", "ring_2"]
    assert pgm.read_bytes().startswith(b"P5\n20 20\n255\n")


def test_rings_schedule_mismatch(tmp_path, capsys):
    code = execute(["rings", "--outer-n", "11", "--probs", "0.9,0.8", "--seed", "1", "--out-csv", str(tmp_path / "r.csv")])
    assert code == 2
    err = capsys.readouterr().err
    assert "ScheduleLengthMismatch" in err and "6 rings" in err
    assert not (tmp_path / "r.csv").exists()


def test_render(tmp_path):
    src, out = tmp_path / "g.txt", tmp_path / "g.pgm"
    src.write_text("!glider\n.O.\n..O\nOOO\n")
    assert execute(["render", "--in-pattern", str(src), "--out-pgm", str(out), "--scale", "3"]) == 0
    data = out.read_bytes()
    assert data.startswith(b"P5\n9 9\n255\n") and len(data) == len(b"P5\n9 9\n255\n") + 81


def test_render_bad_pattern(tmp_path):
    src = tmp_path / "bad.txt"
    src.write_text("OX\n")
    assert execute(["render", "--in-pattern", str(src), "--out-pgm", str(tmp_path / "o.pgm")]) == 2
    assert execute(["render", "--in-pattern", str(tmp_path / "missing.txt"), "--out-pgm", str(tmp_path / "o.pgm")]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["run", "--width", "10"],
        ["run", "--width", "x", "--height", "3", "--p", "0.5", "--out-csv", "t.csv"],
        ["sweep", "--out-json", "s.json", "--frobnicate"],
        ["rings", "--probs", "a,b", "--out-csv", "r.csv"],
        ["run", "--width", "3", "--height", "3", "--p", "0.5", "--out-csv", "t.csv", "--boundary", "klein"],
        ["run", "--width", "3", "--height", "3", "--p", "0.5", "--out-csv", "t.csv", "--snapshot-at", "3"],
    ],
)
def test_usage_errors_exit_1(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert execute(argv) == 1
    assert "error" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_domain_error_exit_2(tmp_path):
    assert execute(["run", "--width", "3", "--height", "3", "--p", "1.5", "--seed", "1",
                    "--out-csv", str(tmp_path / "t.csv")]) == 2


def test_seed_is_chosen_and_echoed(tmp_path, capsys):
    assert execute(["run", "--width", "5", "--height", "5", "--p", "0.5", "--steps", "5",
                    "--out-csv", str(tmp_path / "t.csv")]) == 0
    line = [l for l in capsys.readouterr().err.splitlines() if l.startswith("seed: ")][0]
    seed = int(line.split()[1])
    assert execute(["run", "--width", "5", "--height", "5", "--p", "0.5", "--steps", "5", "--seed", str(seed),
                    "--out-csv", str(tmp_path / "u.csv")]) == 0
    assert (tmp_path / "t.csv").read_bytes() == (tmp_path / "u.csv").read_bytes()


def test_module_entry_point(tmp_path):
    out = tmp_path / "t.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "lifecity", "run", "--width", "4", "--height", "4", "--p", "0",
         "--seed", "2", "--out-csv", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_text() == "t,alive_fraction\n0,0.000000\n1,0.000000\n"
    proc = subprocess.run([sys.executable, "-m", "lifecity", "nope"], capture_output=True, text=True)
    assert proc.returncode == 1 and "usage" in proc.stderr
