import numpy as np
import pytest

from lifecity import GridState, grid_from_rows


def pic(text: str) -> GridState:
    """Grid from a picture of '.' and 'O' rows (whitespace-stripped)."""
    rows = [line.strip() for line in text.strip().splitlines()]
    return grid_from_rows([[ch == "O" for ch in row] for row in rows])


def random_grid(rng: np.random.Generator, width: int, height: int, p: float) -> GridState:
    return GridState.from_array(rng.random((height, width)) < p)


def translate(g: GridState, dr: int, dc: int) -> GridState:
    return GridState.from_array(np.roll(g.to_array(), (dr, dc), axis=(0, 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
