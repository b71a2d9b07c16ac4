"""Grid representation and the B3/S23 step kernel.

A :class:`GridState` stores its cells as one arbitrary-precision integer used
as a bitboard. Row ``r`` occupies bits ``r*stride .. r*stride + width - 1``
with ``stride = width + 1``; the extra column per row is a guard bit that is
always zero, so horizontal shifts of the whole board never leak cells from
one row into the next. CPython big-int operations run word-parallel over the
board, which gives SWAR-style neighbour counting without a native extension.

:func:`step_reference` is a deliberately naive per-cell loop kept as the
oracle for :func:`step`.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyGrid, EmptyMask, OutOfBounds, RaggedRows


class Boundary(enum.Enum):
    """Neighbour semantics at the grid edges."""

    DEAD = "dead"
    TOROIDAL = "torus"


class _Layout(NamedTuple):
    stride: int
    valid: int  # every real cell bit set
    col_first: int  # bit of column 0 in every row
    col_last: int  # bit of column width-1 in every row
    row_first: int  # bits of row 0
    wrap: int  # shift taking row 0 to row height-1


@lru_cache(maxsize=256)
def _layout(width: int, height: int) -> _Layout:
    stride = width + 1
    row = (1 << width) - 1
    # Repeating a bit pattern once per row: multiply by sum of 1 << (r*stride).
    rows = 0
    for r in range(height):
        rows |= 1 << (r * stride)
    return _Layout(
        stride=stride,
        valid=row * rows,
        col_first=rows,
        col_last=rows << (width - 1),
        row_first=row,
        wrap=stride * (height - 1),
    )


def _bits_from_array(cells: np.ndarray) -> int:
    height, width = cells.shape
    padded = np.zeros((height, width + 1), dtype=np.uint8)
    padded[:, :width] = cells
    return int.from_bytes(np.packbits(padded.ravel(), bitorder="little").tobytes(), "little")


def _array_from_bits(bits: int, width: int, height: int) -> np.ndarray:
    stride = width + 1
    nbits = stride * height
    raw = np.frombuffer(bits.to_bytes((nbits + 7) // 8, "little"), dtype=np.uint8)
    flat = np.unpackbits(raw, bitorder="little", count=nbits)
    return flat.reshape(height, stride)[:, :width].astype(bool)


class GridState:
    """Rectangular boolean cell matrix with value semantics.

    Instances are never mutated after construction; every operation that
    changes cells returns a new grid.
    """

    __slots__ = ("_width", "_height", "_bits")

    def __init__(self, width: int, height: int, bits: int = 0):
        if width < 1 or height < 1:
            raise EmptyGrid(f"grid must be at least 1x1, got {width}x{height}")
        self._width = int(width)
        self._height = int(height)
        self._bits = bits & _layout(self._width, self._height).valid

    @classmethod
    def empty(cls, width: int, height: int) -> GridState:
        return cls(width, height, 0)

    @classmethod
    def full(cls, width: int, height: int) -> GridState:
        return cls(width, height, _layout(width, height).valid)

    @classmethod
    def from_array(cls, cells) -> GridState:
        """Build a grid from a 2-D array-like of truthy values, indexed [row, col]."""
        arr = np.asarray(cells, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmptyGrid(f"need a non-empty 2-D array, got shape {arr.shape}")
        return cls(arr.shape[1], arr.shape[0], _bits_from_array(arr))

    @property
    def width(self) -> int:
        return self._width

    @property
    def height(self) -> int:
        return self._height

    @property
    def shape(self) -> tuple[int, int]:
        """(height, width), matching numpy's convention."""
        return (self._height, self._width)

    @property
    def alive_count(self) -> int:
        return self._bits.bit_count()

    def _check(self, row: int, col: int) -> None:
        if not (0 <= row < self._height and 0 <= col < self._width):
            raise OutOfBounds(f"({row}, {col}) outside {self._height}x{self._width} grid")

    def cell(self, row: int, col: int) -> bool:
        self._check(row, col)
        return bool((self._bits >> (row * (self._width + 1) + col)) & 1)

    def with_cell(self, row: int, col: int, alive: bool) -> GridState:
        self._check(row, col)
        bit = 1 << (row * (self._width + 1) + col)
        bits = self._bits | bit if alive else self._bits & ~bit
        return GridState(self._width, self._height, bits)

    def to_array(self) -> np.ndarray:
        return _array_from_bits(self._bits, self._width, self._height)

    def to_rows(self) -> list[list[bool]]:
        return self.to_array().tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridState):
            return NotImplemented
        return self.shape == other.shape and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._width, self._height, self._bits))

    def __repr__(self) -> str:
        return f"GridState({self._width}x{self._height}, alive={self.alive_count})"


class CellMask:
    """A set of (row, col) positions, used to restrict population metrics."""

    __slots__ = ("_rows", "_cols", "_packed")

    def __init__(self, positions: Iterable[tuple[int, int]]):
        pos = np.array(sorted(set((int(r), int(c)) for r, c in positions)), dtype=np.int64)
        pos = pos.reshape(-1, 2)
        if len(pos) and pos.min() < 0:
            raise OutOfBounds("mask positions must be non-negative")
        self._rows = pos[:, 0]
        self._cols = pos[:, 1]
        self._packed: dict[tuple[int, int], int] = {}

    @classmethod
    def from_array(cls, selected) -> CellMask:
        rows, cols = np.nonzero(np.asarray(selected, dtype=bool))
        return cls(zip(rows.tolist(), cols.tolist()))

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, pos: tuple[int, int]) -> bool:
        r, c = pos
        return bool(np.any((self._rows == r) & (self._cols == c)))

    def __iter__(self):
        return zip(self._rows.tolist(), self._cols.tolist())

    def fits(self, width: int, height: int) -> bool:
        return len(self) == 0 or (self._rows.max() < height and self._cols.max() < width)

    def packed(self, width: int, height: int) -> int:
        """Bitboard of the mask in the layout of a width x height grid."""
        key = (width, height)
        if key not in self._packed:
            if not self.fits(width, height):
                raise OutOfBounds(f"mask extends outside {height}x{width} grid")
            sel = np.zeros((height, width), dtype=bool)
            sel[self._rows, self._cols] = True
            self._packed[key] = _bits_from_array(sel)
        return self._packed[key]


def grid_from_rows(rows: Sequence[Sequence[bool]]) -> GridState:
    if len(rows) == 0 or len(rows[0]) == 0:
        raise EmptyGrid("no rows or zero-length rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(f"row {i} has length {len(row)}, expected {width}")
    return GridState.from_array([[bool(v) for v in row] for row in rows])


_OFFSETS = [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)]


def neighbor_count(g: GridState, row: int, col: int, boundary: Boundary = Boundary.DEAD) -> int:
    g._check(row, col)
    n = 0
    for dr, dc in _OFFSETS:
        r, c = row + dr, col + dc
        if boundary is Boundary.TOROIDAL:
            r %= g.height
            c %= g.width
        elif not (0 <= r < g.height and 0 <= c < g.width):
            continue
        n += g.cell(r, c)
    return n


def step(g: GridState, boundary: Boundary = Boundary.DEAD) -> GridState:
    """Advance one generation. The input grid is left untouched."""
    w, h = g.width, g.height
    lay = _layout(w, h)
    s = lay.stride
    b = g._bits

    if boundary is Boundary.TOROIDAL:
        west = (b << 1) | ((b & lay.col_last) >> (w - 1))
        east = (b >> 1) | ((b & lay.col_first) << (w - 1))
    else:
        west = b << 1
        east = b >> 1

    # Per-row sums: pair = west + east (0..2), triple = pair + centre (0..3).
    p0 = west ^ east
    p1 = west & east
    h0 = p0 ^ b
    h1 = p1 | (p0 & b)

    if boundary is Boundary.TOROIDAL:
        valid, wrap, top = lay.valid, lay.wrap, lay.row_first
        a0 = ((h0 << s) & valid) | (h0 >> wrap)
        a1 = ((h1 << s) & valid) | (h1 >> wrap)
        c0 = (h0 >> s) | ((h0 & top) << wrap)
        c1 = (h1 >> s) | ((h1 & top) << wrap)
    else:
        a0, a1 = h0 << s, h1 << s
        c0, c1 = h0 >> s, h1 >> s

    # Neighbour count = triple(above) + pair(here) + triple(below), kept mod 8.
    # Count 8 aliases to 0, which dies either way.
    ab = a0 ^ p0
    s0 = ab ^ c0
    carry = (a0 & p0) | (c0 & ab)
    x = a1 ^ p1
    y = c1 ^ carry
    s1 = x ^ y
    s2 = (a1 & p1) ^ (c1 & carry) ^ (x & y)

    # Alive next iff count == 3, or count == 2 and alive now.
    return GridState(w, h, s1 & ~s2 & (s0 | b) & lay.valid)


def step_reference(g: GridState, boundary: Boundary = Boundary.DEAD) -> GridState:
    """Per-cell implementation of :func:`step`, used only as a test oracle."""
    cur = g.to_rows()
    nxt = [[False] * g.width for _ in range(g.height)]
    for r in range(g.height):
        for c in range(g.width):
            n = 0
            for dr, dc in _OFFSETS:
                rr, cc = r + dr, c + dc
                if boundary is Boundary.TOROIDAL:
                    rr %= g.height
                    cc %= g.width
                elif not (0 <= rr < g.height and 0 <= cc < g.width):
                    continue
                if cur[rr][cc]:
                    n += 1
            if cur[r][c]:
                nxt[r][c] = n == 2 or n == 3
            else:
                nxt[r][c] = n == 3
    return grid_from_rows(nxt)


def grids_equal(a: GridState, b: GridState) -> bool:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare {a.shape} grid with {b.shape} grid")
    return a._bits == b._bits


def alive_fraction(g: GridState) -> float:
    return g.alive_count / (g.width * g.height)


def masked_alive_fraction(g: GridState, mask: CellMask) -> float:
    if len(mask) == 0:
        raise EmptyMask("mask selects no cells")
    return (g._bits & mask.packed(g.width, g.height)).bit_count() / len(mask)
