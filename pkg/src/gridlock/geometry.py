"""Fixed geometry of the authentication grid.

The grid is 5 rows by 9 columns (45 cells). A window is a run of 4
consecutive cells in a straight line, read in canonical direction:

* H:  left to right
* V:  top to bottom
* DR: top-left to bottom-right
* DL: top-right to bottom-left (row always increases)

Windows never wrap around an edge. On a 5x9 rectangle that yields
30 + 18 + 12 + 12 = 72 windows.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

ROWS = 5
COLS = 9
CELLS = ROWS * COLS
WINDOW_LEN = 4

WINDOW_KINDS = ("H", "V", "DR", "DL")

# (drow, dcol) step per kind, canonical direction.
_KIND_STEPS = {"H": (0, 1), "V": (1, 0), "DR": (1, 1), "DL": (1, -1)}


@dataclass(frozen=True)
class GridGeometry:
    rows: int = ROWS
    cols: int = COLS
    cells: int = CELLS
    window_len: int = WINDOW_LEN


GEOMETRY = GridGeometry()


class Window(NamedTuple):
    """One alignment window: its kind, start cell, and covered cells."""

    kind: str
    start: tuple[int, int]
    cells: tuple[tuple[int, int], ...]


def _window_at(kind: str, row: int, col: int) -> Window:
    dr, dc = _KIND_STEPS[kind]
    cells = tuple((row + k * dr, col + k * dc) for k in range(WINDOW_LEN))
    return Window(kind, (row, col), cells)


def enumerate_windows() -> list[Window]:
    """All 72 windows, H then V then DR then DL, starts in row-major order."""
    wins: list[Window] = []
    for r in range(ROWS):
        for c in range(COLS - WINDOW_LEN + 1):
            wins.append(_window_at("H", r, c))
    for r in range(ROWS - WINDOW_LEN + 1):
        for c in range(COLS):
            wins.append(_window_at("V", r, c))
    for r in range(ROWS - WINDOW_LEN + 1):
        for c in range(COLS - WINDOW_LEN + 1):
            wins.append(_window_at("DR", r, c))
    for r in range(ROWS - WINDOW_LEN + 1):
        for c in range(WINDOW_LEN - 1, COLS):
            wins.append(_window_at("DL", r, c))
    return wins


WINDOWS: tuple[Window, ...] = tuple(enumerate_windows())

# Flat cell indices per window, shape (72, 4); shared by both kernel backends.
WINDOW_CELL_INDEX = np.array(
    [[r * COLS + c for (r, c) in w.cells] for w in WINDOWS], dtype=np.int32
)

WINDOW_COUNT = len(WINDOWS)


def horizontal_windows() -> list[Window]:
    """The 30 horizontal windows, the solver's target set."""
    return [w for w in WINDOWS if w.kind == "H"]
