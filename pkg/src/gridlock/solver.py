"""Constructive alignment solver, the engine behind every simulated user.

Strategy: pick a horizontal target window, then place the secret images left
to right. Each image is parked off the target row if needed, row-shifted to
its target column, and column-shifted up into the target row. Column shifts
of the current target column never touch earlier placements (they sit in
strictly smaller columns of the target row), so progress is monotone and the
move count is bounded by 28 primitives, far inside the 100-move budget.
"""

from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ValidationError
from .geometry import Window, horizontal_windows
from .grid import COL, ROW, Grid, ImageId, Move, is_aligned, validate_secret

MOVE_BUDGET = 100

# Middle-of-grid default keeps typical shift distances short.
DEFAULT_WINDOW_START = (2, 2)


def _codes_to_moves(rows: np.ndarray) -> list[Move]:
    return [
        Move(ROW if int(axis) == 0 else COL, int(index), int(delta))
        for axis, index, delta in rows
    ]


def solve_alignment(
    grid: Grid, secret: Sequence[ImageId], window: Window | None = None
) -> list[Move]:
    """Primitive moves that bring ``grid`` into alignment with ``secret``.

    With no explicit window the solver returns an empty list when the grid is
    already aligned anywhere, otherwise it targets the fixed default window.
    An explicit window must be horizontal and is honoured even if the grid is
    aligned elsewhere.
    """
    chosen = validate_secret(secret, grid.cells)
    if window is None:
        if is_aligned(grid, chosen):
            return []
        trow, tcol = DEFAULT_WINDOW_START
    else:
        if window.kind != "H":
            raise ValidationError("solver targets horizontal windows only")
        trow, tcol = window.start
    moves = _kernels.solve_window_codes(
        grid.codes, grid.encode_tokens(chosen), trow, tcol
    )
    assert len(moves) <= MOVE_BUDGET
    return _codes_to_moves(moves)


def random_horizontal_window(rng: np.random.Generator) -> Window:
    """Uniform choice among the 30 horizontal windows, simulating user whim."""
    wins = horizontal_windows()
    return wins[int(rng.integers(0, len(wins)))]
