"""Grid model: layout, cyclic shifts, alignment testing, candidate extraction.

Cells hold opaque image tokens. A move cyclically rotates one full row or
column (content wraps, nothing falls off). A secret of 4 ordered tokens is
"entered" by manipulating rows and columns until the 4 tokens occupy some
window in canonical order; an onlooker who sees the final arrangement learns
only the 72-member candidate set, not which window was intended.

Everything here has value semantics: operations return new grids and never
mutate their inputs, so concurrent callers need no coordination.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import CardinalityError, DuplicateError, SecretError, ValidationError
from .geometry import CELLS, COLS, ROWS, WINDOW_LEN, WINDOWS, Window

ImageId = str

ROW = "row"
COL = "col"

MAX_SEED = 2**64


def _check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValidationError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed < MAX_SEED:
        raise ValidationError("seed must fit in 64 bits")
    return seed


@dataclass(frozen=True)
class Move:
    """One cyclic shift. Positive delta moves rows right and columns down."""

    axis: str
    index: int
    delta: int

    def __post_init__(self):
        if self.axis not in (ROW, COL):
            raise ValidationError(f"axis must be 'row' or 'col', got {self.axis!r}")
        limit = ROWS if self.axis == ROW else COLS
        if not isinstance(self.index, int) or not 0 <= self.index < limit:
            raise ValidationError(
                f"{self.axis} index {self.index!r} out of range 0..{limit - 1}"
            )
        if not isinstance(self.delta, int) or self.delta == 0:
            raise ValidationError("delta must be a nonzero integer")

    def inverse(self) -> "Move":
        return Move(self.axis, self.index, -self.delta)

    def as_code_row(self) -> tuple[int, int, int]:
        return (0 if self.axis == ROW else 1, self.index, self.delta)

    def to_dict(self) -> dict:
        return {"axis": self.axis, "index": self.index, "delta": self.delta}

    @classmethod
    def from_dict(cls, data: dict) -> "Move":
        try:
            return cls(data["axis"], data["index"], data["delta"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed move: {data!r}") from exc


@dataclass(frozen=True)
class Grid:
    """Row-major arrangement of 45 distinct image tokens."""

    cells: tuple[ImageId, ...]

    def __post_init__(self):
        if len(self.cells) != CELLS:
            raise CardinalityError(f"grid needs exactly {CELLS} cells, got {len(self.cells)}")
        seen = set()
        for token in self.cells:
            if not isinstance(token, str) or not token:
                raise ValidationError(f"image id must be a non-empty string, got {token!r}")
            if token in seen:
                raise DuplicateError(f"duplicate image id {token!r}")
            seen.add(token)

    @cached_property
    def image_order(self) -> tuple[ImageId, ...]:
        """Sorted tokens; the canonical code mapping shared by equal image sets."""
        return tuple(sorted(self.cells))

    @cached_property
    def codes(self) -> np.ndarray:
        index = {token: i for i, token in enumerate(self.image_order)}
        return np.fromiter((index[t] for t in self.cells), dtype=np.int32, count=CELLS)

    def encode_tokens(self, tokens: Sequence[ImageId]) -> np.ndarray:
        index = {token: i for i, token in enumerate(self.image_order)}
        try:
            return np.fromiter((index[t] for t in tokens), dtype=np.int32, count=len(tokens))
        except KeyError as exc:
            raise ValidationError(f"image id {exc.args[0]!r} not on this grid") from None

    def decode_codes(self, codes: np.ndarray) -> "Grid":
        order = self.image_order
        return Grid(tuple(order[c] for c in codes))

    def at(self, row: int, col: int) -> ImageId:
        return self.cells[row * COLS + col]

    def rows(self) -> list[tuple[ImageId, ...]]:
        return [self.cells[r * COLS : (r + 1) * COLS] for r in range(ROWS)]

    def window_tuple(self, window: Window) -> tuple[ImageId, ...]:
        return tuple(self.at(r, c) for r, c in window.cells)


def validate_image_set(image_ids: Iterable[ImageId]) -> frozenset[ImageId]:
    """Check a 45-image account set: distinct, non-empty tokens, exact count."""
    ids = list(image_ids)
    seen = set()
    for token in ids:
        if not isinstance(token, str) or not token:
            raise ValidationError(f"image id must be a non-empty string, got {token!r}")
        if token in seen:
            raise DuplicateError(f"duplicate image id {token!r}")
        seen.add(token)
    if len(ids) != CELLS:
        raise CardinalityError(f"need exactly {CELLS} distinct images, got {len(ids)}")
    return frozenset(ids)


def validate_secret(secret: Sequence[ImageId], image_ids: Iterable[ImageId]) -> tuple[ImageId, ...]:
    """Check an ordered secret: 4 distinct tokens drawn from the account set."""
    chosen = tuple(secret)
    if len(chosen) != WINDOW_LEN:
        raise SecretError(f"secret must have exactly {WINDOW_LEN} images, got {len(chosen)}")
    if len(set(chosen)) != WINDOW_LEN:
        raise SecretError("secret images must be distinct")
    pool = set(image_ids)
    for token in chosen:
        if token not in pool:
            raise SecretError(f"secret image {token!r} is not in the account's image set")
    return chosen


def shuffle_grid(image_ids: Iterable[ImageId], seed: int) -> Grid:
    """Fresh arrangement of the 45 images, Fisher-Yates over a PCG64 stream.

    Deterministic for a fixed seed: the image set is canonicalised by sorting
    before permutation, so any iteration order of ``image_ids`` yields the
    same grid.
    """
    ids = validate_image_set(image_ids)
    _check_seed(seed)
    order = sorted(ids)
    perm = np.random.default_rng(seed).permutation(CELLS)
    return Grid(tuple(order[i] for i in perm))


def apply_move(grid: Grid, move: Move) -> Grid:
    """Rotate one row or column of the grid cyclically; all other cells keep."""
    cells = list(grid.cells)
    if move.axis == ROW:
        base = move.index * COLS
        old = grid.cells[base : base + COLS]
        for c in range(COLS):
            cells[base + (c + move.delta) % COLS] = old[c]
    else:
        old = [grid.cells[r * COLS + move.index] for r in range(ROWS)]
        for r in range(ROWS):
            cells[((r + move.delta) % ROWS) * COLS + move.index] = old[r]
    return Grid(tuple(cells))


def replay_moves(grid: Grid, moves: Sequence[Move]) -> Grid:
    """Fold apply_move over a transcript; the verification primitive."""
    if not moves:
        return grid
    codes = _kernels.replay_codes(
        grid.codes, np.array([m.as_code_row() for m in moves], dtype=np.int32)
    )
    return grid.decode_codes(codes)


def is_aligned(grid: Grid, secret: Sequence[ImageId]) -> bool:
    """True iff some window reads exactly the secret, in canonical direction."""
    chosen = validate_secret(secret, grid.cells)
    return bool(_kernels.is_aligned_codes(grid.codes, grid.encode_tokens(chosen)))


def candidates(grid: Grid) -> frozenset[tuple[ImageId, ...]]:
    """All 72 ordered 4-tuples an observer of this arrangement cannot tell apart."""
    tuples = _kernels.window_tuples_codes(grid.codes)
    order = grid.image_order
    return frozenset(
        tuple(order[c] for c in tuples[w]) for w in range(tuples.shape[0])
    )


def aligned_windows(grid: Grid, secret: Sequence[ImageId]) -> list[Window]:
    """Windows currently reading the secret (usually none or one)."""
    chosen = validate_secret(secret, grid.cells)
    return [w for w in WINDOWS if grid.window_tuple(w) == chosen]
