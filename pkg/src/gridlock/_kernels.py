"""Hot-loop kernels over integer-coded grids.

A grid travels through these functions as a length-45 ``int32`` array of
cell codes (indices into the account's sorted image list); callers own the
token-to-code mapping. Moves are ``(axis, index, delta)`` rows where axis
0 is a row shift and 1 is a column shift.

Two interchangeable backends implement the same contracts:

* ``numba``: the loop functions below compiled with ``@njit(cache=True)``,
  used when numba imports cleanly. The functions are decorated in place at
  module level so the on-disk cache can rebuild them by module name.
* ``numpy``: vectorised fallback, always available, never touches numba.

Set ``GRIDLOCK_NUMBA=0`` to force the numpy path. ``BACKENDS`` exposes
every built backend so tests and benchmarks can compare them directly.
"""

import os

import numpy as np

from .geometry import COLS, ROWS, WINDOW_CELL_INDEX, WINDOW_LEN

# Worst case for the constructive solver: per tile one parking step,
# four row steps, two column steps.
SOLVER_MOVE_CAP = 4 * (1 + COLS // 2 + ROWS // 2)


def _env_allows_numba() -> bool:
    return os.environ.get("GRIDLOCK_NUMBA", "").strip().lower() not in (
        "0",
        "false",
        "no",
        "off",
    )


# ---------------------------------------------------------------------------
# Loop kernels. Written in njit-compatible style; when numba is active these
# exact module-level functions are rebound to their compiled dispatchers.
# ---------------------------------------------------------------------------


def _shift_row_inplace(cells, row, delta):
    base = row * COLS
    tmp = cells[base : base + COLS].copy()
    for c in range(COLS):
        cells[base + (c + delta) % COLS] = tmp[c]


def _shift_col_inplace(cells, col, delta):
    tmp = np.empty(ROWS, dtype=cells.dtype)
    for r in range(ROWS):
        tmp[r] = cells[r * COLS + col]
    for r in range(ROWS):
        cells[((r + delta) % ROWS) * COLS + col] = tmp[r]


def _apply_move_loop(cells, axis, index, delta):
    out = cells.copy()
    if axis == 0:
        _shift_row_inplace(out, index, delta)
    else:
        _shift_col_inplace(out, index, delta)
    return out


def _replay_loop(cells, moves):
    out = cells.copy()
    for k in range(moves.shape[0]):
        if moves[k, 0] == 0:
            _shift_row_inplace(out, moves[k, 1], moves[k, 2])
        else:
            _shift_col_inplace(out, moves[k, 1], moves[k, 2])
    return out


def _is_aligned_loop(cells, secret, window_cells):
    for w in range(window_cells.shape[0]):
        hit = True
        for k in range(WINDOW_LEN):
            if cells[window_cells[w, k]] != secret[k]:
                hit = False
                break
        if hit:
            return True
    return False


def _window_tuples_loop(cells, window_cells):
    out = np.empty((window_cells.shape[0], WINDOW_LEN), dtype=cells.dtype)
    for w in range(window_cells.shape[0]):
        for k in range(WINDOW_LEN):
            out[w, k] = cells[window_cells[w, k]]
    return out


def _solve_window_loop(cells, secret, trow, tcol, out):
    """Place secret[i] at (trow, tcol+i) left to right, emitting primitive moves.

    Earlier placements sit in target-row cells at columns < tcol+i; the
    routine only ever shifts non-target rows and columns >= tcol+i, so they
    are never disturbed. Returns the number of moves written to ``out``.
    """
    g = cells.copy()
    n = 0
    for i in range(WINDOW_LEN):
        v = secret[i]
        tc = tcol + i
        pos = 0
        for j in range(g.shape[0]):
            if g[j] == v:
                pos = j
                break
        r = pos // COLS
        c = pos % COLS
        if r == trow and c == tc:
            continue
        if c != tc:
            if r == trow:
                # Park one step down, off the target row. Column c holds no
                # placed tile: those sit on the target row at columns < tc,
                # and (trow, c) is occupied by v itself.
                _shift_col_inplace(g, c, 1)
                out[n, 0] = 1
                out[n, 1] = c
                out[n, 2] = 1
                n += 1
                r = (r + 1) % ROWS
            d = (tc - c) % COLS
            if d > COLS // 2:
                step = -1
                count = COLS - d
            else:
                step = 1
                count = d
            for _ in range(count):
                _shift_row_inplace(g, r, step)
                out[n, 0] = 0
                out[n, 1] = r
                out[n, 2] = step
                n += 1
        d = (trow - r) % ROWS
        if d > ROWS // 2:
            step = -1
            count = ROWS - d
        else:
            step = 1
            count = d
        for _ in range(count):
            _shift_col_inplace(g, tc, step)
            out[n, 0] = 1
            out[n, 1] = tc
            out[n, 2] = step
            n += 1
    return n


# ---------------------------------------------------------------------------
# Backend assembly.
# ---------------------------------------------------------------------------


def _build_numpy_backend() -> dict:
    def apply_move(cells, axis, index, delta):
        g = cells.reshape(ROWS, COLS).copy()
        if axis == 0:
            g[index] = np.roll(g[index], delta)
        else:
            g[:, index] = np.roll(g[:, index], delta)
        return g.reshape(-1)

    def replay(cells, moves):
        out = cells
        for axis, index, delta in moves:
            out = apply_move(out, axis, index, delta)
        return out

    def is_aligned(cells, secret):
        return bool((cells[WINDOW_CELL_INDEX] == secret).all(axis=1).any())

    def window_tuples(cells):
        return cells[WINDOW_CELL_INDEX]

    def solve_window(cells, secret, trow, tcol):
        # Same placement order and step choices as _solve_window_loop; the
        # cross-backend equivalence tests pin the two together move for move.
        g = cells.copy()
        moves: list[tuple[int, int, int]] = []

        def push(axis, index, delta):
            nonlocal g
            g = apply_move(g, axis, index, delta)
            moves.append((axis, index, delta))

        for i in range(WINDOW_LEN):
            tc = tcol + i
            pos = int(np.nonzero(g == secret[i])[0][0])
            r, c = divmod(pos, COLS)
            if r == trow and c == tc:
                continue
            if c != tc:
                if r == trow:
                    push(1, c, 1)
                    r = (r + 1) % ROWS
                d = (tc - c) % COLS
                step, count = (-1, COLS - d) if d > COLS // 2 else (1, d)
                for _ in range(count):
                    push(0, r, step)
            d = (trow - r) % ROWS
            step, count = (-1, ROWS - d) if d > ROWS // 2 else (1, d)
            for _ in range(count):
                push(1, tc, step)
        return np.array(moves, dtype=np.int32).reshape(len(moves), 3)

    return {
        "apply_move": apply_move,
        "replay": replay,
        "is_aligned": is_aligned,
        "window_tuples": window_tuples,
        "solve_window": solve_window,
    }


def _build_numba_backend() -> dict | None:
    global _shift_row_inplace, _shift_col_inplace
    global _apply_move_loop, _replay_loop
    global _is_aligned_loop, _window_tuples_loop, _solve_window_loop
    try:
        from numba import njit
    except ImportError:
        return None

    jit = njit(cache=True)
    # Rebind in dependency order: outer loops resolve the helpers through
    # module globals at compile time, so these must already be dispatchers.
    _shift_row_inplace = jit(_shift_row_inplace)
    _shift_col_inplace = jit(_shift_col_inplace)
    _apply_move_loop = jit(_apply_move_loop)
    _replay_loop = jit(_replay_loop)
    _is_aligned_loop = jit(_is_aligned_loop)
    _window_tuples_loop = jit(_window_tuples_loop)
    _solve_window_loop = jit(_solve_window_loop)

    window_index = WINDOW_CELL_INDEX
    aligned_jit = _is_aligned_loop
    tuples_jit = _window_tuples_loop
    solve_jit = _solve_window_loop

    def is_aligned(cells, secret):
        return bool(aligned_jit(cells, secret, window_index))

    def window_tuples(cells):
        return tuples_jit(cells, window_index)

    def solve_window(cells, secret, trow, tcol):
        out = np.empty((SOLVER_MOVE_CAP, 3), dtype=np.int32)
        n = solve_jit(cells, secret, trow, tcol, out)
        return out[:n].copy()

    return {
        "apply_move": _apply_move_loop,
        "replay": _replay_loop,
        "is_aligned": is_aligned,
        "window_tuples": window_tuples,
        "solve_window": solve_window,
    }


BACKENDS: dict[str, dict] = {"numpy": _build_numpy_backend()}
_numba_backend = _build_numba_backend() if _env_allows_numba() else None
if _numba_backend is not None:
    BACKENDS["numba"] = _numba_backend

BACKEND = "numba" if "numba" in BACKENDS else "numpy"
_active = BACKENDS[BACKEND]

apply_move_codes = _active["apply_move"]
replay_codes = _active["replay"]
is_aligned_codes = _active["is_aligned"]
window_tuples_codes = _active["window_tuples"]
solve_window_codes = _active["solve_window"]


def warmup() -> str:
    """Run every active kernel once (triggers JIT compilation); returns backend name."""
    cells = np.arange(ROWS * COLS, dtype=np.int32)
    secret = np.array([0, 1, 2, 3], dtype=np.int32)
    moves = np.array([[0, 0, 1], [1, 0, -1]], dtype=np.int32)
    apply_move_codes(cells, 0, 0, 1)
    replay_codes(cells, moves)
    is_aligned_codes(cells, secret)
    window_tuples_codes(cells)
    solve_window_codes(cells, secret, 2, 2)
    return BACKEND
