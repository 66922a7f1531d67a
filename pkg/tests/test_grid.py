import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridlock.errors import CardinalityError, DuplicateError, SecretError, ValidationError
from gridlock.geometry import CELLS, COLS, ROWS, WINDOWS
from gridlock.grid import (
    Grid,
    Move,
    apply_move,
    candidates,
    is_aligned,
    replay_moves,
    shuffle_grid,
    validate_image_set,
    validate_secret,
)

deltas = st.integers(-10, 10).filter(lambda d: d != 0)
moves_st = st.one_of(
    st.builds(Move, axis=st.just("row"), index=st.integers(0, ROWS - 1), delta=deltas),
    st.builds(Move, axis=st.just("col"), index=st.integers(0, COLS - 1), delta=deltas),
)
move_lists = st.lists(moves_st, max_size=30)


def lookup_oracle(grid, secret):
    """Alignment oracle used nowhere in the package: walk every window."""
    target = tuple(secret)
    for w in WINDOWS:
        if tuple(grid.at(r, c) for r, c in w.cells) == target:
            return True
    return False


# -- construction and validation --------------------------------------------


def test_grid_requires_45_distinct_cells(image_ids):
    with pytest.raises(CardinalityError):
        Grid(tuple(image_ids[:44]))
    with pytest.raises(DuplicateError):
        Grid(tuple(image_ids[:44]) + (image_ids[0],))
    with pytest.raises(ValidationError):
        Grid(tuple(image_ids[:44]) + ("",))


def test_validate_image_set(image_ids):
    assert len(validate_image_set(image_ids)) == CELLS
    with pytest.raises(DuplicateError):
        validate_image_set(image_ids[:44] + [image_ids[0]])
    with pytest.raises(CardinalityError):
        validate_image_set(image_ids[:10])


def test_validate_secret(image_ids):
    secret = (image_ids[0], image_ids[5], image_ids[9], image_ids[44])
    assert validate_secret(secret, image_ids) == secret
    with pytest.raises(SecretError):
        validate_secret(secret[:3], image_ids)
    with pytest.raises(SecretError):
        validate_secret((secret[0],) * 4, image_ids)
    with pytest.raises(SecretError):
        validate_secret(secret[:3] + ("stranger",), image_ids)


def test_move_validation():
    with pytest.raises(ValidationError):
        Move("diag", 0, 1)
    with pytest.raises(ValidationError):
        Move("row", 5, 1)
    with pytest.raises(ValidationError):
        Move("col", 9, 1)
    with pytest.raises(ValidationError):
        Move("row", 0, 0)
    assert Move("row", 4, -3).inverse() == Move("row", 4, 3)
    assert Move.from_dict(Move("col", 2, 7).to_dict()) == Move("col", 2, 7)


# -- shuffling ----------------------------------------------------------------


def test_shuffle_is_deterministic_permutation(image_ids):
    a = shuffle_grid(image_ids, 7)
    b = shuffle_grid(image_ids, 7)
    assert a.cells == b.cells
    assert sorted(a.cells) == sorted(image_ids)


def test_shuffle_ignores_input_order(image_ids):
    assert shuffle_grid(image_ids, 3).cells == shuffle_grid(image_ids[::-1], 3).cells


def test_shuffle_seeds_rarely_collide(image_ids):
    grids = {shuffle_grid(image_ids, s).cells for s in range(100)}
    assert len(grids) >= 99


def test_shuffle_rejects_bad_seed(image_ids):
    with pytest.raises(ValidationError):
        shuffle_grid(image_ids, -1)
    with pytest.raises(ValidationError):
        shuffle_grid(image_ids, 2**64)


# -- moves ---------------------------------------------------------------------


def test_row_shift_moves_content_right(image_ids):
    g = shuffle_grid(image_ids, 0)
    shifted = apply_move(g, Move("row", 0, 1))
    assert shifted.at(0, 1) == g.at(0, 0)
    assert shifted.at(0, 0) == g.at(0, 8)
    assert shifted.rows()[1:] == g.rows()[1:]


def test_col_shift_moves_content_down(image_ids):
    g = shuffle_grid(image_ids, 0)
    shifted = apply_move(g, Move("col", 3, 1))
    assert shifted.at(1, 3) == g.at(0, 3)
    assert shifted.at(0, 3) == g.at(4, 3)
    for c in range(COLS):
        if c != 3:
            assert [shifted.at(r, c) for r in range(ROWS)] == [
                g.at(r, c) for r in range(ROWS)
            ]


def test_full_cycle_is_identity(image_ids):
    g = shuffle_grid(image_ids, 1)
    assert apply_move(g, Move("row", 2, 9)).cells == g.cells
    assert apply_move(g, Move("col", 2, 5)).cells == g.cells


@given(seed=st.integers(0, 2**32), move=moves_st)
@settings(max_examples=100, deadline=None)
def test_move_then_inverse_is_identity(seed, move):
    g = shuffle_grid([f"i{k:02d}" for k in range(CELLS)], seed)
    assert apply_move(apply_move(g, move), move.inverse()).cells == g.cells


@given(seed=st.integers(0, 2**32), moves=move_lists)
@settings(max_examples=100, deadline=None)
def test_moves_preserve_cell_multiset(seed, moves):
    g = shuffle_grid([f"i{k:02d}" for k in range(CELLS)], seed)
    out = replay_moves(g, moves)
    assert sorted(out.cells) == sorted(g.cells)


@given(seed=st.integers(0, 2**32), moves=move_lists)
@settings(max_examples=100, deadline=None)
def test_replay_equals_sequential_application(seed, moves):
    g = shuffle_grid([f"i{k:02d}" for k in range(CELLS)], seed)
    step = g
    for m in moves:
        step = apply_move(step, m)
    assert replay_moves(g, moves).cells == step.cells


# -- alignment -----------------------------------------------------------------


def test_is_aligned_matches_lookup_oracle(image_ids):
    rng = np.random.default_rng(21)
    hits = 0
    for _ in range(500):
        g = shuffle_grid(image_ids, int(rng.integers(2**63)))
        if rng.random() < 0.5:
            w = WINDOWS[int(rng.integers(len(WINDOWS)))]
            secret = tuple(g.at(r, c) for r, c in w.cells)
        else:
            secret = tuple(
                image_ids[int(i)] for i in rng.choice(CELLS, 4, replace=False)
            )
        got = is_aligned(g, secret)
        assert got == lookup_oracle(g, secret)
        hits += got
    assert 0 < hits < 500  # both outcomes exercised


def test_alignment_is_order_sensitive(image_ids):
    g = shuffle_grid(image_ids, 4)
    secret = tuple(g.at(2, c) for c in range(2, 6))
    assert is_aligned(g, secret)
    assert not is_aligned(g, secret[::-1])


def test_candidates_are_72_window_tuples(image_ids):
    g = shuffle_grid(image_ids, 8)
    cand = candidates(g)
    assert len(cand) == 72
    assert all(len(t) == 4 for t in cand)
    for w in WINDOWS:
        assert tuple(g.at(r, c) for r, c in w.cells) in cand


def test_codes_roundtrip(image_ids):
    g = shuffle_grid(image_ids, 13)
    assert g.decode_codes(g.codes).cells == g.cells
    assert g.codes.dtype == np.int32
