"""Shoulder-surfing quantified: candidate sets, intersection attacks, effort.

The attacker model is a perfect observer: they see the issued arrangement,
every move, and the final arrangement of an accepted attempt. All that tells
them is which 72 ordered 4-tuples currently read along some window; the true
secret is one of them and can never be eliminated by watching more honest
sessions, only narrowed, because it appears in every session's candidate set.

An on-screen keyboard is the baseline: one observation leaks the whole
secret, candidate set of size 1, zero residual bits.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .authn import Account, Registration, register
from .errors import IntegrityError, ValidationError
from .geometry import CELLS, WINDOW_COUNT, WINDOW_LEN
from .grid import Grid, ImageId, Move, candidates, replay_moves
from .solver import random_horizontal_window, solve_alignment

# Ordered 4-tuples over 45 distinct images: 45*44*43*42.
SECRET_SPACE = math.perm(CELLS, WINDOW_LEN)
PRIOR_BITS = math.log2(SECRET_SPACE)

CandidateSet = frozenset[tuple[ImageId, ...]]

NOT_REACHED = "not reached"

# Registration action counts per bootstrap flow. jill is single-stage: 45
# selection taps, 4 combined secret-assignment-with-ordering taps, 1
# completion. jack splits secret selection and ordering into separate steps.
REGISTRATION_ACTIONS = {
    "jill": 45 + 4 + 1,
    "jack": 45 + 4 + 4 + 1,
}

DEFAULT_PASSWORD_BASELINE_ACTIONS = 9  # 8 keystrokes plus 1 submit


@dataclass(frozen=True)
class Observation:
    """Everything an onlooker captures from one authentication attempt."""

    initial_grid: Grid
    transcript: tuple[Move, ...]
    final_grid: Grid

    @classmethod
    def from_transcript(cls, initial: Grid, transcript: Sequence[Move]) -> "Observation":
        return cls(initial, tuple(transcript), replay_moves(initial, transcript))


def observe(observation: Observation) -> CandidateSet:
    """Candidate secrets consistent with the observed final arrangement."""
    recomputed = replay_moves(observation.initial_grid, observation.transcript)
    if recomputed.cells != observation.final_grid.cells:
        raise IntegrityError("final grid does not match transcript replay")
    return candidates(observation.final_grid)


def intersect_sessions(sets: Sequence[CandidateSet]) -> CandidateSet:
    """Consistency attack across sessions: only tuples seen every time survive."""
    if not sets:
        raise ValidationError("need at least one candidate set to intersect")
    result = sets[0]
    for s in sets[1:]:
        result = result & s
    return result


@dataclass
class AttackReport:
    per_session_candidate_counts: list[int]
    intersection_sizes: list[int]
    sessions_to_unique: Optional[int]
    baseline_keyboard_leak: int
    residual_bits: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.residual_bits:
            self.residual_bits = [float(math.log2(n)) for n in self.intersection_sizes]

    def to_dict(self) -> dict:
        return {
            "per_session_candidate_counts": self.per_session_candidate_counts,
            "intersection_sizes": self.intersection_sizes,
            "sessions_to_unique": (
                self.sessions_to_unique
                if self.sessions_to_unique is not None
                else NOT_REACHED
            ),
            "baseline_keyboard_leak": self.baseline_keyboard_leak,
            "residual_bits": self.residual_bits,
        }


@dataclass
class EffortReport:
    registration_actions: int
    auth_actions_mean: float
    password_baseline_actions: int

    def to_dict(self) -> dict:
        return {
            "registration_actions": self.registration_actions,
            "auth_actions_mean": self.auth_actions_mean,
            "password_baseline_actions": self.password_baseline_actions,
        }


def _run_observed_session(
    account: Account, session_seed: int, rng: np.random.Generator
) -> tuple[CandidateSet, int]:
    """One full solver-driven authentication, observed. Returns (candidates, moves)."""
    reg = account.registration
    session = account.start_session(session_seed, "access")
    initial = session.initial_grid
    window = random_horizontal_window(rng)
    moves = solve_alignment(initial, reg.secret, window=window)
    for move in moves:
        account.record_move(session.session_id, move)
    outcome = account.submit(session.session_id)
    if outcome["status"] != "accepted":
        raise IntegrityError("simulated user failed to authenticate")
    observed = observe(Observation.from_transcript(initial, moves))
    return observed, len(moves)


def simulate_attacker(reg: Registration, n_sessions: int, seed: int) -> AttackReport:
    """Watch ``n_sessions`` honest authentications and intersect what they leak.

    The simulated user re-solves into a uniformly random horizontal window
    each session; session seeds are drawn from the attacker-simulation stream
    so a fixed ``seed`` reproduces the whole run.
    """
    if n_sessions < 1:
        raise ValidationError("n_sessions must be >= 1")
    rng = np.random.default_rng(seed)
    account = Account(reg.account_id)
    account.registration = reg

    counts: list[int] = []
    sizes: list[int] = []
    current: Optional[CandidateSet] = None
    for _ in range(n_sessions):
        session_seed = int(rng.integers(0, 2**63))
        observed, _ = _run_observed_session(account, session_seed, rng)
        counts.append(len(observed))
        current = observed if current is None else (current & observed)
        sizes.append(len(current))

    to_unique = next((i + 1 for i, n in enumerate(sizes) if n == 1), None)
    return AttackReport(
        per_session_candidate_counts=counts,
        intersection_sizes=sizes,
        sessions_to_unique=to_unique,
        baseline_keyboard_leak=1,
    )


def keyboard_baseline() -> AttackReport:
    """On-screen keyboard entry: one observation reveals the secret outright."""
    return AttackReport(
        per_session_candidate_counts=[1],
        intersection_sizes=[1],
        sessions_to_unique=1,
        baseline_keyboard_leak=1,
    )


def effort_report(
    reg_flow: str,
    n_auth_trials: int,
    seed: int,
    password_baseline_actions: int = DEFAULT_PASSWORD_BASELINE_ACTIONS,
) -> EffortReport:
    """User-effort accounting: registration taps plus mean authentication actions.

    One authentication costs the solver transcript length plus one submit;
    the mean is taken over seeded solver-driven trials against a synthetic
    registration.
    """
    if reg_flow not in REGISTRATION_ACTIONS:
        raise ValidationError(f"unknown registration flow {reg_flow!r}")
    if n_auth_trials < 1:
        raise ValidationError("n_auth_trials must be >= 1")
    rng = np.random.default_rng(seed)
    reg = synthetic_registration(seed)
    account = Account(reg.account_id)
    account.registration = reg
    actions = []
    for _ in range(n_auth_trials):
        session_seed = int(rng.integers(0, 2**63))
        _, n_moves = _run_observed_session(account, session_seed, rng)
        actions.append(n_moves + 1)
    return EffortReport(
        registration_actions=REGISTRATION_ACTIONS[reg_flow],
        auth_actions_mean=float(np.mean(actions)),
        password_baseline_actions=password_baseline_actions,
    )


def synthetic_image_ids() -> list[ImageId]:
    return [f"face-{i:03d}" for i in range(CELLS)]


def synthetic_registration(seed: int, account_id: str = "sim") -> Registration:
    """Throwaway registration for simulations; the secret is drawn from ``seed``."""
    ids = synthetic_image_ids()
    rng = np.random.default_rng([seed, 1])
    picks = rng.choice(CELLS, size=WINDOW_LEN, replace=False)
    secret = tuple(ids[int(i)] for i in picks)
    return register(account_id, ids, secret)
