"""Authentication semantics: registration, challenge sessions, lockout.

The server is the only party that verifies: a client submits a transcript of
moves, the server replays it over the issued arrangement and accepts iff the
replayed grid aligns with the stored secret. Verification therefore depends
only on (initial seed, transcript, secret), which makes every decision
auditable after the fact.
"""

import time
import uuid
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    LockedError,
    NotFoundError,
    SessionStateError,
    ValidationError,
)
from .grid import (
    Grid,
    ImageId,
    MAX_SEED,
    Move,
    _check_seed,
    is_aligned,
    replay_moves,
    shuffle_grid,
    validate_image_set,
    validate_secret,
)

CONSEQUENCES = ("access", "payment")

LOCKOUT_THRESHOLD = 3
DEFAULT_SESSION_TTL_SECS = 300.0
# Terminal sessions kept in the account record for auditing; older ones and
# all expired sessions are dropped when a new session starts.
SESSION_RETENTION = 32

OPEN = "open"
ACCEPTED = "accepted"
REJECTED = "rejected"
EXPIRED = "expired"


def check_consequence(value: str) -> str:
    if value not in CONSEQUENCES:
        raise ValidationError(
            f"consequence must be one of {CONSEQUENCES}, got {value!r}"
        )
    return value


@dataclass(frozen=True)
class Registration:
    account_id: str
    image_ids: frozenset[ImageId]
    secret: tuple[ImageId, ...]
    created_at: float

    def to_dict(self) -> dict:
        return {
            "image_ids": sorted(self.image_ids),
            "secret": list(self.secret),
            "created_at": self.created_at,
        }


def register(
    account_id: str,
    image_ids: Iterable[ImageId],
    secret: Sequence[ImageId],
    created_at: Optional[float] = None,
) -> Registration:
    """Validate and build a registration: 45 distinct images, ordered 4-subset secret."""
    ids = validate_image_set(image_ids)
    chosen = validate_secret(secret, ids)
    return Registration(
        account_id=account_id,
        image_ids=ids,
        secret=chosen,
        created_at=time.time() if created_at is None else created_at,
    )


@dataclass
class LockoutState:
    consecutive_failures: int = 0
    locked: bool = False

    def to_dict(self) -> dict:
        return {"consecutive_failures": self.consecutive_failures, "locked": self.locked}


@dataclass
class AuthSession:
    session_id: str
    account_id: str
    requested_seed: int
    seed: int  # derived seed actually used for the arrangement
    initial_cells: tuple[ImageId, ...]
    consequence: str
    created_at: float
    transcript: list[Move] = field(default_factory=list)
    status: str = OPEN

    @property
    def initial_grid(self) -> Grid:
        return Grid(self.initial_cells)

    def current_grid(self) -> Grid:
        return replay_moves(self.initial_grid, self.transcript)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "requested_seed": self.requested_seed,
            "seed": self.seed,
            "consequence": self.consequence,
            "created_at": self.created_at,
            "transcript": [m.to_dict() for m in self.transcript],
            "status": self.status,
        }


def derive_challenge_seed(
    image_ids: Iterable[ImageId], secret: Sequence[ImageId], seed: int
) -> int:
    """First seed at or after ``seed`` whose shuffle does not align the secret.

    A fresh arrangement must never hand the user a pre-solved challenge; when
    the shuffle happens to align (roughly a 1-in-50,000 event), the seed is
    bumped deterministically until it does not.
    """
    _check_seed(seed)
    derived = seed
    while is_aligned(shuffle_grid(image_ids, derived), secret):
        derived = (derived + 1) % MAX_SEED
    return derived


class Account:
    """One account: registration, lockout counters, and its sessions.

    Callers serialise mutations per account; the class itself is plain state.
    """

    def __init__(self, account_id: str):
        self.account_id = account_id
        self.registration: Optional[Registration] = None
        self.lockout = LockoutState()
        self.sessions: dict[str, AuthSession] = {}
        self.open_session_id: Optional[str] = None
        self.face_index_path: Optional[str] = None

    # -- registration -------------------------------------------------------

    def set_registration(
        self, image_ids: Iterable[ImageId], secret: Sequence[ImageId]
    ) -> Registration:
        reg = register(self.account_id, image_ids, secret)
        self.registration = reg
        return reg

    def _require_registration(self) -> Registration:
        if self.registration is None:
            raise ValidationError(f"account {self.account_id!r} has no registration")
        return self.registration

    # -- session lifecycle ---------------------------------------------------

    def _prune_sessions(self) -> None:
        """Bound the retained history so the persisted record cannot grow
        without limit: expired sessions go, terminal ones keep a tail."""
        dead = [sid for sid, s in self.sessions.items() if s.status == EXPIRED]
        for sid in dead:
            del self.sessions[sid]
        terminal = sorted(
            (s for s in self.sessions.values() if s.status in (ACCEPTED, REJECTED)),
            key=lambda s: s.created_at,
        )
        for session in terminal[: max(0, len(terminal) - SESSION_RETENTION)]:
            del self.sessions[session.session_id]

    def start_session(
        self,
        seed: int,
        consequence: str,
        now: Optional[float] = None,
        session_id: Optional[str] = None,
    ) -> AuthSession:
        reg = self._require_registration()
        check_consequence(consequence)
        if self.lockout.locked:
            raise LockedError(f"account {self.account_id!r} is locked")
        now = time.time() if now is None else now
        self._prune_sessions()
        # Only one open challenge at a time; starting a new one abandons the old.
        if self.open_session_id is not None:
            previous = self.sessions.get(self.open_session_id)
            if previous is not None and previous.status == OPEN:
                previous.status = EXPIRED
            self.open_session_id = None
        derived = derive_challenge_seed(reg.image_ids, reg.secret, seed)
        grid = shuffle_grid(reg.image_ids, derived)
        session = AuthSession(
            session_id=session_id or uuid.uuid4().hex,
            account_id=self.account_id,
            requested_seed=seed,
            seed=derived,
            initial_cells=grid.cells,
            consequence=consequence,
            created_at=now,
        )
        self.sessions[session.session_id] = session
        self.open_session_id = session.session_id
        return session

    def _open_session(
        self, session_id: str, now: float, ttl: float
    ) -> AuthSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        if session.status == OPEN and now - session.created_at > ttl:
            session.status = EXPIRED
            if self.open_session_id == session_id:
                self.open_session_id = None
        if session.status != OPEN:
            raise SessionStateError(
                f"session {session_id!r} is {session.status}, not open"
            )
        return session

    def record_move(
        self,
        session_id: str,
        move: Move,
        now: Optional[float] = None,
        ttl: float = DEFAULT_SESSION_TTL_SECS,
    ) -> AuthSession:
        now = time.time() if now is None else now
        session = self._open_session(session_id, now, ttl)
        session.transcript.append(move)
        return session

    def submit(
        self,
        session_id: str,
        now: Optional[float] = None,
        ttl: float = DEFAULT_SESSION_TTL_SECS,
    ) -> dict:
        """Replay the transcript and decide. Returns status, failures, locked."""
        reg = self._require_registration()
        now = time.time() if now is None else now
        session = self._open_session(session_id, now, ttl)
        final = replay_moves(session.initial_grid, session.transcript)
        if is_aligned(final, reg.secret):
            session.status = ACCEPTED
            self.lockout.consecutive_failures = 0
        else:
            session.status = REJECTED
            self.lockout.consecutive_failures += 1
            if self.lockout.consecutive_failures >= LOCKOUT_THRESHOLD:
                self.lockout.locked = True
        self.open_session_id = None
        return {
            "status": session.status,
            "failures": self.lockout.consecutive_failures,
            "locked": self.lockout.locked,
        }

    def unlock(self) -> None:
        """Administrative reset; the only way out of a lockout."""
        self.lockout = LockoutState()

    # -- persistence ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "account_id": self.account_id,
            "registration": self.registration.to_dict() if self.registration else None,
            "lockout": self.lockout.to_dict(),
            "face_index_path": self.face_index_path,
            "open_session_id": self.open_session_id,
            "sessions": {sid: s.to_dict() for sid, s in self.sessions.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Account":
        account = cls(data["account_id"])
        reg = data.get("registration")
        if reg is not None:
            account.registration = register(
                data["account_id"],
                reg["image_ids"],
                reg["secret"],
                created_at=reg["created_at"],
            )
        lock = data.get("lockout") or {}
        account.lockout = LockoutState(
            consecutive_failures=lock.get("consecutive_failures", 0),
            locked=lock.get("locked", False),
        )
        account.face_index_path = data.get("face_index_path")
        account.open_session_id = data.get("open_session_id")
        for sid, s in (data.get("sessions") or {}).items():
            if account.registration is None:
                break
            grid = shuffle_grid(account.registration.image_ids, s["seed"])
            account.sessions[sid] = AuthSession(
                session_id=sid,
                account_id=data["account_id"],
                requested_seed=s["requested_seed"],
                seed=s["seed"],
                initial_cells=grid.cells,
                consequence=s["consequence"],
                created_at=s["created_at"],
                transcript=[Move.from_dict(m) for m in s["transcript"]],
                status=s["status"],
            )
        return account

    def audit_replay(self, session_id: str) -> Optional[str]:
        """Recompute a closed session's decision from seed + transcript alone."""
        reg = self._require_registration()
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        if session.status not in (ACCEPTED, REJECTED):
            return None
        initial = shuffle_grid(reg.image_ids, session.seed)
        final = replay_moves(initial, session.transcript)
        return ACCEPTED if is_aligned(final, reg.secret) else REJECTED
