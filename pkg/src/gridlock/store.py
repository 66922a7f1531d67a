"""File-backed account persistence: one JSON file per account.

Writes are atomic (write to a temp file, then rename into place) so a crash
mid-write can never corrupt an existing record. Mutations to one account are
serialised by that account's lock; different accounts never contend.

Loaded records are cached, revalidated against the file's (mtime_ns, size) on
every get so that another process writing the same data dir — e.g. an admin
``gridlock unlock`` against a running service — is picked up immediately.
"""

import json
import os
import re
import threading
import uuid
from pathlib import Path
from typing import Optional

from .authn import Account
from .errors import IntegrityError, NotFoundError, ValidationError

ACCOUNT_ID_PATTERN = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class AccountStore:
    def __init__(self, data_dir: Path | str):
        self.data_dir = Path(data_dir)
        self.accounts_dir = self.data_dir / "accounts"
        self.accounts_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()
        self._cache: dict[str, tuple[Account, tuple[int, int]]] = {}

    def lock(self, account_id: str) -> threading.RLock:
        with self._locks_guard:
            if account_id not in self._locks:
                self._locks[account_id] = threading.RLock()
            return self._locks[account_id]

    def account_path(self, account_id: str) -> Path:
        return self.accounts_dir / f"{account_id}.json"

    def faces_dir(self, account_id: str) -> Path:
        return self.accounts_dir / account_id / "faces"

    def create(self, account_id: Optional[str] = None) -> Account:
        account_id = account_id or uuid.uuid4().hex[:12]
        if not ACCOUNT_ID_PATTERN.match(account_id):
            raise ValidationError(
                f"account id {account_id!r} must match {ACCOUNT_ID_PATTERN.pattern}"
            )
        with self.lock(account_id):
            if self.account_path(account_id).exists():
                raise ValidationError(f"account {account_id!r} already exists")
            account = Account(account_id)
            self.save(account)
            return account

    @staticmethod
    def _stamp(path: Path) -> Optional[tuple[int, int]]:
        try:
            stat = path.stat()
        except FileNotFoundError:
            return None
        return (stat.st_mtime_ns, stat.st_size)

    def get(self, account_id: str) -> Account:
        with self.lock(account_id):
            path = self.account_path(account_id)
            stamp = self._stamp(path)
            if stamp is None:
                self._cache.pop(account_id, None)
                raise NotFoundError(f"unknown account {account_id!r}")
            cached = self._cache.get(account_id)
            if cached is not None and cached[1] == stamp:
                return cached[0]
            try:
                account = Account.from_dict(json.loads(path.read_text()))
            except (OSError, json.JSONDecodeError, KeyError) as exc:
                raise IntegrityError(f"cannot load account {account_id!r}: {exc}") from exc
            self._cache[account_id] = (account, stamp)
            return account

    def save(self, account: Account) -> None:
        with self.lock(account.account_id):
            path = self.account_path(account.account_id)
            payload = json.dumps(account.to_dict(), indent=2, sort_keys=True) + "\n"
            tmp = path.with_name(f"{path.name}.tmp-{uuid.uuid4().hex[:8]}")
            try:
                tmp.write_text(payload)
                os.replace(tmp, path)
            except OSError as exc:
                tmp.unlink(missing_ok=True)
                raise IntegrityError(
                    f"cannot persist account {account.account_id!r}: {exc}"
                ) from exc
            stamp = self._stamp(path)
            if stamp is None:
                self._cache.pop(account.account_id, None)
            else:
                self._cache[account.account_id] = (account, stamp)

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.accounts_dir.glob("*.json"))

    def session_index(self) -> dict[str, str]:
        """session_id -> account_id across every stored account."""
        index = {}
        for account_id in self.list_ids():
            account = self.get(account_id)
            for sid in account.sessions:
                index[sid] = account_id
        return index
