"""File-backed template store.

Layout under the root directory::

    index.json              user ids, record file names, target fingerprints
    records/<sha256>.bdat   one serialized record per user
    locks/<sha256>.lock     per-user advisory locks (enroll/revoke)
    locks/index.lock        serializes index updates

Every write goes to a temporary file in the destination directory and is
moved into place with :func:`os.replace`, so readers only ever see a complete
old file or a complete new one.
"""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import json
import os
import secrets
import tempfile
from pathlib import Path

from bdat.pipeline.record import TemplateRecord, deserialize_record, serialize_record

INDEX_VERSION = 1


class StoreError(Exception):
    pass


class UnknownUserError(StoreError, LookupError):
    pass


class DuplicateUserError(StoreError):
    pass


def user_key(user_id: str) -> str:
    return hashlib.sha256(user_id.encode("utf-8")).hexdigest()


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


class TemplateStore:
    def __init__(self, root):
        self.root = Path(root)
        self.records_dir = self.root / "records"
        self.locks_dir = self.root / "locks"
        self.index_path = self.root / "index.json"

    def record_path(self, user_id: str) -> Path:
        return self.records_dir / f"{user_key(user_id)}.bdat"

    @contextlib.contextmanager
    def _flock(self, name: str):
        self.locks_dir.mkdir(parents=True, exist_ok=True)
        with open(self.locks_dir / name, "a+b") as fh:
            fcntl.flock(fh.fileno(), fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh.fileno(), fcntl.LOCK_UN)

    def user_lock(self, user_id: str):
        """Exclusive lock held across a whole enroll or revoke of ``user_id``."""
        return self._flock(f"{user_key(user_id)}.lock")

    def _read_index(self) -> dict:
        if not self.index_path.exists():
            return {"version": INDEX_VERSION, "registry_salt": None, "users": {}}
        index = json.loads(self.index_path.read_text(encoding="utf-8"))
        if index.get("version") != INDEX_VERSION:
            raise StoreError(f"unsupported index version {index.get('version')}")
        return index

    def _write_index(self, index: dict) -> None:
        data = json.dumps(index, indent=2, sort_keys=True).encode("utf-8") + b"\n"
        atomic_write(self.index_path, data)

    def registry_salt(self) -> bytes:
        with self._flock("index.lock"):
            index = self._read_index()
            if index["registry_salt"] is None:
                index["registry_salt"] = secrets.token_hex(16)
                self._write_index(index)
            return bytes.fromhex(index["registry_salt"])

    def users(self) -> list[str]:
        return sorted(self._read_index()["users"])

    def __contains__(self, user_id: str) -> bool:
        return user_id in self._read_index()["users"]

    def taken_fingerprints(self, exclude: str | None = None) -> set[str]:
        users = self._read_index()["users"]
        return {entry["target_fp"] for uid, entry in users.items() if uid != exclude}

    def load(self, user_id: str) -> TemplateRecord:
        return deserialize_record(self.load_bytes(user_id))

    def load_bytes(self, user_id: str) -> bytes:
        if user_id not in self:
            raise UnknownUserError(f"user {user_id!r} is not enrolled")
        try:
            return self.record_path(user_id).read_bytes()
        except FileNotFoundError:
            raise UnknownUserError(f"record for {user_id!r} is missing") from None

    def save(self, record: TemplateRecord, target_fp: str) -> Path:
        """Write ``record`` and register it in the index. Caller holds the user lock."""
        path = self.record_path(record.user_id)
        atomic_write(path, serialize_record(record))
        with self._flock("index.lock"):
            index = self._read_index()
            index["users"][record.user_id] = {"file": path.name, "target_fp": target_fp}
            self._write_index(index)
        return path
