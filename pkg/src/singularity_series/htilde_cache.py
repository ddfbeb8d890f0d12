"""
Disk cache for modified Macdonald polynomials in Schur coordinates.

One JSON document: {"version": 1, "entries": {"3:[2,1]": {"[3]": [...terms]}}}.
Writes go to a temporary file in the same directory and are renamed into place.
"""

import json
import logging
import os
import tempfile
import threading
from pathlib import Path

from pydantic import BaseModel, ValidationError

from .exactpoly import LaurentPoly, TermModel

logger = logging.getLogger(__name__)

CACHE_VERSION = 1

Partition = tuple[int, ...]


class CacheDocument(BaseModel):
    version: int = CACHE_VERSION
    entries: dict[str, dict[str, list[TermModel]]] = {}


class CacheStatus(BaseModel):
    path: str
    exists: bool
    version: int | None
    entries: int
    size_bytes: int


def entry_key(mu: Partition) -> str:
    return f"{sum(mu)}:[{','.join(str(p) for p in mu)}]"


def _partition_key(lam: Partition) -> str:
    return "[" + ",".join(str(p) for p in lam) + "]"


def _parse_partition_key(key: str) -> Partition:
    inner = key.strip()[1:-1]
    return tuple(int(p) for p in inner.split(",") if p)


class HtildeCache:
    """Thread-safe H~ store backed by a JSON file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, dict[str, list[TermModel]]] = {}
        self._loaded = False

    def load(self) -> None:
        with self._lock:
            self._load_locked()

    def _load_locked(self) -> None:
        self._loaded = True
        if not self.path.exists():
            self._entries = {}
            return
        try:
            document = CacheDocument.model_validate(json.loads(self.path.read_text(encoding="utf-8")))
        except (UnicodeDecodeError, json.JSONDecodeError, ValidationError) as e:
            logger.warning(f"Ignoring unreadable cache {self.path}: {e}")
            self._entries = {}
            return
        if document.version != CACHE_VERSION:
            logger.warning(
                f"Cache {self.path} has schema version {document.version}, expected {CACHE_VERSION}; ignoring it"
            )
            self._entries = {}
            return
        self._entries = document.entries
        logger.info(f"Loaded {len(self._entries)} H~ entries from {self.path}")

    def get(self, mu: Partition) -> dict[Partition, LaurentPoly]:
        """
        Raises:
            KeyError: If mu has no cached entry

        """
        with self._lock:
            if not self._loaded:
                self._load_locked()
            raw = self._entries[entry_key(mu)]
        return {
            _parse_partition_key(k): LaurentPoly.from_json([t.model_dump() for t in terms])
            for k, terms in raw.items()
        }

    def put(self, mu: Partition, coeffs: dict[Partition, LaurentPoly]) -> None:
        encoded = {
            _partition_key(lam): [TermModel(**term) for term in poly.to_json()]
            for lam, poly in coeffs.items()
        }
        with self._lock:
            if not self._loaded:
                self._load_locked()
            # the same mu always yields the same value, so a repeated put is harmless
            self._entries[entry_key(mu)] = encoded

    def save(self) -> None:
        with self._lock:
            document = CacheDocument(entries=self._entries)
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=self.path.parent, prefix=".htilde-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(document.model_dump_json())
                os.replace(tmp_name, self.path)
            except BaseException:
                Path(tmp_name).unlink(missing_ok=True)
                raise
        logger.info(f"📄 Wrote {len(self._entries)} H~ entries to {self.path}")

    def status(self) -> CacheStatus:
        with self._lock:
            if not self._loaded:
                self._load_locked()
            exists = self.path.exists()
            version = self._stored_version() if exists else None
            return CacheStatus(
                path=str(self.path),
                exists=exists,
                version=version,
                entries=len(self._entries),
                size_bytes=self.path.stat().st_size if exists else 0,
            )

    def _stored_version(self) -> int | None:
        try:
            raw = json.loads(self.path.read_text(encoding="utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return None
        version = raw.get("version") if isinstance(raw, dict) else None
        return version if isinstance(version, int) else None

    def clear(self) -> None:
        with self._lock:
            self._entries = {}
            self._loaded = True
            self.path.unlink(missing_ok=True)
        logger.info(f"Cleared H~ cache at {self.path}")

    def __contains__(self, mu: Partition) -> bool:
        with self._lock:
            if not self._loaded:
                self._load_locked()
            return entry_key(mu) in self._entries

    def __len__(self) -> int:
        with self._lock:
            if not self._loaded:
                self._load_locked()
            return len(self._entries)
