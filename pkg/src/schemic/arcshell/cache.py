"""Content-addressed on-disk store of result records, one JSON file per key."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from typing import Callable, Optional, Tuple

log = logging.getLogger(__name__)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def cache_key(op: str, inputs, engine_version: str) -> str:
    blob = canonical_json({"op": op, "inputs": inputs, "engine_version": engine_version})
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ResultCache:
    """``directory=None`` (or an unusable directory) makes every lookup a miss."""

    def __init__(self, directory: Optional[str]):
        self.directory = directory
        if directory is not None:
            try:
                os.makedirs(directory, exist_ok=True)
            except OSError as exc:
                log.warning("cache disabled, cannot create %s: %s", directory, exc)
                self.directory = None

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def load(self, key: str) -> Optional[dict]:
        if self.directory is None:
            return None
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                record = json.load(fh)
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
            return None
        if not isinstance(record, dict) or record.get("cache_key") != key or "payload" not in record:
            log.warning("corrupt cache entry %s; recomputing", path)
            return None
        return record

    def store(self, key: str, record: dict):
        if self.directory is None:
            return
        try:
            if not os.path.isdir(self.directory):
                os.makedirs(self.directory, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(record))
            os.replace(tmp, self._path(key))
        except OSError as exc:
            log.warning("could not write cache entry %s: %s", key, exc)

    def lookup_store(self, key: str, compute: Callable[[], dict]) -> Tuple[dict, bool]:
        """``(record, hit)``; a miss computes, stores atomically and returns."""
        record = self.load(key)
        if record is not None:
            return record, True
        record = compute()
        self.store(key, record)
        return record, False
