"""
Persistent per-isomer results keyed by canonical spiral.

Each entry is one JSON document {"checksum": sha256, "payload": {...}}; the checksum covers the payload
serialized with sorted keys. Realizations stored here use the canonical vertex labeling of the key.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path

from loguru import logger
from pydantic import BaseModel, ValidationError

from hypfull.core.errors import CacheCorruptionError
from hypfull.core.settings import settings
from hypfull.indices.vector import IndexVector
from hypfull.realize.solver import Realization
from hypfull.volume.polyhedron import HypVolumeReport

FORMAT_VERSION = 1


class CacheEntry(BaseModel):
    format_version: int = FORMAT_VERSION
    key: str
    indices: IndexVector
    volume: HypVolumeReport
    realization: Realization


class CacheStats(BaseModel):
    hits: int = 0
    misses: int = 0
    corrupted: int = 0
    solver_runs: int = 0


def _checksum(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ResultCache:
    """Directory of cache entries; disabled caches miss on every lookup and never write."""

    def __init__(self, directory: Path | None = None, *, enabled: bool = True) -> None:
        self.directory = directory or settings.cache_dir
        self.enabled = enabled
        self.stats = CacheStats()

    def path_for(self, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:24]
        return self.directory / f"{digest}.json"

    def _load(self, path: Path, key: str) -> CacheEntry:
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
            payload = document["payload"]
            if document["checksum"] != _checksum(payload):
                msg = "checksum mismatch"
                raise CacheCorruptionError(msg)
            entry = CacheEntry.model_validate(payload)
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValidationError) as e:
            msg = f"Cache entry {path.name} for '{key}' is unreadable: {e!s}"
            raise CacheCorruptionError(msg) from e
        if entry.format_version != FORMAT_VERSION or entry.key != key:
            msg = f"Cache entry {path.name} has version {entry.format_version} and key '{entry.key}'"
            raise CacheCorruptionError(msg)
        return entry

    def get(self, key: str) -> CacheEntry | None:
        """Entry for `key`, or None on a miss. Corrupted entries are logged and treated as misses."""
        if not self.enabled:
            self.stats.misses += 1
            return None
        path = self.path_for(key)
        if not path.exists():
            self.stats.misses += 1
            return None
        try:
            entry = self._load(path, key)
        except CacheCorruptionError as e:
            logger.warning(f"{e!s}; recomputing")
            self.stats.corrupted += 1
            self.stats.misses += 1
            return None
        self.stats.hits += 1
        logger.debug(f"Cache hit for '{key}'")
        return entry

    def put(self, entry: CacheEntry) -> Path | None:
        """Write an entry atomically: temporary file in the cache directory, then rename."""
        if not self.enabled:
            return None
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = entry.model_dump(mode="json")
        document = {"checksum": _checksum(payload), "payload": payload}
        path = self.path_for(entry.key)
        with tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", dir=self.directory, suffix=".tmp", delete=False
        ) as file:
            json.dump(document, file, indent=4)
            temporary = Path(file.name)
        os.replace(temporary, path)  # noqa: PTH105
        logger.debug(f"Cached '{entry.key}' in {path.name}")
        return path

    def clear(self) -> int:
        if not self.directory.exists():
            return 0
        removed = 0
        for path in self.directory.glob("*.json"):
            path.unlink()
            removed += 1
        logger.info(f"Removed {removed} cache entries from {self.directory}")
        return removed
