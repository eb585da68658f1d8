"""Custom cache backend for memoising expensive pure computations."""

import threading
from typing import Any

from django.core.cache.backends.base import DEFAULT_TIMEOUT
from django.core.cache.backends.locmem import LocMemCache


class ComputationCache(LocMemCache):
    """Local-memory cache whose ``get_or_set`` computes each key only once."""

    def __init__(self, name: str, params: dict[str, Any]) -> None:
        super().__init__(name, params)
        self._key_locks: dict[str, threading.Lock] = {}
        self._key_locks_guard = threading.Lock()

    def _lock_for(self, key: str) -> threading.Lock:
        with self._key_locks_guard:
            lock = self._key_locks.get(key)
            if lock is None:
                lock = self._key_locks[key] = threading.Lock()
            return lock

    def get_or_set(
        self,
        key: str,
        default: Any,
        timeout: float | None = DEFAULT_TIMEOUT,  # type: ignore[assignment]
        version: int | None = None,
    ) -> Any:
        """Return the cached value, computing ``default()`` under a per-key lock."""
        sentinel = object()
        value = self.get(key, sentinel, version=version)
        if value is not sentinel:
            return value
        with self._lock_for(key):
            # Another thread may have filled the key while we waited.
            value = self.get(key, sentinel, version=version)
            if value is not sentinel:
                return value
            try:
                value = default() if callable(default) else default
                self.set(key, value, timeout=timeout, version=version)
            finally:
                # Later callers find the value before asking for a lock.
                with self._key_locks_guard:
                    self._key_locks.pop(key, None)
            return value
