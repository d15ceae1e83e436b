"""Single-slot thread handoffs used between the input, render, and CLI
threads: latest-value-wins camera updates and single-producer metric
snapshots."""

from __future__ import annotations

import threading
from typing import Generic, TypeVar

T = TypeVar("T")

__all__ = ["LatestValue", "MetricsBoard"]


class LatestValue(Generic[T]):
    """A mailbox holding at most one value; writers overwrite, readers drain."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value: T | None = None
        self._fresh = False

    def put(self, value: T) -> None:
        with self._lock:
            self._value = value
            self._fresh = True

    def take(self) -> T | None:
        """Return the newest value once, then None until the next put."""
        with self._lock:
            if not self._fresh:
                return None
            self._fresh = False
            return self._value


class MetricsBoard(Generic[T]):
    """Single-producer snapshot: the render thread publishes, anyone reads."""

    def __init__(self):
        self._lock = threading.Lock()
        self._snapshot: T | None = None

    def publish(self, value: T) -> None:
        with self._lock:
            self._snapshot = value

    def snapshot(self) -> T | None:
        with self._lock:
            return self._snapshot
