"""Shared summary memory with single-flight semantics.

Concurrent callers asking for the same method block on one in-flight
generation; completed entries are immutable; failures are never cached, so
the next caller retries.
"""
from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable


@dataclass(frozen=True)
class Summary:
    method: str
    text: str
    model: str
    created_at: str


class _Flight:
    __slots__ = ("event", "result", "error")

    def __init__(self):
        self.event = threading.Event()
        self.result: Summary | None = None
        self.error: BaseException | None = None


class SummaryCache:
    def __init__(self):
        self._lock = threading.Lock()
        self._done: dict[str, Summary] = {}
        self._flights: dict[str, _Flight] = {}

    def get(self, method_id: str) -> Summary | None:
        with self._lock:
            return self._done.get(method_id)

    def seed(self, summary: Summary) -> None:
        with self._lock:
            self._done.setdefault(summary.method, summary)

    def get_or_generate(
        self, method_id: str, producer: Callable[[], Summary]
    ) -> Summary:
        while True:
            with self._lock:
                cached = self._done.get(method_id)
                if cached is not None:
                    return cached
                flight = self._flights.get(method_id)
                if flight is None:
                    flight = _Flight()
                    self._flights[method_id] = flight
                    owner = True
                else:
                    owner = False

            if owner:
                try:
                    result = producer()
                except BaseException as exc:
                    flight.error = exc
                    with self._lock:
                        self._flights.pop(method_id, None)
                    flight.event.set()
                    raise
                with self._lock:
                    self._done[method_id] = result
                    self._flights.pop(method_id, None)
                flight.result = result
                flight.event.set()
                return result

            flight.event.wait()
            if flight.error is not None:
                raise flight.error
            if flight.result is not None:
                return flight.result
            # flight vanished without an outcome; retry from the top

    def snapshot(self) -> dict[str, Summary]:
        with self._lock:
            return dict(self._done)

    def dump_json(self, path: str | Path) -> None:
        """Run-scoped inspection dump of all completed entries."""
        snap = self.snapshot()
        payload = {mid: asdict(s) for mid, s in sorted(snap.items())}
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
