"""Chat-completion backends: OpenAI-compatible HTTP and a deterministic mock."""
from __future__ import annotations

import hashlib
import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Protocol

import httpx

from smartdoc.errors import BackendError


class BackendTimeout(BackendError):
    """A single call exceeded the backend timeout; counts as a failed attempt."""


class LlmBackend(Protocol):
    model: str

    def complete(self, system: str, user: str) -> str: ...


class HttpChatBackend:
    """POST {model, messages, temperature} -> {choices: [{message: {content}}]}."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str = "",
        temperature: float = 0.2,
        timeout: float = 60.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.temperature = temperature
        self.timeout = timeout

    def complete(self, system: str, user: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "temperature": self.temperature,
        }
        try:
            resp = httpx.post(self.endpoint, json=payload, headers=headers,
                              timeout=self.timeout)
        except httpx.TimeoutException as exc:
            raise BackendTimeout(f"backend timed out after {self.timeout}s") from exc
        except httpx.HTTPError as exc:
            raise BackendError(f"backend transport failure: {exc}") from exc
        if resp.status_code != 200:
            raise BackendError(f"backend returned HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendError(f"malformed backend response: {exc}") from exc


@dataclass
class RecordedCall:
    system: str
    user: str


_TARGET_LINE = re.compile(r"^Target method: (.+)$", flags=re.MULTILINE)


def _default_mock_response(system: str, user: str) -> str:
    match = _TARGET_LINE.search(user)
    subject = match.group(1) if match else hashlib.sha256(user.encode()).hexdigest()[:12]
    if system.startswith("Write a JavaDoc"):
        return f"/**\n * Generated description of {subject}.\n */"
    return f"Deterministic summary of {subject}."


@dataclass
class MockChatBackend:
    """Keyed response table plus a call log; fully deterministic.

    Table keys are matched as substrings of the user message, longest key
    first. A value may be a string or a list of strings consumed one call at a
    time (the last entry repeats once exhausted), which scripts retry
    behavior. Unmatched prompts fall back to a deterministic synthetic
    response derived from the target method line.
    """

    responses: dict[str, object] = field(default_factory=dict)
    default: Callable[[str, str], str] = _default_mock_response
    model: str = "mock-model"
    calls: list[RecordedCall] = field(default_factory=list)
    _positions: dict[str, int] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def complete(self, system: str, user: str) -> str:
        with self._lock:
            self.calls.append(RecordedCall(system, user))
            for key in sorted(self.responses, key=len, reverse=True):
                if key in user:
                    value = self.responses[key]
                    if isinstance(value, str):
                        return value
                    if callable(value):
                        return value(system, user)
                    pos = self._positions.get(key, 0)
                    self._positions[key] = pos + 1
                    return value[min(pos, len(value) - 1)]
            return self.default(system, user)

    # --- helpers for tests and call accounting ---
    def summary_calls(self) -> list[RecordedCall]:
        return [c for c in self.calls if c.system.startswith("Summarize")]

    def comment_calls(self) -> list[RecordedCall]:
        return [c for c in self.calls if c.system.startswith("Write a JavaDoc")]

    def reset(self) -> None:
        with self._lock:
            self.calls.clear()
            self._positions.clear()
