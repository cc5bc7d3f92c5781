"""Prompt templates, token estimation, and bundle assembly primitives.

Templates ship as versioned data files; their combined hash is logged per run
so results can be tied to exact prompt wording.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from importlib import resources

_TEMPLATE_NAMES = ("comment_system.txt", "summary_system.txt", "target_user.txt")


def _read_template(name: str) -> str:
    return resources.files("smartdoc.templates").joinpath(name).read_text(encoding="utf-8")


def comment_system_template() -> str:
    return _read_template("comment_system.txt")


def summary_system_template() -> str:
    return _read_template("summary_system.txt")


def user_template() -> str:
    return _read_template("target_user.txt")


def template_hash() -> str:
    h = hashlib.sha256()
    for name in _TEMPLATE_NAMES:
        h.update(name.encode())
        h.update(_read_template(name).encode())
    return h.hexdigest()


def token_estimate(text: str) -> int:
    """Backend-independent budget proxy: word count times 1.3, rounded up."""
    return math.ceil(len(text.split()) * 1.3)


def clip_to_budget(text: str, budget: int) -> str:
    """Trim whole words until the estimate fits the budget."""
    words = text.split()
    max_words = int(budget / 1.3)
    if len(words) <= max_words:
        return text.strip()
    return " ".join(words[:max_words]).strip()


NO_CALLEES = "(no project-internal callees)"
STUB_MARKER = "[signature only]"


@dataclass(frozen=True)
class ContextEntry:
    method: str
    text: str
    is_stub: bool

    def render(self) -> str:
        if self.is_stub:
            return f"- {self.method}: {STUB_MARKER} {self.text}"
        return f"- {self.method}: {self.text}"


@dataclass(frozen=True)
class PromptBundle:
    system_message: str
    user_message: str
    context_entries: tuple[ContextEntry, ...]

    def estimate(self) -> int:
        return token_estimate(self.system_message) + token_estimate(self.user_message)


def render_user_message(
    method_id: str,
    class_fqn: str,
    file: str,
    signature: str,
    source: str,
    entries: tuple[ContextEntry, ...],
) -> str:
    context = "\n".join(e.render() for e in entries) if entries else NO_CALLEES
    return user_template().format(
        method_id=method_id,
        class_fqn=class_fqn,
        file=file,
        signature=signature,
        source=source,
        context=context,
    )
