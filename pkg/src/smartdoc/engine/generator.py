"""DFS-driven summarization and retry-bounded comment generation.

The engine walks a method's post-order schedule so every callee has an
explanation before its callers are prompted, shares summaries across flows
through the single-flight cache, and enforces the structured-output contract
by regex extraction with bounded retries.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone

from smartdoc.config import Config
from smartdoc.engine import prompts
from smartdoc.engine.backends import BackendTimeout, LlmBackend
from smartdoc.engine.cache import Summary, SummaryCache
from smartdoc.engine.prompts import ContextEntry, PromptBundle
from smartdoc.errors import (
    BackendError,
    StructuredOutputError,
    UnknownMethodError,
    ValidationError,
)
from smartdoc.graph import CallGraph, ProjectIndex, Schedule, dfs_schedule
from smartdoc.javasrc.model import MethodDecl

_JAVADOC_BLOCK = re.compile(r"/\*\*.*?\*/", flags=re.DOTALL)


def validate_extract(raw: str) -> str:
    """Extract the first JavaDoc block from a response, or fail.

    The non-greedy match also finds blocks fenced inside markdown. The result
    must begin with `/**`, end with `*/`, and contain no interior `*/`.
    """
    match = _JAVADOC_BLOCK.search(raw)
    if match is None:
        raise ValidationError("response contains no /** ... */ block")
    block = match.group(0)
    if not block.startswith("/**") or not block.endswith("*/"):
        raise ValidationError("extracted block is not a JavaDoc comment")
    if "*/" in block[3:-2]:
        raise ValidationError("extracted block contains a nested comment close")
    return block


def _nonblank(raw: str) -> str:
    text = raw.strip()
    if not text:
        raise ValidationError("blank summary response")
    return text


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class GeneratedComment:
    method: str
    raw_response: str
    javadoc: str
    retries: int
    model: str


@dataclass(frozen=True)
class GenerationResult:
    comment: GeneratedComment
    schedule: Schedule
    summaries: dict[str, Summary]
    failed: frozenset[str]
    bundle: PromptBundle


class GenerationEngine:
    """Shareable across concurrent request flows; all shared state is the cache."""

    def __init__(
        self,
        index: ProjectIndex,
        graph: CallGraph,
        backend: LlmBackend,
        config: Config | None = None,
        cache: SummaryCache | None = None,
        summary_backend: LlmBackend | None = None,
    ):
        self.index = index
        self.graph = graph
        self.backend = backend
        self.summary_backend = summary_backend or backend
        self.config = config or Config()
        self.cache = cache or SummaryCache()
        self._limiter = threading.BoundedSemaphore(max(1, self.config.concurrency))
        self._comment_system = prompts.comment_system_template()
        self._summary_system = prompts.summary_system_template().format(
            budget=self.config.summary_budget
        )

    # ------------------------------------------------------------------
    def decl(self, method_id: str) -> MethodDecl:
        try:
            return self.index.methods[method_id]
        except KeyError:
            raise UnknownMethodError(f"unknown method: {method_id}") from None

    def schedule_for(self, method_id: str) -> Schedule:
        return dfs_schedule(self.graph, method_id, depth_cap=self.config.depth)

    # ------------------------------------------------------------------
    def _stub_entry(self, method_id: str) -> ContextEntry:
        return ContextEntry(method_id, self.decl(method_id).signature, is_stub=True)

    def _direct_context(
        self, method_id: str, schedule: Schedule, failed: set[str]
    ) -> tuple[ContextEntry, ...]:
        """Context for a summary prompt: the method's own direct callees."""
        members = schedule.members()
        entries = []
        for callee in self.graph.children(method_id):
            cached = self.cache.get(callee)
            truncated = (
                (method_id, callee) in self.graph.back_edges
                or callee not in members
                or callee in failed
                or cached is None
            )
            if truncated:
                entries.append(self._stub_entry(callee))
            else:
                entries.append(ContextEntry(callee, cached.text, is_stub=False))
        return tuple(entries)

    def _produce_summary(
        self, method_id: str, schedule: Schedule, failed: set[str]
    ) -> Summary:
        decl = self.decl(method_id)
        user = prompts.render_user_message(
            method_id, decl.class_fqn, decl.file, decl.signature,
            decl.decl_text, self._direct_context(method_id, schedule, failed),
        )
        text, _raw, _attempts = self._call_with_retries(
            self._summary_system, user, _nonblank, backend=self.summary_backend
        )
        return Summary(
            method=method_id,
            text=prompts.clip_to_budget(text, self.config.summary_budget),
            model=self.summary_backend.model,
            created_at=_utc_now(),
        )

    def summarize_schedule(
        self, schedule: Schedule
    ) -> tuple[dict[str, Summary], set[str]]:
        """Summarize every dependency in schedule order; failures become stubs."""
        summaries: dict[str, Summary] = {}
        failed: set[str] = set()
        for mid in schedule.dependencies():
            try:
                summaries[mid] = self.cache.get_or_generate(
                    mid, lambda m=mid: self._produce_summary(m, schedule, failed)
                )
            except (StructuredOutputError, BackendError):
                failed.add(mid)
        return summaries, failed

    # ------------------------------------------------------------------
    def assemble_prompt(
        self,
        target: MethodDecl,
        schedule: Schedule,
        summaries: dict[str, Summary],
        failed: set[str] | frozenset[str] = frozenset(),
    ) -> PromptBundle:
        """Bundle for the final comment: full reachable context, budget-bounded."""
        entries: list[ContextEntry] = []
        for mid in schedule.dependencies():
            if mid in failed or mid not in summaries:
                entries.append(self._stub_entry(mid))
            else:
                entries.append(ContextEntry(mid, summaries[mid].text, is_stub=False))

        direct = set(self.graph.children(target.id))

        def build(kept: list[ContextEntry]) -> PromptBundle:
            user = prompts.render_user_message(
                target.id, target.class_fqn, target.file, target.signature,
                target.decl_text, tuple(kept),
            )
            return PromptBundle(self._comment_system, user, tuple(kept))

        bundle = build(entries)
        if bundle.estimate() <= self.config.prompt_budget:
            return bundle

        # Deepest, oldest context goes first; the root's direct callees last.
        position = {e.method: i for i, e in enumerate(entries)}
        drop_order = sorted(
            entries,
            key=lambda e: (
                e.method in direct,
                -schedule.depth.get(e.method, 1),
                position[e.method],
            ),
        )
        kept = list(entries)
        for victim in drop_order:
            if bundle.estimate() <= self.config.prompt_budget:
                break
            kept.remove(victim)
            bundle = build(kept)
        return bundle

    def generate_comment(
        self,
        target: MethodDecl,
        bundle: PromptBundle,
        max_retries: int | None = None,
    ) -> GeneratedComment:
        block, raw, attempts = self._call_with_retries(
            bundle.system_message, bundle.user_message, validate_extract,
            max_retries=max_retries,
        )
        return GeneratedComment(
            method=target.id,
            raw_response=raw,
            javadoc=block,
            retries=attempts,
            model=self.backend.model,
        )

    def generate_for(self, method_id: str) -> GenerationResult:
        """Full flow for one request: schedule, summaries, final comment."""
        target = self.decl(method_id)
        schedule = self.schedule_for(method_id)
        summaries, failed = self.summarize_schedule(schedule)
        bundle = self.assemble_prompt(target, schedule, summaries, failed)
        comment = self.generate_comment(target, bundle)
        return GenerationResult(
            comment=comment,
            schedule=schedule,
            summaries=summaries,
            failed=frozenset(failed),
            bundle=bundle,
        )

    # ------------------------------------------------------------------
    def _call_with_retries(self, system, user, validate, max_retries=None, backend=None):
        target = backend or self.backend
        attempts_allowed = max_retries or self.config.max_retries
        last_raw: str | None = None
        for attempt in range(attempts_allowed):
            try:
                with self._limiter:
                    raw = target.complete(system, user)
            except BackendTimeout:
                continue  # a timeout consumes an attempt
            try:
                return validate(raw), raw, attempt
            except ValidationError:
                last_raw = raw
        if last_raw is None:
            raise BackendError(f"all {attempts_allowed} attempts timed out")
        raise StructuredOutputError(
            f"no structurally valid output after {attempts_allowed} attempts",
            last_response=last_raw,
        )
