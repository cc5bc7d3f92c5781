import dataclasses
import json
import threading
import time

import pytest

from smartdoc.engine import (
    GenerationEngine,
    MockChatBackend,
    Summary,
    SummaryCache,
    validate_extract,
)
from smartdoc.engine.backends import BackendTimeout
from smartdoc.engine.prompts import NO_CALLEES, STUB_MARKER, token_estimate
from smartdoc.errors import BackendError, StructuredOutputError, ValidationError

from conftest import ABS, CLAMP, FIXTURE_SCHEDULE, PROCESS, SCALE, TICK, TOCK, TRANSFORM

VALID_BLOCK = "/**\n * Adds two values.\n * @return sum\n */"


class TestValidateExtract:
    def test_plain_block_passes_through(self):
        assert validate_extract("/** Returns the sum. */") == "/** Returns the sum. */"

    def test_fenced_block_extracted(self):
        raw = "Here is the doc:\n```java\n/**\n * Adds two values.\n * @return sum\n */\n```"
        assert validate_extract(raw) == "/**\n * Adds two values.\n * @return sum\n */"

    def test_refusal_rejected(self):
        with pytest.raises(ValidationError):
            validate_extract("I cannot produce that.")

    def test_plain_block_comment_rejected(self):
        with pytest.raises(ValidationError):
            validate_extract("/* not a doc comment */")

    def test_first_block_wins(self):
        raw = "/** first */ and /** second */"
        assert validate_extract(raw) == "/** first */"

    def test_no_interior_close(self):
        block = validate_extract("x /** a */ y */ z")
        assert "*/" not in block[3:-2]

    def test_prose_noise_around_block(self):
        raw = "Sure! Below:\n/** The doc. */\nHope that helps."
        assert validate_extract(raw) == "/** The doc. */"


class TestRetries:
    def _engine_for_single(self, build_project, make_engine, backend, **cfg):
        index, graph = build_project({
            "A.java": "package p;\nclass A { int leaf(int x) { return x; } }",
        })
        return make_engine(index, graph, backend=backend, **cfg), index

    def test_valid_first_attempt_zero_retries(self, build_project, make_engine):
        backend = MockChatBackend(responses={"p.A#leaf/1": VALID_BLOCK})
        engine, _ = self._engine_for_single(build_project, make_engine, backend)
        result = engine.generate_for("p.A#leaf/1")
        assert result.comment.retries == 0
        assert result.comment.javadoc == VALID_BLOCK

    def test_two_failures_then_success(self, build_project, make_engine):
        backend = MockChatBackend(
            responses={"p.A#leaf/1": ["garbage", "more garbage", VALID_BLOCK]}
        )
        engine, _ = self._engine_for_single(build_project, make_engine, backend)
        result = engine.generate_for("p.A#leaf/1")
        assert result.comment.retries == 2
        assert result.comment.javadoc == VALID_BLOCK
        assert len(backend.comment_calls()) == 3

    def test_always_invalid_raises_after_exact_budget(self, build_project, make_engine):
        backend = MockChatBackend(responses={"p.A#leaf/1": "still not a comment"})
        engine, _ = self._engine_for_single(
            build_project, make_engine, backend, max_retries=3
        )
        with pytest.raises(StructuredOutputError) as exc_info:
            engine.generate_for("p.A#leaf/1")
        assert len(backend.comment_calls()) == 3
        assert exc_info.value.last_response == "still not a comment"

    def test_identical_bundle_resent_on_retry(self, build_project, make_engine):
        backend = MockChatBackend(responses={"p.A#leaf/1": ["nope", VALID_BLOCK]})
        engine, _ = self._engine_for_single(build_project, make_engine, backend)
        engine.generate_for("p.A#leaf/1")
        calls = backend.comment_calls()
        assert calls[0].user == calls[1].user
        assert calls[0].system == calls[1].system

    def test_timeout_counts_as_attempt(self, build_project, make_engine):
        attempts = []

        class FlakyBackend:
            model = "flaky"

            def complete(self, system, user):
                attempts.append(1)
                if len(attempts) == 1:
                    raise BackendTimeout("slow")
                return VALID_BLOCK

        engine, _ = self._engine_for_single(build_project, make_engine, FlakyBackend())
        result = engine.generate_for("p.A#leaf/1")
        assert result.comment.retries == 1
        assert len(attempts) == 2

    def test_transport_error_raises_backend_error(self, build_project, make_engine):
        class DeadBackend:
            model = "dead"

            def complete(self, system, user):
                raise BackendError("connection refused")

        engine, _ = self._engine_for_single(build_project, make_engine, DeadBackend())
        with pytest.raises(BackendError):
            engine.generate_for("p.A#leaf/1")


class TestSummaryCache:
    def test_cached_entry_returned(self):
        cache = SummaryCache()
        s = Summary("m", "text", "mock", "2026-01-01T00:00:00+00:00")
        cache.seed(s)
        calls = []
        assert cache.get_or_generate("m", lambda: calls.append(1)) is s
        assert calls == []

    def test_single_flight_concurrent_requests(self):
        cache = SummaryCache()
        calls = []
        gate = threading.Event()

        def producer():
            calls.append(1)
            gate.wait(1.0)
            return Summary("m", "text", "mock", "t")

        results = []
        threads = [
            threading.Thread(target=lambda: results.append(cache.get_or_generate("m", producer)))
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        time.sleep(0.05)
        gate.set()
        for t in threads:
            t.join()
        assert len(calls) == 1
        assert len(results) == 8
        assert all(r is results[0] for r in results)

    def test_two_distinct_ids_two_calls(self):
        cache = SummaryCache()
        calls = []

        def producer(mid):
            calls.append(mid)
            return Summary(mid, "text", "mock", "t")

        cache.get_or_generate("a", lambda: producer("a"))
        cache.get_or_generate("b", lambda: producer("b"))
        assert calls == ["a", "b"]

    def test_errors_not_cached_and_propagate(self):
        cache = SummaryCache()
        attempts = []

        def failing():
            attempts.append(1)
            raise BackendError("boom")

        with pytest.raises(BackendError):
            cache.get_or_generate("m", failing)
        # next caller retries rather than seeing a poisoned entry
        ok = cache.get_or_generate("m", lambda: Summary("m", "x", "mock", "t"))
        assert ok.text == "x"
        assert len(attempts) == 1

    def test_error_propagates_to_waiters(self):
        cache = SummaryCache()
        gate = threading.Event()
        outcomes = []

        def failing():
            gate.wait(1.0)
            raise BackendError("boom")

        def worker():
            try:
                cache.get_or_generate("m", failing)
                outcomes.append("ok")
            except BackendError:
                outcomes.append("err")

        threads = [threading.Thread(target=worker) for _ in range(4)]
        for t in threads:
            t.start()
        time.sleep(0.05)
        gate.set()
        for t in threads:
            t.join()
        assert outcomes == ["err"] * 4


class TestScheduleSummarization:
    def test_leaf_schedule_no_summaries(self, fixture_engine):
        result = fixture_engine.generate_for(ABS)
        assert result.summaries == {}
        assert fixture_engine.backend.summary_calls() == []

    def test_summary_calls_in_schedule_order(self, fixture_engine):
        fixture_engine.generate_for(PROCESS)
        called = [
            c.user.splitlines()[0].removeprefix("Target method: ")
            for c in fixture_engine.backend.summary_calls()
        ]
        assert called == list(FIXTURE_SCHEDULE[:-1])

    def test_cache_prepopulation_skips_calls(self, fixture_engine):
        fixture_engine.cache.seed(Summary(ABS, "seeded", "mock", "t"))
        fixture_engine.cache.seed(Summary(SCALE, "seeded", "mock", "t"))
        fixture_engine.generate_for(PROCESS)
        assert len(fixture_engine.backend.summary_calls()) == len(FIXTURE_SCHEDULE) - 3

    def test_parent_prompt_contains_direct_callee_summaries(self, fixture_engine):
        result = fixture_engine.generate_for(PROCESS)
        transform_summary = result.summaries[TRANSFORM].text
        clamp_summary = result.summaries[CLAMP].text
        tick_summary = result.summaries[TICK].text
        assert transform_summary in result.bundle.user_message
        assert clamp_summary in result.bundle.user_message
        assert tick_summary in result.bundle.user_message

    def test_back_edge_rendered_as_stub(self, fixture_engine):
        fixture_engine.generate_for(PROCESS)
        tock_prompt = next(
            c.user for c in fixture_engine.backend.summary_calls()
            if c.user.startswith(f"Target method: {TOCK}")
        )
        assert f"- {TICK}: {STUB_MARKER}" in tock_prompt

    def test_failed_summary_becomes_stub_and_run_continues(
        self, project_index, call_graph, make_engine
    ):
        backend = MockChatBackend(responses={f"Target method: {ABS}": ["", "", ""]})
        engine = make_engine(project_index, call_graph, backend=backend)
        result = engine.generate_for(PROCESS)
        assert ABS in result.failed
        scale_prompt = next(
            c.user for c in backend.summary_calls()
            if c.user.startswith(f"Target method: {SCALE}")
        )
        assert f"- {ABS}: {STUB_MARKER}" in scale_prompt
        assert result.comment.javadoc.startswith("/**")

    def test_separate_summary_backend(self, project_index, call_graph):
        from smartdoc.config import Config

        comment_backend = MockChatBackend(model="commenter")
        summary_backend = MockChatBackend(model="summarizer")
        engine = GenerationEngine(
            project_index, call_graph, comment_backend, Config(),
            summary_backend=summary_backend,
        )
        result = engine.generate_for(SCALE)
        assert result.summaries[ABS].model == "summarizer"
        assert result.comment.model == "commenter"
        assert all(c.system.startswith("Summarize") for c in summary_backend.calls)
        assert all(c.system.startswith("Write a JavaDoc") for c in comment_backend.calls)

    def test_summary_clipped_to_budget(self, project_index, call_graph, make_engine):
        long_text = " ".join(f"w{i}" for i in range(500))
        backend = MockChatBackend(default=lambda s, u: long_text if s.startswith("Summarize") else VALID_BLOCK)
        engine = make_engine(project_index, call_graph, backend=backend, summary_budget=120)
        result = engine.generate_for(SCALE)
        assert token_estimate(result.summaries[ABS].text) <= 120


class TestAssemblePrompt:
    def test_no_callees_placeholder(self, fixture_engine):
        result = fixture_engine.generate_for(ABS)
        assert NO_CALLEES in result.bundle.user_message
        assert result.bundle.context_entries == ()

    def test_context_in_schedule_order(self, fixture_engine):
        result = fixture_engine.generate_for(PROCESS)
        listed = [e.method for e in result.bundle.context_entries]
        assert listed == list(FIXTURE_SCHEDULE[:-1])

    def test_reference_doc_never_in_prompts(self, fixture_engine, project_index):
        fixture_engine.generate_for(PROCESS)
        docs = [
            m.doc_comment for m in project_index.methods.values() if m.doc_comment
        ]
        for call in fixture_engine.backend.calls:
            for doc in docs:
                assert doc not in call.user

    def test_budget_drop_deepest_first_direct_callees_last(
        self, build_project, make_engine
    ):
        index, graph = build_project({
            "Deep.java": (
                "package p;\nclass Deep {\n"
                "  int root() { return a() + d(); }\n"
                "  int a() { return b(); }\n"
                "  int b() { return c(); }\n"
                "  int c() { return 1; }\n"
                "  int d() { return 2; }\n"
                "}\n"
            ),
        })
        filler = " ".join(f"word{i}" for i in range(40))
        backend = MockChatBackend(
            default=lambda s, u: filler if s.startswith("Summarize") else VALID_BLOCK
        )
        # generous budget first: everything fits
        engine = make_engine(index, graph, backend=backend, prompt_budget=6000)
        full = engine.generate_for("p.Deep#root/0")
        assert [e.method for e in full.bundle.context_entries] == [
            "p.Deep#c/0", "p.Deep#b/0", "p.Deep#a/0", "p.Deep#d/0",
        ]
        full_estimate = full.bundle.estimate()

        # now force two drops: c (depth 3) goes first, then b (depth 2)
        tight = full_estimate - 2 * token_estimate(filler)
        backend2 = MockChatBackend(
            default=lambda s, u: filler if s.startswith("Summarize") else VALID_BLOCK
        )
        engine2 = make_engine(index, graph, backend=backend2, prompt_budget=tight)
        trimmed = engine2.generate_for("p.Deep#root/0")
        kept = [e.method for e in trimmed.bundle.context_entries]
        assert kept == ["p.Deep#a/0", "p.Deep#d/0"]
        assert trimmed.bundle.estimate() <= tight

    def test_bundle_states_output_contract(self, fixture_engine):
        result = fixture_engine.generate_for(ABS)
        assert "exactly one JavaDoc comment block" in result.bundle.system_message


class TestDeterminism:
    def test_identical_runs_byte_identical(self, project_index, call_graph, make_engine):
        def run():
            engine = make_engine(project_index, call_graph, backend=MockChatBackend())
            out = []
            for mid in sorted(project_index.methods):
                result = engine.generate_for(mid)
                out.append(dataclasses.asdict(result.comment))
            return json.dumps(out, sort_keys=True).encode()

        assert run() == run()


class TestConcurrency:
    def test_limiter_bounds_parallel_backend_calls(
        self, project_index, call_graph, make_engine
    ):
        active = []
        peak = []
        lock = threading.Lock()

        class SlowBackend:
            model = "slow"

            def complete(self, system, user):
                with lock:
                    active.append(1)
                    peak.append(len(active))
                time.sleep(0.01)
                with lock:
                    active.pop()
                if system.startswith("Write a JavaDoc"):
                    return VALID_BLOCK
                return "summary text"

        engine = make_engine(project_index, call_graph, backend=SlowBackend(), concurrency=2)
        targets = [PROCESS, TRANSFORM, SCALE, CLAMP, TICK, TOCK, ABS]
        threads = [
            threading.Thread(target=engine.generate_for, args=(mid,)) for mid in targets
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert max(peak) <= 2

    def test_shared_subtree_unique_backend_calls(
        self, project_index, call_graph, make_engine
    ):
        backend = MockChatBackend()
        engine = make_engine(project_index, call_graph, backend=backend)
        targets = [PROCESS, TRANSFORM, SCALE, CLAMP, TICK, TOCK, ABS, PROCESS]
        threads = [
            threading.Thread(target=engine.generate_for, args=(mid,)) for mid in targets
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        summarized = {
            c.user.splitlines()[0].removeprefix("Target method: ")
            for c in backend.summary_calls()
        }
        assert len(backend.summary_calls()) == len(summarized) == 6
