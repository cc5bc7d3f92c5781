"""Local review service: generation queue, accept/edit/reject, feedback log.

State lives in append-only JSONL files under `.smartdoc/` in the project
root. The service binds localhost only and carries no user identity anywhere
in its schemas.
"""
from __future__ import annotations

import dataclasses
import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from smartdoc.config import Config, api_key
from smartdoc.engine import GenerationEngine, MockChatBackend
from smartdoc.engine.backends import HttpChatBackend
from smartdoc.engine.generator import validate_extract
from smartdoc.errors import SmartdocError, StalePatchError, ValidationError
from smartdoc.graph import (
    build_call_graph,
    build_index,
    dfs_schedule,
    resolve_call,
    rooted_subgraph,
)
from smartdoc.javasrc import parse_file, scan_project
from smartdoc.javasrc.scan import load_source
from smartdoc.patcher import apply_patch, format_javadoc, plan_patch, unified_diff, write_atomic

SMARTDOC_DIR = ".smartdoc"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ----------------------------------------------------------------------
# persistence
# ----------------------------------------------------------------------
@dataclass
class Review:
    id: str
    method: str
    file: str
    original_doc: Optional[str]
    status: str = "pending"          # pending | accepted | rejected | edited | failed
    ready: bool = False
    proposed: Optional[str] = None
    diff: Optional[str] = None
    context: list = field(default_factory=list)
    model: str = ""
    retries: int = 0
    error: Optional[str] = None
    created_at: str = field(default_factory=_utc_now)
    updated_at: str = field(default_factory=_utc_now)

    @property
    def state(self) -> str:
        if self.status == "pending" and self.ready:
            return "ready"
        return self.status

    def to_dict(self) -> dict:
        payload = dataclasses.asdict(self)
        payload["state"] = self.state
        return payload


class ReviewStore:
    """In-memory review map backed by an append-only JSONL snapshot log."""

    def __init__(self, state_dir: Path):
        self.path = state_dir / "reviews.jsonl"
        self._lock = threading.Lock()
        self._reviews: dict[str, Review] = {}
        self._id_locks: dict[str, threading.Lock] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.is_file():
            return
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            data = json.loads(line)
            data.pop("state", None)
            review = Review(**data)
            self._reviews[review.id] = review

    def create(self, method: str, file: str, original_doc: Optional[str]) -> Review:
        review = Review(id=uuid.uuid4().hex[:12], method=method, file=file,
                        original_doc=original_doc)
        with self._lock:
            self._reviews[review.id] = review
        self.persist(review)
        return review

    def persist(self, review: Review) -> None:
        review.updated_at = _utc_now()
        line = json.dumps(review.to_dict(), sort_keys=True)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def get(self, review_id: str) -> Review | None:
        with self._lock:
            return self._reviews.get(review_id)

    def all(self) -> list[Review]:
        with self._lock:
            return sorted(self._reviews.values(), key=lambda r: r.created_at)

    def lock_for(self, review_id: str) -> threading.Lock:
        with self._lock:
            return self._id_locks.setdefault(review_id, threading.Lock())


class FeedbackLog:
    """Append-only anonymous feedback; one JSON object per line, atomic."""

    FIELDS = ("timestamp", "model", "rating", "text", "review_id")

    def __init__(self, state_dir: Path):
        self.path = state_dir / "feedback.jsonl"
        self._lock = threading.Lock()

    def append(self, model: str, rating: int, text: Optional[str],
               review_id: str) -> dict:
        record = {
            "timestamp": _utc_now(),
            "model": model,
            "rating": rating,
            "text": text,
            "review_id": review_id,
        }
        line = json.dumps(record, sort_keys=True) + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
        return record


# ----------------------------------------------------------------------
# request bodies
# ----------------------------------------------------------------------
class GenerateRequest(BaseModel):
    method_id: str


class DecisionRequest(BaseModel):
    decision: Literal["accept", "reject", "edit"]
    edited_text: Optional[str] = None


class FeedbackRequest(BaseModel):
    rating: int = Field(ge=1, le=5)
    model: str
    text: Optional[str] = None
    review_id: str


# ----------------------------------------------------------------------
# app assembly
# ----------------------------------------------------------------------
def build_backend(config: Config, model: str = ""):
    model = model or config.model
    if config.backend == "http":
        return HttpChatBackend(
            endpoint=config.endpoint,
            model=model,
            api_key=api_key(),
            temperature=config.temperature,
            timeout=config.timeout,
        )
    return MockChatBackend(model=model or "mock-model")


def build_engine(project_root: Path, config: Config, backend=None) -> GenerationEngine:
    sources, _ = scan_project(project_root, config.include, config.exclude)
    results = [parse_file(s) for s in sources]
    index = build_index(results)
    resolutions = [(s, resolve_call(s, index)) for s in index.call_sites]
    graph = build_call_graph(index, resolutions)
    backend = backend or build_backend(config)
    summary_backend = (
        build_backend(config, config.summary_model) if config.summary_model else None
    )
    return GenerationEngine(
        index, graph, backend, config, summary_backend=summary_backend
    )


_FALLBACK_PAGE = """<!doctype html>
<html><head><title>smartdoc</title></head>
<body><h1>smartdoc review service</h1>
<p>No UI assets are built. The JSON API is live under <code>/api/</code>.</p>
</body></html>
"""


def _ui_directory(config: Config) -> Path | None:
    candidates = []
    if config.ui_dir:
        candidates.append(Path(config.ui_dir))
    here = Path(__file__).resolve()
    if len(here.parents) >= 3:
        candidates.append(here.parents[2] / "frontend" / "dist")
    candidates.append(Path.cwd() / "frontend" / "dist")
    for cand in candidates:
        if (cand / "index.html").is_file():
            return cand
    return None


def create_app(
    project_root: str | Path,
    config: Config | None = None,
    backend=None,
    engine: GenerationEngine | None = None,
) -> FastAPI:
    root = Path(project_root)
    config = config or Config()
    engine = engine or build_engine(root, config, backend)
    state_dir = root / SMARTDOC_DIR
    store = ReviewStore(state_dir)
    feedback = FeedbackLog(state_dir)
    executor = ThreadPoolExecutor(max_workers=max(1, config.concurrency),
                                  thread_name_prefix="smartdoc-gen")

    app = FastAPI(title="smartdoc", version="0.1.0")
    app.state.engine = engine
    app.state.store = store
    app.state.feedback = feedback
    app.state.project_root = root

    # ------------------------------------------------------------------
    def _generate_job(review: Review) -> None:
        try:
            result = engine.generate_for(review.method)
            decl = engine.decl(review.method)
            formatted = format_javadoc(result.comment.javadoc, decl.indent)
            current = load_source(root, decl.file).text
            patch = plan_patch(decl, formatted, current)
            preview = apply_patch(current, patch)
            review.proposed = formatted
            review.diff = unified_diff(current, preview, decl.file)
            review.context = [
                {
                    "method": entry.method,
                    "text": entry.text,
                    "stub": entry.is_stub,
                    "depth": result.schedule.depth.get(entry.method, 1),
                }
                for entry in result.bundle.context_entries
            ]
            review.model = result.comment.model
            review.retries = result.comment.retries
            review.ready = True
        except SmartdocError as exc:
            review.status = "failed"
            review.error = str(exc)
        store.persist(review)

    # ------------------------------------------------------------------
    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/methods")
    def methods(package: str = "") -> list[dict]:
        out = []
        for mid in engine.index.sorted_ids():
            decl = engine.index.methods[mid]
            if package and decl.package != package:
                continue
            out.append({
                "id": mid,
                "file": decl.file,
                "package": decl.package,
                "name": decl.name,
                "has_doc": decl.has_doc,
            })
        return out

    @app.post("/api/generate", status_code=202)
    def generate(body: GenerateRequest) -> dict:
        if body.method_id not in engine.index.methods:
            raise HTTPException(404, f"unknown method: {body.method_id}")
        decl = engine.index.methods[body.method_id]
        review = store.create(body.method_id, decl.file, decl.doc_comment)
        executor.submit(_generate_job, review)
        return {"review_id": review.id}

    @app.get("/api/reviews")
    def reviews() -> list[dict]:
        return [r.to_dict() for r in store.all()]

    @app.get("/api/reviews/{review_id}")
    def review_detail(review_id: str) -> dict:
        review = store.get(review_id)
        if review is None:
            raise HTTPException(404, "unknown review id")
        return review.to_dict()

    @app.post("/api/reviews/{review_id}/decision")
    def decide(review_id: str, body: DecisionRequest) -> dict:
        review = store.get(review_id)
        if review is None:
            raise HTTPException(404, "unknown review id")
        with store.lock_for(review_id):
            if review.status != "pending" or not review.ready:
                raise HTTPException(409, f"review is {review.state}, not decidable")
            if body.decision == "reject":
                review.status = "rejected"
                store.persist(review)
                return review.to_dict()

            if body.decision == "edit":
                if not body.edited_text:
                    raise HTTPException(422, "edit requires edited_text")
                try:
                    block = validate_extract(body.edited_text)
                except ValidationError as exc:
                    raise HTTPException(422, f"invalid JavaDoc: {exc}") from exc
            else:
                block = review.proposed

            try:
                current_src = load_source(root, review.file)
                reparsed = parse_file(current_src)
                decl = next((m for m in reparsed.methods if m.id == review.method), None)
                if decl is None:
                    raise StalePatchError(
                        f"{review.method} no longer present in {review.file}"
                    )
                formatted = format_javadoc(block, decl.indent)
                patch = plan_patch(decl, formatted, current_src.text)
                new_text = apply_patch(current_src.text, patch)
                write_atomic(root / review.file, new_text)
            except StalePatchError as exc:
                raise HTTPException(409, f"stale file: {exc}") from exc

            review.proposed = formatted
            review.status = "accepted" if body.decision == "accept" else "edited"
            store.persist(review)
            return review.to_dict()

    @app.post("/api/feedback", status_code=201)
    def post_feedback(body: FeedbackRequest) -> dict:
        return feedback.append(body.model, body.rating, body.text, body.review_id)

    @app.get("/api/graph/{method_id:path}")
    def graph_view(method_id: str) -> dict:
        if method_id not in engine.index.methods:
            raise HTTPException(404, f"unknown method: {method_id}")
        schedule = dfs_schedule(engine.graph, method_id, depth_cap=engine.config.depth)
        return rooted_subgraph(engine.graph, schedule)

    ui_dir = _ui_directory(config)
    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def fallback_index() -> str:
            return _FALLBACK_PAGE

    return app


def serve(project_root: str | Path, config: Config) -> None:
    """Run the service on localhost; a busy port is a fatal startup error."""
    import socket

    import uvicorn

    with socket.socket() as probe:
        try:
            probe.bind(("127.0.0.1", config.port))
        except OSError as exc:
            raise SmartdocError(
                f"cannot bind 127.0.0.1:{config.port}: {exc}"
            ) from exc

    app = create_app(project_root, config)
    uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="warning")
