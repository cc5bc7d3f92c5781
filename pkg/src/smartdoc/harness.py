"""Evaluation protocol: hold out human comments, regenerate, score, aggregate.

Package selection requires a minimum number of sufficiently documented
methods; held-out references never reach the generator (prompts are built
from doc-stripped source throughout the engine).
"""
from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from smartdoc.engine import GenerationEngine, prompts
from smartdoc.engine.generator import GeneratedComment
from smartdoc.errors import SmartdocError
from smartdoc.graph import ProjectIndex
from smartdoc.metrics import ScoreTriple, bertscore, bleu, normalize, rouge1
from smartdoc.metrics.embedders import Embedder


class EvalError(SmartdocError):
    """The evaluation cannot proceed (for example no qualifying packages)."""


@dataclass(frozen=True)
class CorpusItem:
    method: str
    package: str
    reference: str


@dataclass
class ItemResult:
    item: CorpusItem
    status: str                     # "ok" | "failed"
    bleu: float = 0.0
    rouge: ScoreTriple = ScoreTriple.zero()
    bert: ScoreTriple = ScoreTriple.zero()
    retries: int = 0
    generated: GeneratedComment | None = None


@dataclass(frozen=True)
class PackageReport:
    package: str
    n: int
    bleu_mean: float
    rouge_mean: ScoreTriple
    bert_mean: ScoreTriple


def select_corpus(
    index: ProjectIndex,
    min_methods: int = 10,
    min_ref_tokens: int = 5,
    raw_tokens: bool = False,
) -> list[CorpusItem]:
    """Keep packages holding enough methods with substantive doc comments."""
    strip = not raw_tokens
    per_package: dict[str, list[CorpusItem]] = {}
    for mid in sorted(index.methods):
        decl = index.methods[mid]
        if decl.doc_comment is None:
            continue
        if len(normalize(decl.doc_comment, strip_tags=strip)) < min_ref_tokens:
            continue
        per_package.setdefault(decl.package, []).append(
            CorpusItem(method=mid, package=decl.package, reference=decl.doc_comment)
        )
    corpus: list[CorpusItem] = []
    for package in sorted(per_package):
        items = per_package[package]
        if len(items) >= min_methods:
            corpus.extend(items)
    if not corpus:
        raise EvalError(
            f"no package has {min_methods}+ methods with references of "
            f"{min_ref_tokens}+ tokens"
        )
    return corpus


def score_pair(
    generated: str,
    reference: str,
    embedder: Embedder,
    raw_tokens: bool = False,
) -> tuple[float, ScoreTriple, ScoreTriple]:
    strip = not raw_tokens
    hyp = normalize(generated, strip_tags=strip)
    ref = normalize(reference, strip_tags=strip)
    return bleu(hyp, [ref]), rouge1(hyp, ref), bertscore(hyp, ref, embedder)


def run_eval(
    corpus: list[CorpusItem],
    engine: GenerationEngine,
    embedder: Embedder,
    raw_tokens: bool = False,
) -> list[ItemResult]:
    """Generate and score each item; failures are kept but not scored."""

    def evaluate(item: CorpusItem) -> ItemResult:
        try:
            outcome = engine.generate_for(item.method)
        except SmartdocError:
            return ItemResult(item=item, status="failed")
        b, r, bs = score_pair(
            outcome.comment.javadoc, item.reference, embedder, raw_tokens
        )
        return ItemResult(
            item=item, status="ok", bleu=b, rouge=r, bert=bs,
            retries=outcome.comment.retries, generated=outcome.comment,
        )

    workers = max(1, engine.config.concurrency)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, corpus))


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _mean_triple(triples: list[ScoreTriple]) -> ScoreTriple:
    return ScoreTriple(
        _mean([t.precision for t in triples]),
        _mean([t.recall for t in triples]),
        _mean([t.f1 for t in triples]),
    )


def aggregate(results: list[ItemResult], engine: GenerationEngine) -> tuple[list[PackageReport], dict]:
    """Per-package means over successful items, plus the run manifest."""
    ok = [r for r in results if r.status == "ok"]
    per_package: dict[str, list[ItemResult]] = {}
    for r in ok:
        per_package.setdefault(r.item.package, []).append(r)
    reports = [
        PackageReport(
            package=package,
            n=len(items),
            bleu_mean=_mean([r.bleu for r in items]),
            rouge_mean=_mean_triple([r.rouge for r in items]),
            bert_mean=_mean_triple([r.bert for r in items]),
        )
        for package, items in sorted(per_package.items())
    ]
    manifest = {
        "model": engine.backend.model,
        "prompt_template_hash": prompts.template_hash(),
        "config": dataclasses.asdict(engine.config),
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "items": len(results),
        "failures": sum(1 for r in results if r.status == "failed"),
    }
    return reports, manifest


ITEM_COLUMNS = (
    "method_id", "package", "bleu", "rouge_p", "rouge_r", "rouge_f1",
    "bert_p", "bert_r", "bert_f1", "retries", "status",
)

PACKAGE_COLUMNS = (
    "package", "n", "bleu", "rouge_p", "rouge_r", "rouge_f1",
    "bert_p", "bert_r", "bert_f1",
)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_outputs(
    results: list[ItemResult],
    reports: list[PackageReport],
    manifest: dict,
    out_dir: str | Path,
    emit_plot_data: bool = False,
) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "items": out / "eval_items.csv",
        "packages": out / "eval_packages.csv",
        "manifest": out / "manifest.json",
    }

    ordered = sorted(results, key=lambda r: (r.item.package, r.item.method))
    with paths["items"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ITEM_COLUMNS)
        for r in ordered:
            writer.writerow([
                r.item.method, r.item.package, _fmt(r.bleu),
                _fmt(r.rouge.precision), _fmt(r.rouge.recall), _fmt(r.rouge.f1),
                _fmt(r.bert.precision), _fmt(r.bert.recall), _fmt(r.bert.f1),
                r.retries, r.status,
            ])

    with paths["packages"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PACKAGE_COLUMNS)
        for p in reports:
            writer.writerow([
                p.package, p.n, _fmt(p.bleu_mean),
                _fmt(p.rouge_mean.precision), _fmt(p.rouge_mean.recall), _fmt(p.rouge_mean.f1),
                _fmt(p.bert_mean.precision), _fmt(p.bert_mean.recall), _fmt(p.bert_mean.f1),
            ])

    paths["manifest"].write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    if emit_plot_data:
        paths["plot"] = out / "plot_data.json"
        series = [
            {
                "package": p.package,
                "n": p.n,
                "bleu": p.bleu_mean,
                "rouge1": dataclasses.asdict(p.rouge_mean),
                "bertscore": dataclasses.asdict(p.bert_mean),
            }
            for p in reports
        ]
        paths["plot"].write_text(json.dumps(series, indent=2) + "\n", encoding="utf-8")
    return paths
