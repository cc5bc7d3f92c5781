"""Command-line driver tying scanning, generation, evaluation, and review together.

Exit codes: 0 success, 1 partial generation failure, 2 usage or config error.
Logs go to stderr; machine output (diffs, JSON, CSV paths) goes to stdout.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from smartdoc import __version__
from smartdoc.config import Config, load_config
from smartdoc.diagnostics import emit_all
from smartdoc.engine import GenerationEngine, prompts
from smartdoc.errors import (
    BackendError,
    ConfigError,
    SmartdocError,
    StructuredOutputError,
    UnknownMethodError,
)
from smartdoc.graph import dfs_schedule, rooted_subgraph
from smartdoc.harness import EvalError, aggregate, run_eval, select_corpus, write_outputs
from smartdoc.javasrc import parse_file, scan_project
from smartdoc.metrics.embedders import HttpEmbedder, MockEmbedder
from smartdoc.patcher import apply_patch, format_javadoc, plan_patch, unified_diff, write_atomic
from smartdoc.service import SMARTDOC_DIR, build_engine, serve


def _fail(message: str, code: int = 2) -> None:
    click.echo(f"smartdoc: {message}", err=True)
    sys.exit(code)


def _effective_config(ctx: click.Context, root: Path) -> Config:
    params = ctx.obj or {}
    overrides = {
        key: params.get(key)
        for key in ("backend", "model", "endpoint", "max_retries", "depth", "concurrency")
    }
    try:
        return load_config(root, params.get("config_path"), overrides)
    except ConfigError as exc:
        _fail(str(exc))


def _engine_for(root: Path, config: Config) -> GenerationEngine:
    if not root.is_dir():
        _fail(f"project root does not exist: {root}")
    engine = build_engine(root, config)
    emit_all(list(engine.index.diagnostics))
    return engine


@click.group()
@click.version_option(version=__version__, prog_name="smartdoc")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Config file (default: <root>/.smartdoc/config.toml).")
@click.option("--backend", type=click.Choice(["mock", "http"]), default=None)
@click.option("--model", default=None)
@click.option("--endpoint", default=None)
@click.option("--max-retries", "max_retries", type=int, default=None)
@click.option("--depth", type=int, default=None)
@click.option("--concurrency", type=int, default=None)
@click.pass_context
def main(ctx, **params):
    """Context-aware JavaDoc generation for Java projects."""
    ctx.obj = params


@main.command()
@click.argument("root", type=click.Path(path_type=Path), default=".")
@click.pass_context
def scan(ctx, root: Path):
    """List every method with its file and has-doc flag."""
    config = _effective_config(ctx, root)
    if not root.is_dir():
        _fail(f"project root does not exist: {root}")
    sources, diags = scan_project(root, config.include, config.exclude)
    emit_all(diags)
    results = [parse_file(s) for s in sources]
    for res in results:
        emit_all(list(res.diagnostics))
    click.echo("METHOD\tFILE\tDOC")
    rows = sorted(
        (m for res in results for m in res.methods), key=lambda m: m.id
    )
    for m in rows:
        click.echo(f"{m.id}\t{m.file}\t{'doc' if m.has_doc else 'nodoc'}")


@main.command()
@click.argument("root", type=click.Path(path_type=Path), default=".")
@click.option("--method", "method_ids", multiple=True, help="Target method id; repeatable.")
@click.option("--all", "all_undocumented", is_flag=True,
              help="Target every internal method lacking a doc comment.")
@click.option("--write", "write_files", is_flag=True, help="Edit files in place.")
@click.option("--out-dir", type=click.Path(path_type=Path), default=None,
              help="Write one .diff per touched file instead of stdout.")
@click.pass_context
def gen(ctx, root: Path, method_ids, all_undocumented, write_files, out_dir):
    """Generate comments and emit diffs (default) or edit files (--write)."""
    config = _effective_config(ctx, root)
    engine = _engine_for(root, config)
    click.echo(f"prompt templates sha256={prompts.template_hash()}", err=True)

    if all_undocumented:
        targets = [
            mid for mid in engine.index.sorted_ids()
            if not engine.index.methods[mid].has_doc
        ]
    else:
        targets = list(method_ids)
        if not targets:
            _fail("nothing to do: pass --method <id> or --all")
        for mid in targets:
            if mid not in engine.index.methods:
                _fail(f"unknown method: {mid}")

    comments = {}
    failures = []
    for mid in targets:
        try:
            comments[mid] = engine.generate_for(mid).comment
        except (StructuredOutputError, BackendError, UnknownMethodError) as exc:
            failures.append(mid)
            click.echo(f"smartdoc: generation failed for {mid}: {exc}", err=True)

    by_file: dict[str, list[str]] = {}
    for mid in comments:
        by_file.setdefault(engine.index.methods[mid].file, []).append(mid)

    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for file in sorted(by_file):
        original = (root / file).read_text(encoding="utf-8")
        text = original
        # patch bottom-up so earlier spans stay valid without re-parsing
        for mid in sorted(by_file[file],
                          key=lambda m: engine.index.methods[m].decl_start,
                          reverse=True):
            decl = engine.index.methods[mid]
            formatted = format_javadoc(comments[mid].javadoc, decl.indent)
            text = apply_patch(text, plan_patch(decl, formatted, text))
        if write_files:
            write_atomic(root / file, text)
            click.echo(f"patched {file}", err=True)
        else:
            diff = unified_diff(original, text, file)
            if out_dir is not None:
                target = out_dir / (file.replace("/", "_") + ".diff")
                target.write_text(diff, encoding="utf-8")
                click.echo(str(target))
            else:
                click.echo(diff, nl=False)

    engine.cache.dump_json(root / SMARTDOC_DIR / "summary_cache.json")
    if failures:
        sys.exit(1)


@main.command("eval")
@click.argument("root", type=click.Path(path_type=Path), default=".")
@click.option("--out-dir", type=click.Path(path_type=Path), default=None)
@click.option("--emit-plot-data", is_flag=True)
@click.option("--raw-tokens", is_flag=True, help="Score without @tag stripping.")
@click.option("--min-methods", type=int, default=None)
@click.option("--min-ref-tokens", type=int, default=None)
@click.pass_context
def eval_cmd(ctx, root: Path, out_dir, emit_plot_data, raw_tokens, min_methods, min_ref_tokens):
    """Hold out human comments, regenerate, score, and aggregate per package."""
    config = _effective_config(ctx, root)
    engine = _engine_for(root, config)
    min_methods = min_methods if min_methods is not None else config.min_methods
    min_ref_tokens = (
        min_ref_tokens if min_ref_tokens is not None else config.min_ref_tokens
    )
    raw = raw_tokens or config.raw_tokens
    try:
        corpus = select_corpus(engine.index, min_methods, min_ref_tokens, raw)
    except EvalError as exc:
        _fail(str(exc))
    if config.embedder == "http":
        embedder = HttpEmbedder(config.embed_endpoint, config.embed_model)
    else:
        embedder = MockEmbedder()
    click.echo(
        f"evaluating {len(corpus)} methods across "
        f"{len({c.package for c in corpus})} packages", err=True,
    )
    results = run_eval(corpus, engine, embedder, raw)
    reports, manifest = aggregate(results, engine)
    out = out_dir if out_dir is not None else root / SMARTDOC_DIR / "eval"
    paths = write_outputs(results, reports, manifest, out, emit_plot_data)
    engine.cache.dump_json(root / SMARTDOC_DIR / "summary_cache.json")
    for name in ("items", "packages", "manifest", "plot"):
        if name in paths:
            click.echo(str(paths[name]))
    if manifest["failures"]:
        click.echo(f"smartdoc: {manifest['failures']} item(s) failed", err=True)
        sys.exit(1)


@main.command()
@click.argument("root", type=click.Path(path_type=Path), default=".")
@click.option("--method", "method_id", required=True)
@click.pass_context
def graph(ctx, root: Path, method_id: str):
    """Emit the rooted subgraph and visiting schedule as JSON."""
    config = _effective_config(ctx, root)
    engine = _engine_for(root, config)
    try:
        schedule = dfs_schedule(engine.graph, method_id, depth_cap=config.depth)
    except UnknownMethodError as exc:
        _fail(str(exc))
    click.echo(json.dumps(rooted_subgraph(engine.graph, schedule), indent=2))


@main.command("serve")
@click.argument("root", type=click.Path(path_type=Path), default=".")
@click.pass_context
def serve_cmd(ctx, root: Path):
    """Run the local review service (localhost only)."""
    config = _effective_config(ctx, root)
    if not root.is_dir():
        _fail(f"project root does not exist: {root}")
    try:
        serve(root, config)
    except SmartdocError as exc:
        _fail(str(exc))



@main.group()
def feedback():
    """Inspect collected feedback."""


@feedback.command("export")
@click.argument("root", type=click.Path(path_type=Path), default=".")
def feedback_export(root: Path):
    """Print all feedback records as a JSON array."""
    path = root / SMARTDOC_DIR / "feedback.jsonl"
    records = []
    if path.is_file():
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                records.append(json.loads(line))
    click.echo(json.dumps(records, indent=2))


if __name__ == "__main__":
    main()
