"""Project scanning: enumerate `.java` files deterministically."""
from __future__ import annotations

import fnmatch
from pathlib import Path

from smartdoc.diagnostics import Diagnostic
from smartdoc.javasrc.model import SourceFile
from smartdoc.javasrc.parser import detect_package

DEFAULT_EXCLUDES = (
    "**/target/**",
    "**/build/**",
    "**/out/**",
    "**/.git/**",
    "**/.smartdoc/**",
    "**/node_modules/**",
    "**/generated-sources/**",
    "**/generated/**",
)


def load_source(root: Path, rel_path: str) -> SourceFile:
    """Read one file with newlines preserved and detect its package."""
    with (root / rel_path).open(encoding="utf-8", newline="") as fh:
        text = fh.read()
    return SourceFile(path=rel_path, text=text, package_name=detect_package(text))


def _matches_any(rel: str, globs: tuple[str, ...]) -> bool:
    for g in globs:
        if fnmatch.fnmatch(rel, g):
            return True
        # `**/x` should also match `x` at the root of the tree
        if g.startswith("**/") and fnmatch.fnmatch(rel, g[3:]):
            return True
    return False


def scan_project(
    root: str | Path,
    include: tuple[str, ...] = ("**/*.java",),
    exclude: tuple[str, ...] = DEFAULT_EXCLUDES,
) -> tuple[list[SourceFile], list[Diagnostic]]:
    """Enumerate and load sources in lexicographic path order.

    An unreadable root raises; an unreadable file is skipped with a diagnostic.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"project root does not exist: {root}")

    rels = []
    for path in root.rglob("*.java"):
        if not path.is_file():
            continue
        rel = path.relative_to(root).as_posix()
        if _matches_any(rel, include) and not _matches_any(rel, exclude):
            rels.append(rel)
    rels.sort()

    sources: list[SourceFile] = []
    diags: list[Diagnostic] = []
    for rel in rels:
        try:
            sources.append(load_source(root, rel))
        except (OSError, UnicodeDecodeError) as exc:
            diags.append(Diagnostic(rel, 1, f"skipped unreadable file: {exc}"))
    return sources, diags
