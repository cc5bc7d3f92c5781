"""JavaDoc formatting and idempotent source rewriting.

Patches are planned against a parse of the current file text, carry hashes of
the bytes they replace, and refuse to apply if the file drifted. Line endings
of the original file are preserved.
"""
from __future__ import annotations

import difflib
import hashlib
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from smartdoc.errors import StalePatchError
from smartdoc.javasrc.model import MethodDecl, Span

_CONTEXT_WINDOW = 64


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def format_javadoc(javadoc: str, indent: str) -> str:
    """Normalize a validated block: `/**`, ` * ` rails, ` */`, given indent.

    Original line breaks are preserved; leading and trailing blank content
    lines are dropped. Formatting is idempotent.
    """
    inner = javadoc.strip()
    if inner.startswith("/**"):
        inner = inner[3:]
    if inner.endswith("*/"):
        inner = inner[:-2]
    lines = []
    for raw in inner.split("\n"):
        line = raw.strip()
        if line.startswith("*"):
            line = line[1:]
            if line.startswith(" "):
                line = line[1:]
        lines.append(line.rstrip())
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    out = [indent + "/**"]
    for line in lines:
        out.append(indent + " * " + line if line else indent + " *")
    out.append(indent + " */")
    return "\n".join(out)


@dataclass(frozen=True)
class Patch:
    file: str
    method: str
    replace_span: Span
    new_text: str
    expected_hash: str   # content of replace_span at plan time
    context_hash: str    # window following the span, guards insertions


def plan_patch(method: MethodDecl, formatted: str, file_text: str) -> Patch:
    """Plan the splice that installs `formatted` as the method's doc comment.

    Replaces an existing doc block (whole lines when it sits alone on them);
    otherwise inserts above the declaration's first line, annotations
    included.
    """
    b0, b1 = method.body_span
    if file_text[b0:b1] != method.body_text:
        raise StalePatchError(
            f"{method.file} changed since parse; re-scan before patching {method.id}"
        )
    newline = "\r\n" if "\r\n" in file_text else "\n"
    block = formatted.replace("\n", newline) if newline != "\n" else formatted

    if method.doc_span is not None:
        d0, d1 = method.doc_span
        if file_text[d0:d1] != method.doc_comment:
            raise StalePatchError(
                f"doc comment of {method.id} changed since parse"
            )
        line_start = file_text.rfind("\n", 0, d0) + 1
        after = file_text[d1:]
        eol = after.find("\n")
        own_lines = (
            file_text[line_start:d0].strip() == ""
            and (after[:eol] if eol >= 0 else after).strip() == ""
        )
        if own_lines:
            start = line_start
            end = d1 + (eol + 1 if eol >= 0 else len(after))
            new_text = block + newline
        else:
            start, end = d0, d1
            new_text = block.lstrip()
    else:
        line_start = file_text.rfind("\n", 0, method.decl_start) + 1
        start = end = line_start
        new_text = block + newline

    return Patch(
        file=method.file,
        method=method.id,
        replace_span=(start, end),
        new_text=new_text,
        expected_hash=_sha(file_text[start:end]),
        context_hash=_sha(file_text[end:end + _CONTEXT_WINDOW]),
    )


def apply_patch(file_text: str, patch: Patch) -> str:
    """Single splice; everything outside the span is byte-identical."""
    start, end = patch.replace_span
    if end > len(file_text):
        raise StalePatchError(f"{patch.file}: patch span exceeds file size")
    if _sha(file_text[start:end]) != patch.expected_hash:
        raise StalePatchError(f"{patch.file}: span content changed since planning")
    if _sha(file_text[end:end + _CONTEXT_WINDOW]) != patch.context_hash:
        raise StalePatchError(f"{patch.file}: context after span changed since planning")
    return file_text[:start] + patch.new_text + file_text[end:]


def unified_diff(original: str, patched: str, path: str) -> str:
    """`patch -p0` compatible diff; empty string when nothing changed."""
    lines = difflib.unified_diff(
        original.splitlines(keepends=True),
        patched.splitlines(keepends=True),
        fromfile=path,
        tofile=path,
    )
    return "".join(lines)


def write_atomic(path: str | Path, text: str) -> None:
    """Replace the file via temp-file-and-rename; newlines written verbatim."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if path.exists():
            os.chmod(tmp_name, path.stat().st_mode)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
