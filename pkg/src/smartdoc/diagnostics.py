"""Line-oriented diagnostics in `path:line: message` form, emitted to stderr."""
from __future__ import annotations

import sys
from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    path: str
    line: int
    message: str

    def render(self) -> str:
        return f"{self.path}:{self.line}: {self.message}"


def emit(diag: Diagnostic) -> None:
    print(diag.render(), file=sys.stderr)


def emit_all(diags: list[Diagnostic]) -> None:
    for d in diags:
        emit(d)
