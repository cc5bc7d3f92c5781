"""Data model for parsed Java sources.

Spans are half-open offsets into the file's decoded text. Every structure is
immutable after construction and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from smartdoc.diagnostics import Diagnostic

Span = tuple[int, int]


def method_id(package: str, class_chain: str, name: str, arity: int) -> str:
    """Canonical method identity: ``package.Class#name/arity``."""
    prefix = f"{package}.{class_chain}" if package else class_chain
    return f"{prefix}#{name}/{arity}"


def split_method_id(mid: str) -> tuple[str, str, int]:
    """Return (class_fqn, name, arity) for a canonical id."""
    class_fqn, _, rest = mid.partition("#")
    name, _, arity = rest.partition("/")
    return class_fqn, name, int(arity)


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str
    package_name: str = ""


@dataclass(frozen=True)
class MethodDecl:
    id: str
    file: str
    class_fqn: str
    name: str
    arity: int
    param_types: tuple[str, ...]
    signature_span: Span
    body_span: Span
    body_text: str
    doc_comment: str | None
    indent: str
    decl_start: int          # first token of the declaration, annotations included
    decl_line: int           # 1-based line of decl_start
    doc_span: Span | None    # location of doc_comment when present
    header_text: str         # modifiers + return type + name + params
    decl_text: str           # annotations + header + body, doc excluded

    @property
    def package(self) -> str:
        return self.class_fqn.rsplit(".", 1)[0] if "." in self.class_fqn else ""

    @property
    def signature(self) -> str:
        return " ".join(self.header_text.split())

    @property
    def has_doc(self) -> bool:
        return self.doc_comment is not None


@dataclass(frozen=True)
class CallSite:
    caller: str
    callee_name: str
    callee_arity: int
    receiver_hint: str | None
    span: Span


@dataclass(frozen=True)
class ParseResult:
    source: SourceFile
    methods: tuple[MethodDecl, ...] = ()
    call_sites: tuple[CallSite, ...] = ()
    types: tuple[str, ...] = ()  # FQNs of all declared classes/interfaces/enums
    diagnostics: tuple[Diagnostic, ...] = field(default=())
