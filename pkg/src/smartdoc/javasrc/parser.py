"""Method and call-site extraction from Java sources.

This is deliberately not a full Java front end: it recognizes type and method
declarations, JavaDoc association, and `name(args)` call expressions, which is
all the downstream analysis consumes. Unparseable stretches are skipped with a
diagnostic; parsing never raises on malformed input.
"""
from __future__ import annotations

from smartdoc.diagnostics import Diagnostic
from smartdoc.javasrc import lexer
from smartdoc.javasrc.lexer import COMMENT_KINDS, IDENT, JAVADOC, PUNCT, Token
from smartdoc.javasrc.model import CallSite, MethodDecl, ParseResult, SourceFile, method_id

MODIFIER_WORDS = frozenset({
    "public", "protected", "private", "static", "final", "abstract",
    "default", "synchronized", "native", "strictfp", "transient",
    "volatile", "sealed",
})

PRIMITIVES = frozenset({
    "void", "var", "int", "long", "short", "byte", "char", "boolean",
    "float", "double",
})

TYPE_DECL_KEYWORDS = frozenset({"class", "interface", "enum", "record"})

# Identifiers that look like `name(` but never denote a method call.
NON_CALL_NAMES = frozenset({
    "if", "for", "while", "switch", "catch", "return", "new", "assert",
    "throw", "synchronized", "this", "super", "try", "do", "else", "break",
    "continue", "case", "default", "instanceof", "finally", "yield",
})

# Identifiers after which a call expression may legally start.
CALL_PRECEDING_WORDS = frozenset({
    "return", "throw", "assert", "case", "yield", "else", "do",
})

# Tokens allowed inside a generic type-argument list; anything else means the
# `<` was a comparison operator.
_GENERIC_OK_PUNCT = frozenset({"<", ">", ",", ".", "?", "[", "]", "&", "@"})
_GENERIC_OK_WORDS = frozenset({"extends", "super"})


def parse_file(source: SourceFile) -> ParseResult:
    try:
        return _Parser(source).run()
    except Exception as exc:  # noqa: BLE001 - tolerance contract
        diag = Diagnostic(source.path, 1, f"unrecoverable parse failure: {exc!r}")
        return ParseResult(source=source, diagnostics=(diag,))


class _Parser:
    def __init__(self, source: SourceFile):
        self.src = source
        self.text = source.text
        all_tokens = lexer.tokenize(source.text)
        self.sig: list[Token] = []
        self.gaps: list[list[Token]] = []
        gap: list[Token] = []
        for tok in all_tokens:
            if tok.kind in COMMENT_KINDS:
                gap.append(tok)
            else:
                self.sig.append(tok)
                self.gaps.append(gap)
                gap = []
        self.i = 0
        self.methods: list[MethodDecl] = []
        self.calls: list[CallSite] = []
        self.types: list[str] = []
        self.diags: list[Diagnostic] = []

    # ------------------------------------------------------------------
    # cursor helpers
    # ------------------------------------------------------------------
    def eof(self) -> bool:
        return self.i >= len(self.sig)

    def cur(self) -> Token | None:
        return self.sig[self.i] if self.i < len(self.sig) else None

    def peek(self, k: int = 1) -> Token | None:
        j = self.i + k
        return self.sig[j] if j < len(self.sig) else None

    def at(self, text: str) -> bool:
        t = self.cur()
        return t is not None and t.text == text

    def advance(self) -> Token:
        tok = self.sig[self.i]
        self.i += 1
        return tok

    def diag(self, tok: Token | None, message: str) -> None:
        line = tok.line if tok else 1
        self.diags.append(Diagnostic(self.src.path, line, message))

    def skip_balanced(self) -> int | None:
        """Consume from an opening bracket through its match; returns close index."""
        pairs = {"(": ")", "[": "]", "{": "}"}
        opener = self.cur()
        if opener is None or opener.text not in pairs:
            return None
        stack = [pairs[opener.text]]
        self.advance()
        while not self.eof():
            t = self.advance()
            if t.text in pairs:
                stack.append(pairs[t.text])
            elif t.kind == PUNCT and t.text in (")", "]", "}"):
                if t.text == stack[-1]:
                    stack.pop()
                    if not stack:
                        return self.i - 1
                else:
                    # mismatched close: bail out of the region
                    return self.i - 1
        return None

    def try_skip_generics(self) -> bool:
        """Consume a `<...>` type-argument list if the contents look type-like."""
        if not self.at("<"):
            return False
        j = self.i + 1
        depth = 1
        while j < len(self.sig):
            t = self.sig[j]
            if t.kind == IDENT:
                if t.text not in _GENERIC_OK_WORDS and not (
                    t.text[0].isalpha() or t.text[0] in "_$"
                ):
                    return False
            elif t.kind == PUNCT:
                if t.text == "<":
                    depth += 1
                elif t.text == ">":
                    depth -= 1
                    if depth == 0:
                        self.i = j + 1
                        return True
                elif t.text not in _GENERIC_OK_PUNCT:
                    return False
            else:
                return False
            j += 1
        return False

    # ------------------------------------------------------------------
    # compilation unit
    # ------------------------------------------------------------------
    def run(self) -> ParseResult:
        while not self.eof():
            before = self.i
            t = self.cur()
            assert t is not None
            if t.kind == IDENT and t.text in ("package", "import"):
                while not self.eof() and not self.at(";"):
                    self.advance()
                if not self.eof():
                    self.advance()
            elif t.text == "@":
                self.skip_annotation_or_decl()
            elif t.kind == IDENT and t.text in MODIFIER_WORDS:
                self.advance()
            elif t.kind == IDENT and self.is_type_decl_start():
                self.parse_type([])
            else:
                self.advance()
            if self.i == before and not self.eof():
                self.advance()
        return ParseResult(
            source=self.src,
            methods=tuple(self.methods),
            call_sites=tuple(self.calls),
            types=tuple(self.types),
            diagnostics=tuple(self.diags),
        )

    def is_type_decl_start(self) -> bool:
        t = self.cur()
        if t is None or t.kind != IDENT:
            return False
        if t.text in ("class", "interface", "enum"):
            return True
        if t.text == "record":
            nxt, after = self.peek(1), self.peek(2)
            return (
                nxt is not None
                and nxt.kind == IDENT
                and after is not None
                and after.text in ("(", "<")
            )
        return False

    def skip_annotation_or_decl(self) -> None:
        """Consume a `@Name(...)` use, or an entire `@interface` declaration."""
        self.advance()  # '@'
        if self.at("interface"):
            self.advance()
            if self.cur() is not None and self.cur().kind == IDENT:
                self.advance()
            while not self.eof() and not self.at("{"):
                self.advance()
            if self.at("{"):
                self.skip_balanced()
            return
        while (
            self.cur() is not None
            and self.cur().kind == IDENT
            and self.cur().text not in MODIFIER_WORDS
            and self.cur().text not in PRIMITIVES
            and self.cur().text not in TYPE_DECL_KEYWORDS
        ):
            self.advance()
            if self.at("."):
                self.advance()
                continue
            break
        if self.at("("):
            self.skip_balanced()

    # ------------------------------------------------------------------
    # type declarations
    # ------------------------------------------------------------------
    def parse_type(self, chain: list[str]) -> None:
        kind_tok = self.advance()
        name_tok = self.cur()
        if name_tok is None or name_tok.kind != IDENT:
            self.diag(kind_tok, f"expected type name after '{kind_tok.text}'")
            return
        self.advance()
        nested = chain + [name_tok.text]
        fqn = ".".join(nested)
        self.types.append(
            f"{self.src.package_name}.{fqn}" if self.src.package_name else fqn
        )
        while not self.eof() and not self.at("{") and not self.at(";"):
            if self.at("<"):
                if not self.try_skip_generics():
                    self.advance()
            elif self.at("("):
                self.skip_balanced()
            else:
                self.advance()
        if not self.at("{"):
            if self.at(";"):
                self.advance()
            return
        self.advance()  # '{'
        if kind_tok.text == "enum":
            self.skip_enum_constants()
        while not self.eof() and not self.at("}"):
            before = self.i
            self.parse_member(nested)
            if self.i == before:
                self.diag(self.cur(), "skipping unrecognized member token")
                self.advance()
        if self.at("}"):
            self.advance()

    def skip_enum_constants(self) -> None:
        depth = 0
        while not self.eof():
            t = self.cur()
            assert t is not None
            if t.text in ("(", "[", "{"):
                self.skip_balanced()
                continue
            if t.text == ";" and depth == 0:
                self.advance()
                return
            if t.text == "}":
                return  # enum closes with constants only; leave for caller
            self.advance()

    # ------------------------------------------------------------------
    # members
    # ------------------------------------------------------------------
    def _gap_doc(self, pending: Token | None) -> Token | None:
        gap = self.gaps[self.i] if self.i < len(self.gaps) else []
        if gap:
            return gap[-1] if gap[-1].kind == JAVADOC else None
        return pending

    def parse_member(self, chain: list[str]) -> None:
        pending_doc = self._gap_doc(None)
        decl_start_tok: Token | None = None

        # annotations
        while self.at("@"):
            if decl_start_tok is None:
                decl_start_tok = self.cur()
            nxt = self.peek(1)
            if nxt is not None and nxt.text == "interface":
                self.skip_annotation_or_decl()
                return
            self.skip_annotation_or_decl()
            pending_doc = self._gap_doc(pending_doc)

        # modifiers, including the three-token 'non-sealed'
        header_start_tok: Token | None = None
        while True:
            t = self.cur()
            if t is None:
                return
            if t.kind == IDENT and t.text in MODIFIER_WORDS:
                header_start_tok = header_start_tok or t
                self.advance()
                pending_doc = self._gap_doc(pending_doc)
                continue
            if (
                t.kind == IDENT
                and t.text == "non"
                and self.peek(1) is not None
                and self.peek(1).text == "-"
                and self.peek(2) is not None
                and self.peek(2).text == "sealed"
            ):
                header_start_tok = header_start_tok or t
                self.advance(), self.advance(), self.advance()
                continue
            break

        t = self.cur()
        if t is None:
            return
        if t.text == ";":
            self.advance()
            return
        if t.text == "}":
            return
        if t.text == "{":  # instance or static initializer: out of scope
            self.skip_balanced()
            return
        if self.is_type_decl_start():
            self.parse_type(chain)
            return
        if t.text == "<":  # generic method type parameters
            header_start_tok = header_start_tok or t
            if not self.try_skip_generics():
                self.advance()
                return

        type_start = self.cur()
        if type_start is None or type_start.kind != IDENT:
            self.diag(type_start, "unrecognized member; skipping token")
            self.advance()
            return
        header_start_tok = header_start_tok or type_start
        decl_start_tok = decl_start_tok or header_start_tok
        self.parse_type_ref()

        if self.at("("):  # constructor: excluded from extraction
            self.skip_balanced()
            self.finish_signature_tail()
            if self.at("{"):
                self.skip_balanced()
            elif self.at(";"):
                self.advance()
            return

        name_tok = self.cur()
        if name_tok is None or name_tok.kind != IDENT:
            self.skip_statementish()
            return
        self.advance()

        if not self.at("("):
            # field declaration(s); initializers may hold arbitrary nesting
            self.skip_statementish()
            return

        arity, param_types = self.parse_params()
        close_tok = self.sig[self.i - 1] if self.i > 0 else name_tok
        self.finish_signature_tail()

        if self.at("{"):
            open_tok = self.cur()
            body_open_index = self.i
            close_index = self.skip_balanced()
            if close_index is None:
                self.diag(open_tok, f"unterminated body for method '{name_tok.text}'")
                return
            close_brace = self.sig[close_index]
            self.emit_method(
                chain, name_tok, arity, param_types,
                decl_start_tok, header_start_tok, close_tok,
                open_tok, close_brace, pending_doc,
                body_open_index, close_index,
            )
        elif self.at(";"):
            self.advance()  # abstract or native: no body, nothing to document from
        else:
            self.skip_statementish()

    def finish_signature_tail(self) -> None:
        """Consume a throws clause / odd suffixes up to the body or terminator."""
        while not self.eof() and not self.at("{") and not self.at(";"):
            if self.at("("):
                self.skip_balanced()
            else:
                self.advance()

    def skip_statementish(self) -> None:
        """Skip to the `;` ending a field or broken member, balancing nesting.

        Also resynchronizes at tokens that can only start a new member, so a
        malformed member without a terminator cannot swallow its successor.
        """
        first = True
        while not self.eof():
            t = self.cur()
            assert t is not None
            if t.text in ("(", "[", "{"):
                self.skip_balanced()
                first = False
                continue
            if t.text == ";":
                self.advance()
                return
            if t.text == "}":
                return
            if not first and (
                t.text == "@"
                or (t.kind == IDENT and (t.text in MODIFIER_WORDS or t.text == "void"))
            ):
                return
            self.advance()
            first = False

    def parse_type_ref(self) -> None:
        t = self.cur()
        if t is None or t.kind != IDENT:
            return
        self.advance()
        if t.text in PRIMITIVES:
            self.skip_array_suffix()
            return
        while True:
            if self.at("<") and self.try_skip_generics():
                continue
            if self.at(".") and self.peek(1) is not None and self.peek(1).kind == IDENT:
                self.advance()
                self.advance()
                continue
            break
        self.skip_array_suffix()

    def skip_array_suffix(self) -> None:
        while self.at("[") and self.peek(1) is not None and self.peek(1).text == "]":
            self.advance()
            self.advance()

    def parse_params(self) -> tuple[int, tuple[str, ...]]:
        """From the opening paren: count parameters and capture their type text."""
        open_tok = self.advance()  # '('
        segments: list[list[Token]] = [[]]
        depth = 0
        while not self.eof():
            t = self.cur()
            assert t is not None
            if t.text == "<" and self.try_skip_generics():
                end = self.sig[self.i - 1]
                segments[-1].append(Token("generics", self.text[t.start:end.end],
                                          t.start, end.end, t.line))
                continue
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                if depth == 0 and t.text == ")":
                    self.advance()
                    break
                depth -= 1
            elif t.text == "," and depth == 0:
                segments.append([])
                self.advance()
                continue
            segments[-1].append(t)
            self.advance()
        del open_tok

        if segments == [[]]:
            return 0, ()

        types: list[str] = []
        for seg in segments:
            # drop leading parameter annotations and 'final'
            toks = list(seg)
            while toks and toks[0].text == "@":
                toks.pop(0)
                while toks and toks[0].kind == IDENT:
                    toks.pop(0)
                    if toks and toks[0].text == ".":
                        toks.pop(0)
                        continue
                    break
                if toks and toks[0].text == "(":
                    # annotation args were flattened into the segment; drop greedily
                    inner = 1
                    toks.pop(0)
                    while toks and inner:
                        if toks[0].text == "(":
                            inner += 1
                        elif toks[0].text == ")":
                            inner -= 1
                        toks.pop(0)
            while toks and toks[0].text == "final":
                toks.pop(0)
            name_idx = None
            for idx in range(len(toks) - 1, -1, -1):
                if toks[idx].kind == IDENT:
                    name_idx = idx
                    break
            if name_idx is None or name_idx == 0:
                type_text = " ".join(tok.text for tok in toks[:-1]) or "?"
            else:
                type_text = self.text[toks[0].start:toks[name_idx - 1].end]
            types.append(" ".join(type_text.split()))
        return len(segments), tuple(types)

    # ------------------------------------------------------------------
    # method emission and body scanning
    # ------------------------------------------------------------------
    def emit_method(
        self,
        chain: list[str],
        name_tok: Token,
        arity: int,
        param_types: tuple[str, ...],
        decl_start_tok: Token | None,
        header_start_tok: Token | None,
        params_close: Token,
        open_brace: Token,
        close_brace: Token,
        doc_tok: Token | None,
        body_open_index: int,
        body_close_index: int,
    ) -> None:
        header_start = (header_start_tok or name_tok).start
        decl_start = (decl_start_tok or header_start_tok or name_tok).start
        class_fqn = (
            f"{self.src.package_name}.{'.'.join(chain)}"
            if self.src.package_name
            else ".".join(chain)
        )
        mid = method_id(self.src.package_name, ".".join(chain), name_tok.text, arity)

        line_start = self.text.rfind("\n", 0, decl_start) + 1
        prefix = self.text[line_start:decl_start]
        indent = prefix if prefix.strip() == "" else ""

        doc_comment = None
        doc_span = None
        if doc_tok is not None:
            doc_comment = doc_tok.text
            doc_span = (doc_tok.start, doc_tok.end)

        decl = MethodDecl(
            id=mid,
            file=self.src.path,
            class_fqn=class_fqn,
            name=name_tok.text,
            arity=arity,
            param_types=param_types,
            signature_span=(header_start, params_close.end),
            body_span=(open_brace.start, close_brace.end),
            body_text=self.text[open_brace.start:close_brace.end],
            doc_comment=doc_comment,
            indent=indent,
            decl_start=decl_start,
            decl_line=(decl_start_tok or name_tok).line,
            doc_span=doc_span,
            header_text=self.text[header_start:params_close.end],
            decl_text=self.text[decl_start:close_brace.end],
        )
        self.methods.append(decl)
        self.scan_body_calls(mid, body_open_index, body_close_index)

    def scan_body_calls(self, caller: str, open_index: int, close_index: int) -> None:
        k = open_index + 1
        while k < close_index:
            t = self.sig[k]
            nxt = self.sig[k + 1] if k + 1 < close_index else None
            if (
                t.kind == IDENT
                and t.text not in NON_CALL_NAMES
                and nxt is not None
                and nxt.text == "("
            ):
                prev = self.sig[k - 1]
                if not self._blocks_call(prev):
                    hint = self._receiver_hint(k)
                    arity, close_k = self._count_args(k + 1, close_index)
                    if close_k is not None:
                        self.calls.append(CallSite(
                            caller=caller,
                            callee_name=t.text,
                            callee_arity=arity,
                            receiver_hint=hint,
                            span=(t.start, self.sig[close_k].end),
                        ))
            k += 1

    @staticmethod
    def _blocks_call(prev: Token) -> bool:
        if prev.text in ("new", "@"):
            return True
        if prev.kind == IDENT and prev.text not in CALL_PRECEDING_WORDS:
            return True  # `Type name(...)`: a declaration, not a call
        return False

    def _receiver_hint(self, k: int) -> str | None:
        prev = self.sig[k - 1]
        if prev.text != ".":
            return None
        before = self.sig[k - 2] if k >= 2 else None
        if before is not None and before.kind == IDENT:
            return before.text
        return None

    def _count_args(self, open_index: int, limit: int) -> tuple[int, int | None]:
        """Count top-level commas inside the arg list starting at `open_index`."""
        depth = 0
        commas = 0
        saw_token = False
        k = open_index
        while k < len(self.sig):
            t = self.sig[k]
            if t.text == "<" and t.kind == PUNCT:
                skip = self._generic_span(k)
                if skip is not None:
                    saw_token = True
                    k = skip + 1
                    continue
            if t.text in ("(", "[", "{"):
                depth += 1
                if k != open_index:
                    saw_token = True
            elif t.text in (")", "]", "}"):
                depth -= 1
                if depth == 0 and t.text == ")":
                    arity = 0 if not saw_token else commas + 1
                    return arity, k
            elif depth == 1:
                if t.text == ",":
                    commas += 1
                saw_token = True
            else:
                saw_token = True
            k += 1
        return 0, None

    def _generic_span(self, start: int) -> int | None:
        """Non-consuming version of try_skip_generics for body scanning."""
        prev = self.sig[start - 1] if start > 0 else None
        if prev is None or prev.kind != IDENT:
            return None
        depth = 1
        j = start + 1
        while j < len(self.sig):
            t = self.sig[j]
            if t.kind == IDENT:
                if t.text not in _GENERIC_OK_WORDS and not (
                    t.text[0].isalpha() or t.text[0] in "_$"
                ):
                    return None
            elif t.kind == PUNCT:
                if t.text == "<":
                    depth += 1
                elif t.text == ">":
                    depth -= 1
                    if depth == 0:
                        return j
                elif t.text not in _GENERIC_OK_PUNCT:
                    return None
            else:
                return None
            j += 1
        return None


def detect_package(text: str) -> str:
    """Find the declared package, skipping comments and annotations."""
    toks = [t for t in lexer.tokenize(text) if t.kind not in COMMENT_KINDS]
    i = 0
    while i < len(toks):
        t = toks[i]
        if t.text == "@":
            i += 1
            while i < len(toks) and toks[i].kind == IDENT:
                i += 1
                if i < len(toks) and toks[i].text == ".":
                    i += 1
                    continue
                break
            if i < len(toks) and toks[i].text == "(":
                depth = 1
                i += 1
                while i < len(toks) and depth:
                    if toks[i].text == "(":
                        depth += 1
                    elif toks[i].text == ")":
                        depth -= 1
                    i += 1
            continue
        if t.kind == IDENT and t.text == "package":
            parts = []
            i += 1
            while i < len(toks) and toks[i].kind == IDENT:
                parts.append(toks[i].text)
                i += 1
                if i < len(toks) and toks[i].text == ".":
                    i += 1
                    continue
                break
            return ".".join(parts)
        return ""
    return ""
