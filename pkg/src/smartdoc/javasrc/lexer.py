"""Tolerant single-pass Java lexer.

Produces a flat token stream including comments; strings, chars, and text
blocks are folded into single tokens so downstream brace matching never sees
quoted braces. Unknown bytes become single-char punct tokens rather than
errors.
"""
from __future__ import annotations

from dataclasses import dataclass

IDENT = "ident"
NUMBER = "number"
STRING = "string"
CHAR = "char"
PUNCT = "punct"
LINE_COMMENT = "line_comment"
BLOCK_COMMENT = "block_comment"
JAVADOC = "javadoc"

COMMENT_KINDS = frozenset({LINE_COMMENT, BLOCK_COMMENT, JAVADOC})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    line: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1

    def push(kind: str, start: int, end: int, start_line: int) -> None:
        tokens.append(Token(kind, text[start:end], start, end, start_line))

    while i < n:
        ch = text[i]

        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue

        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                start = i
                while i < n and text[i] != "\n":
                    i += 1
                push(LINE_COMMENT, start, i, line)
                continue
            if nxt == "*":
                start = i
                start_line = line
                is_doc = text.startswith("/**", i) and not text.startswith("/**/", i)
                i += 2
                while i < n and not text.startswith("*/", i):
                    if text[i] == "\n":
                        line += 1
                    i += 1
                i = min(i + 2, n)
                push(JAVADOC if is_doc else BLOCK_COMMENT, start, i, start_line)
                continue

        if text.startswith('"""', i):
            start = i
            start_line = line
            i += 3
            while i < n and not text.startswith('"""', i):
                if text[i] == "\\":
                    i += 1
                elif text[i] == "\n":
                    line += 1
                i += 1
            i = min(i + 3, n)
            push(STRING, start, i, start_line)
            continue

        if ch == '"':
            start = i
            i += 1
            while i < n and text[i] not in '"\n':
                if text[i] == "\\":
                    i += 1
                i += 1
            if i < n and text[i] == '"':
                i += 1
            push(STRING, start, i, line)
            continue

        if ch == "'":
            start = i
            i += 1
            while i < n and text[i] not in "'\n":
                if text[i] == "\\":
                    i += 1
                i += 1
            if i < n and text[i] == "'":
                i += 1
            push(CHAR, start, i, line)
            continue

        if _is_ident_start(ch):
            start = i
            while i < n and _is_ident_part(text[i]):
                i += 1
            push(IDENT, start, i, line)
            continue

        if ch.isdigit():
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            # fractional part, but leave `1..2` style nonsense alone
            if i < n and text[i] == "." and i + 1 < n and text[i + 1].isdigit():
                i += 1
                while i < n and (text[i].isalnum() or text[i] == "_"):
                    i += 1
            push(NUMBER, start, i, line)
            continue

        push(PUNCT, i, i + 1, line)
        i += 1

    return tokens
