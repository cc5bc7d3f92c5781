"""Comment text normalization into token sequences.

All metrics operate on the output of :func:`normalize`, so hypothesis and
reference sides always go through the same pipeline.
"""
from __future__ import annotations

import re

_DOC_OPEN = re.compile(r"/\*\*")
_DOC_CLOSE = re.compile(r"\*/")
_LINE_STAR = re.compile(r"^\s*\*+(?!/)", flags=re.MULTILINE)
_TAG = re.compile(r"@\w+")
_TOKEN = re.compile(r"\w+|[^\w\s]", flags=re.UNICODE)


def normalize(text: str, strip_tags: bool = True) -> list[str]:
    """Turn comment text into a lowercase token sequence.

    Removes JavaDoc markers (`/**`, `*/`, leading `*` rails) and, unless
    ``strip_tags`` is false, `@tag` names while keeping their payload text.
    Words and punctuation become separate tokens.
    """
    if not text:
        return []
    s = _DOC_OPEN.sub(" ", text)
    s = _DOC_CLOSE.sub(" ", s)
    s = _LINE_STAR.sub(" ", s)
    if strip_tags:
        s = _TAG.sub(" ", s)
    return _TOKEN.findall(s.lower())
