"""ROUGE-1: clipped unigram overlap precision/recall/F1."""
from __future__ import annotations

from collections import Counter
from typing import Sequence

from smartdoc.metrics.types import ScoreTriple


def rouge1(hyp: Sequence[str], ref: Sequence[str]) -> ScoreTriple:
    if not hyp or not ref:
        return ScoreTriple.zero()
    overlap = sum((Counter(hyp) & Counter(ref)).values())
    return ScoreTriple.from_pr(overlap / len(hyp), overlap / len(ref))
