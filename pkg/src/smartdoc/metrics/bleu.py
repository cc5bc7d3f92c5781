"""Sentence BLEU on pre-tokenized sequences, scaled to [0, 1].

Semantics follow the sacrebleu package's sentence scoring defaults: modified
n-gram precisions up to order 4, effective order capped by the hypothesis
length, exponential smoothing for zero numerators, and a brevity penalty
against the closest reference length (ties toward the shorter reference).
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

MAX_NGRAM_ORDER = 4


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(hyp: Sequence[str], refs: Sequence[Sequence[str]]) -> float:
    if not refs:
        raise ValueError("bleu requires at least one reference")
    c = len(hyp)
    if c == 0:
        return 0.0
    r = min((len(ref) for ref in refs), key=lambda n: (abs(c - n), n))

    log_sum = 0.0
    eff_order = 0
    smooth = 1.0
    for n in range(1, MAX_NGRAM_ORDER + 1):
        total = c - n + 1
        if total <= 0:
            break
        eff_order = n
        hyp_grams = _ngrams(hyp, n)
        ref_grams = Counter()
        for ref in refs:
            ref_grams |= _ngrams(ref, n)
        correct = sum((hyp_grams & ref_grams).values())
        if correct == 0:
            smooth *= 2.0
            log_sum += math.log(1.0 / (smooth * total))
        else:
            log_sum += math.log(correct / total)

    score = math.exp(log_sum / eff_order)
    if c < r:
        score *= math.exp(1.0 - r / c)
    return score
