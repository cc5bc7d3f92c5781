#!/usr/bin/env python3
"""Freeze reference sentence-BLEU values for the metric oracle suite.

This script is the independent oracle: a from-scratch implementation of
sentence BLEU with exponential smoothing, effective n-gram order capped at 4,
and the closest-reference brevity penalty (matching the sacrebleu package's
sentence_bleu defaults with tokenization disabled). Counts and precisions are
kept as exact rationals; only the final geometric mean goes through floats.

Run from the repo root:

    python scripts/make_bleu_fixture.py

Output: tests/data/bleu_cases.json. The production implementation is tested
against these frozen values and never imports this file.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

MAX_ORDER = 4


def _ngram_counts(tokens: list[str], n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        gram = tuple(tokens[i : i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def reference_bleu(hyp: list[str], refs: list[list[str]]) -> float:
    """Sentence BLEU on pre-tokenized input, scaled to [0, 1]."""
    hyp_len = len(hyp)
    if hyp_len == 0:
        return 0.0

    # Closest reference length; ties resolved toward the shorter reference.
    ref_len = min((len(r) for r in refs), key=lambda rl: (abs(hyp_len - rl), rl))

    correct = [0] * MAX_ORDER
    total = [0] * MAX_ORDER
    for n in range(1, MAX_ORDER + 1):
        total[n - 1] = max(hyp_len - n + 1, 0)
        if total[n - 1] == 0:
            continue
        hyp_counts = _ngram_counts(hyp, n)
        clipped = 0
        for gram, count in hyp_counts.items():
            best_ref = max(_ngram_counts(r, n).get(gram, 0) for r in refs)
            clipped += min(count, best_ref)
        correct[n - 1] = clipped

    precisions: list[Fraction] = []
    smooth = 1
    eff_order = 0
    for n in range(1, MAX_ORDER + 1):
        if total[n - 1] == 0:
            break
        eff_order = n
        if correct[n - 1] == 0:
            smooth *= 2
            precisions.append(Fraction(1, smooth * total[n - 1]))
        else:
            precisions.append(Fraction(correct[n - 1], total[n - 1]))

    if eff_order == 0:
        return 0.0

    log_sum = sum(math.log(float(p)) for p in precisions[:eff_order])
    score = math.exp(log_sum / eff_order)
    if hyp_len < ref_len:
        score *= math.exp(1 - ref_len / hyp_len)
    return score


CASES: list[tuple[str, list[str], list[list[str]]]] = [
    ("identity long", "returns the sum of both operands .".split(),
     ["returns the sum of both operands .".split()]),
    ("identity len3", "clamps the value".split(), ["clamps the value".split()]),
    ("identity len1", ["sum"], [["sum"]]),
    ("disjoint", "alpha beta gamma delta".split(), ["one two three four".split()]),
    ("disjoint short", ["alpha"], [["omega"]]),
    ("spec pair", "the small cat sat".split(), ["the cat sat".split()]),
    ("partial overlap", "computes the total of all entries".split(),
     ["returns the total of the entries".split()]),
    ("clipping repeats", "the the the cat".split(), ["the cat sat on the mat".split()]),
    ("hyp longer", "returns the sum of a and b as an integer value".split(),
     ["returns the sum".split()]),
    ("hyp shorter bp", "returns the sum".split(),
     ["returns the sum of the two operands provided by the caller".split()]),
    ("single common", "value returned here".split(), ["the value is cached".split()]),
    ("two refs closest", "parses the configuration file".split(),
     ["parses a configuration file from disk".split(), "parses the config".split()]),
    ("two refs clip", "writes the record to the log".split(),
     ["writes a record into the log".split(), "appends the record to the log file".split()]),
    ("three refs", "splits text into tokens".split(),
     ["splits the text into tokens".split(), "tokenizes text".split(),
      "splits input text into a token list".split()]),
    ("punct tokens", "returns x .".split(), ["returns x .".split()]),
    ("punct mismatch", "returns x !".split(), ["returns y .".split()]),
    ("javadoc like 1", "checks whether the index lies inside the buffer bounds .".split(),
     ["returns true when the index is inside the buffer bounds .".split()]),
    ("javadoc like 2", "normalizes the path and resolves symbolic links .".split(),
     ["resolves symbolic links after normalizing the given path .".split()]),
    ("javadoc like 3", "creates a shallow copy of the node list .".split(),
     ["makes a shallow copy of the list of nodes .".split()]),
    ("javadoc like 4", "closes the stream and releases buffers".split(),
     ["closes the underlying stream releasing all buffers".split()]),
    ("bigram gap", "a b c d e".split(), ["a c b d e".split()]),
    ("len2 hyp", "the sum".split(), ["the sum of values".split()]),
    ("len2 disjoint", "alpha beta".split(), ["gamma delta epsilon".split()]),
    ("repetition heavy", "log log log message".split(), ["log message".split()]),
    ("long realistic", ("validates the request payload , applies the default values and "
                        "returns the sanitized copy .").split(),
     [("validates the incoming payload , fills in defaults and returns a "
       "sanitized copy of the request .").split()]),
]


def main() -> None:
    out = []
    for name, hyp, refs in CASES:
        out.append({
            "name": name,
            "hyp": hyp,
            "refs": refs,
            "expected": reference_bleu(hyp, refs),
        })
    path = Path(__file__).resolve().parent.parent / "tests" / "data" / "bleu_cases.json"
    path.write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(out)} cases to {path}")


if __name__ == "__main__":
    main()
