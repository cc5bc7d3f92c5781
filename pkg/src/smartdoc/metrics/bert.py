"""Greedy embedding-matching similarity (BERTScore-style P/R/F1).

No idf weighting and no baseline rescaling: precision is the mean over
hypothesis tokens of their best cosine match in the reference, recall the
mean over reference tokens of their best match in the hypothesis.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from smartdoc.metrics.embedders import Embedder
from smartdoc.metrics.types import ScoreTriple


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    unit = matrix / safe
    # Zero-norm vectors contribute zero similarity everywhere.
    return np.where(norms > 0, unit, 0.0)


def bertscore(hyp: Sequence[str], ref: Sequence[str], embedder: Embedder) -> ScoreTriple:
    if not hyp or not ref:
        return ScoreTriple.zero()
    sim = _unit_rows(embedder.embed(hyp)) @ _unit_rows(embedder.embed(ref)).T
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    return ScoreTriple.from_pr(precision, recall)
