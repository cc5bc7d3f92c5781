from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ScoreTriple:
    """Precision/recall/F1, each in [0, 1]."""

    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "ScoreTriple":
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom > 0 else 0.0
        return cls(precision, recall, f1)

    @classmethod
    def zero(cls) -> "ScoreTriple":
        return cls(0.0, 0.0, 0.0)
