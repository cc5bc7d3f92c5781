"""Text-similarity metrics over (generated, reference) comment pairs."""

from smartdoc.metrics.bert import bertscore
from smartdoc.metrics.bleu import bleu
from smartdoc.metrics.embedders import Embedder, HttpEmbedder, MockEmbedder
from smartdoc.metrics.rouge import rouge1
from smartdoc.metrics.tokenization import normalize
from smartdoc.metrics.types import ScoreTriple

__all__ = [
    "Embedder",
    "HttpEmbedder",
    "MockEmbedder",
    "ScoreTriple",
    "bertscore",
    "bleu",
    "normalize",
    "rouge1",
]
