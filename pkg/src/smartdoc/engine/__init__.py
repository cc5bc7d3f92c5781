"""The generation core: cache, backends, prompt assembly, retry-bounded output."""

from smartdoc.engine.backends import HttpChatBackend, LlmBackend, MockChatBackend
from smartdoc.engine.cache import Summary, SummaryCache
from smartdoc.engine.generator import (
    GeneratedComment,
    GenerationEngine,
    GenerationResult,
    validate_extract,
)
from smartdoc.engine.prompts import PromptBundle, token_estimate

__all__ = [
    "GeneratedComment",
    "GenerationEngine",
    "GenerationResult",
    "HttpChatBackend",
    "LlmBackend",
    "MockChatBackend",
    "PromptBundle",
    "Summary",
    "SummaryCache",
    "token_estimate",
    "validate_extract",
]
