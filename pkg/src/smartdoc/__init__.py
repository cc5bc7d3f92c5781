"""Context-aware JavaDoc generation driven by the project call graph."""

__version__ = "0.1.0"
