"""Toolkit for synthesizing inter-context knowledge-conflict benchmarks from
knowledge graphs and evaluating language models on conflict detection and
localization."""

__version__ = "0.1.0"

from .errors import KgConflictError

__all__ = ["KgConflictError", "__version__"]
