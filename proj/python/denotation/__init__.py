"""Denotation extraction from answer hints."""

from ._denotation import (
    DataError,
    KnowledgeBase,
    UsageError,
    binomial_ci_halfwidth,
    clopper_pearson,
    generate_synthetic,
    link_pair,
    normalize_text,
    normalized_edit_distance,
    run_cli,
)

__all__ = [
    "DataError",
    "KnowledgeBase",
    "UsageError",
    "binomial_ci_halfwidth",
    "clopper_pearson",
    "generate_synthetic",
    "link_pair",
    "normalize_text",
    "normalized_edit_distance",
    "run_cli",
]
