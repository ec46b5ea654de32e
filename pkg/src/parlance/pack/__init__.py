"""The shipped data-science command pack."""

from .library import (
    MANN_WHITNEY_LABEL,
    SIGNIFICANCE_ALPHA,
    WELCH_LABEL,
    build_registry,
    builtin_lexicon,
)

__all__ = [
    "MANN_WHITNEY_LABEL",
    "SIGNIFICANCE_ALPHA",
    "WELCH_LABEL",
    "build_registry",
    "builtin_lexicon",
]
