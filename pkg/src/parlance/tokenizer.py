"""Shared tokenizer for templates, utterances, and classifier features.

Lowercase, split on whitespace, strip terminal punctuation from each token.
Templates and the classifier must agree on tokenization or extraction and
ranking drift apart, so everything routes through tokenize().
"""

from __future__ import annotations

import re

_TERMINAL_PUNCT = "?.,!"

_SLOT_RE = re.compile(r"^\{([a-z0-9_]+)\}$")
_NUMERAL_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)$")


def tokenize(text: str) -> list[str]:
    """Lowercase and split text into tokens, trimming trailing ?.,! marks."""
    tokens = []
    for raw in text.lower().split():
        tok = raw.rstrip(_TERMINAL_PUNCT)
        if tok:
            tokens.append(tok)
    return tokens


def slot_name(token: str) -> str | None:
    """Return the slot name when token has the {name} placeholder shape."""
    m = _SLOT_RE.match(token)
    return m.group(1) if m else None


def is_numeral(token: str) -> bool:
    """True for signed integer or decimal literals like 7, -3, 2.5."""
    return bool(_NUMERAL_RE.match(token))
