"""Tokenization shared by the index, vectors, and classifier feature paths.

Tokens are lowercased Unicode alphanumeric runs (digits kept, underscores
split, no stemming) so that surface-form positions survive for phrase
matching and window extraction.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split *text* into lowercased alphanumeric tokens."""
    return _TOKEN_RE.findall(text.lower())


def normalize_title(title: str) -> str:
    """Canonical form used for exact-title comparisons: casefold,
    underscores to spaces, then rejoin the token sequence."""
    return " ".join(tokenize(title.replace("_", " ").casefold()))
