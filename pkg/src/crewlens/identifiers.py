"""Identifier extraction from source text: tokenize, split, stem, count."""

from __future__ import annotations

import re
from collections import Counter

from .porter import porter_stem

__all__ = ["extract_identifiers", "split_identifier", "MIN_TOKEN_LEN"]

MIN_TOKEN_LEN = 3

# Maximal identifier-shaped runs: start with letter/underscore, then word
# chars. The lookbehind rejects runs led by a digit ("3cols" is no identifier).
_IDENTIFIER = re.compile(r"(?<![A-Za-z0-9_])[A-Za-z_][A-Za-z0-9_]*")

# Subtokens inside an identifier: acronym runs, capitalized words, lowercase runs.
# Underscores fall out implicitly (they match none of the branches).
_SUBTOKEN = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z0-9]*|[a-z0-9]+")


def split_identifier(identifier: str) -> list[str]:
    """Split on underscores and camel-case boundaries, preserving acronyms."""
    return _SUBTOKEN.findall(identifier)


def extract_identifiers(content: str, min_len: int = MIN_TOKEN_LEN) -> dict[str, int]:
    """Normalized token counts for a source text.

    Subtokens are lowercased and Porter-stemmed; stems shorter than min_len
    or purely numeric are dropped.
    """
    counts: Counter[str] = Counter()
    for identifier in _IDENTIFIER.findall(content):
        for sub in split_identifier(identifier):
            stem = porter_stem(sub.lower())
            if len(stem) < min_len or stem.isdigit():
                continue
            counts[stem] += 1
    return dict(counts)
