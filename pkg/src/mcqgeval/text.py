"""Word tokenization shared by question-type rules and vocabulary scoring.

The rule is deliberately simple and deterministic: split on Unicode
whitespace, strip leading and trailing punctuation from each token, and
lower-case for matching. No Unicode normalization is applied.
"""

from __future__ import annotations

import unicodedata


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def words(text: str) -> list[str]:
    """Lower-cased word tokens of `text`, punctuation stripped at token edges.

    Tokens that are pure punctuation vanish; interior punctuation (e.g. the
    apostrophe in "don't") is kept.
    """
    out = []
    for raw in text.split():
        tok = _strip_punct(raw)
        if tok:
            out.append(tok.lower())
    return out
