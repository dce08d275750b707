"""Structured vocabulary complexity scoring and Dev-split threshold tuning.

A lexicon partitions words into beginner (0.0), intermediate (0.5) and expert
(1.0) tiers. An example's score is the average tier of the in-lexicon tokens
of its question, context and options taken together; tokens missing from the
lexicon are excluded from both numerator and denominator, and an example with
no in-lexicon token at all scores a neutral 0.5. Per-field scores are also
available since the averaging granularity is a documented choice.

Two thresholds split the score range into easy / medium / hard; they are
tuned by exhaustive grid search maximizing accuracy on a labeled dev split.

The lexicon file is JSON-lines: {"word": str, "tier": "beginner"|"intermediate"|"expert"}.
The toolkit ships a tiny illustrative lexicon for tests and demos; real use
needs a user-supplied list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Difficulty, MCQExample
from .errors import DuplicateWord, MalformedRecord, MissingDifficultyLabels
from .text import words

TIER_VALUES = {"beginner": 0.0, "intermediate": 0.5, "expert": 1.0}
NEUTRAL_SCORE = 0.5


@dataclass(frozen=True)
class ComplexityThresholds:
    """Easy/medium boundary t1 and medium/hard boundary t2, 0 <= t1 <= t2 <= 1."""

    t1: float
    t2: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.t1 <= self.t2 <= 1.0):
            raise ValueError(f"need 0 <= t1 <= t2 <= 1, got t1={self.t1}, t2={self.t2}")


def load_lexicon(path: str | Path) -> dict[str, float]:
    """Load a word -> tier-value map; keys are lower-cased and must be unique."""
    path = Path(path)
    lexicon: dict[str, float] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_no, f"invalid JSON: {exc}")
            if not isinstance(rec, dict) or not isinstance(rec.get("word"), str):
                raise MalformedRecord(str(path), line_no, "expected {'word': str, 'tier': str}")
            tier = rec.get("tier")
            if tier not in TIER_VALUES:
                raise MalformedRecord(str(path), line_no, f"unknown tier {tier!r}")
            word = rec["word"].lower()
            if word in lexicon:
                raise DuplicateWord(str(path), line_no, f"duplicate word {word!r}")
            lexicon[word] = TIER_VALUES[tier]
    return lexicon


def builtin_lexicon_path() -> Path:
    """Path of the tiny illustrative lexicon bundled with the package."""
    return Path(str(resources.files("mcqgeval").joinpath("data/mini_lexicon.jsonl")))


def _mean_tier(tokens: Sequence[str], lexicon: Mapping[str, float]) -> float:
    tiers = [lexicon[tok] for tok in tokens if tok in lexicon]
    if not tiers:
        return NEUTRAL_SCORE
    return sum(tiers) / len(tiers)


def vocab_score(example: MCQExample, lexicon: Mapping[str, float]) -> float:
    """Average tier of in-lexicon tokens across question, context and all options."""
    if not lexicon:
        raise ValueError("lexicon is empty")
    tokens = words(example.question) + words(example.context)
    for opt in example.options:
        tokens += words(opt)
    return _mean_tier(tokens, lexicon)


def vocab_field_scores(example: MCQExample,
                       lexicon: Mapping[str, float]) -> dict[str, float]:
    """Per-field scores (question / context / options) under the same rule."""
    if not lexicon:
        raise ValueError("lexicon is empty")
    option_tokens: list[str] = []
    for opt in example.options:
        option_tokens += words(opt)
    return {
        "question": _mean_tier(words(example.question), lexicon),
        "context": _mean_tier(words(example.context), lexicon),
        "options": _mean_tier(option_tokens, lexicon),
    }


def classify_by_threshold(score: float, th: ComplexityThresholds) -> Difficulty:
    """easy if score < t1, medium if t1 <= score < t2, hard otherwise.

    Boundary scores go to the upper class, so a score of exactly 1.0 can
    never be classified easy or medium (t1 and t2 cannot exceed 1).
    """
    if score < th.t1:
        return Difficulty.EASY
    if score < th.t2:
        return Difficulty.MEDIUM
    return Difficulty.HARD


def _grid(step: float) -> list[float]:
    n = int(round(1.0 / step))
    values = [min(i * step, 1.0) for i in range(n + 1)]
    if values[-1] < 1.0:
        values.append(1.0)
    return values


def tune_thresholds(dev: Sequence[MCQExample], lexicon: Mapping[str, float],
                    grid_step: float = 0.01) -> tuple[ComplexityThresholds, float]:
    """Exhaustive grid search for the thresholds maximizing dev accuracy.

    Ties are broken toward smaller t1, then smaller t2, so results are
    deterministic. Returns (thresholds, achieved dev accuracy).
    """
    if not dev:
        raise MissingDifficultyLabels("dev split is empty")
    if not (0.0 < grid_step <= 0.1):
        raise ValueError(f"grid_step must be in (0, 0.1], got {grid_step}")
    unlabeled = [ex.example_id for ex in dev if ex.difficulty_label is None]
    if unlabeled:
        raise MissingDifficultyLabels(
            f"{len(unlabeled)} dev examples lack difficulty labels "
            f"(first: {unlabeled[0]!r})")

    scores = [vocab_score(ex, lexicon) for ex in dev]
    labels = [ex.difficulty_label for ex in dev]
    n = len(dev)

    grid = _grid(grid_step)
    best_acc = -1.0
    best_t = (0.0, 0.0)
    for t1 in grid:
        for t2 in grid:
            if t2 < t1:
                continue
            th = ComplexityThresholds(t1=t1, t2=t2)
            hits = sum(1 for s, lab in zip(scores, labels)
                       if classify_by_threshold(s, th) is lab)
            acc = hits / n
            if acc > best_acc:  # strict: first (smallest t1, t2) wins ties
                best_acc = acc
                best_t = (t1, t2)
    return ComplexityThresholds(t1=best_t[0], t2=best_t[1]), best_acc
