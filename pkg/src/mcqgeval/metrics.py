"""The four assessment qualities for generated multiple-choice questions.

* G, grammar: grammatical errors per question. Counts normally come from an
  external checker report; a deliberately naive built-in checker is provided
  as a fallback producer and is not equivalent to a real grammar tool.
* A, unanswerability: mean expected entropy of an ensemble of
  reading-comprehension models over the answer options. The expectation is
  the average of the per-member entropies, never the entropy of the averaged
  distribution.
* D, diversity: entropy in bits of the empirical distribution over question
  types, either the eight-way wh-word scheme or the binary
  stand-alone/passage-dependent scheme.
* C, complexity: expected difficulty weight (easy 0, medium 0.5, hard 1)
  under a three-class probability distribution from a question-complexity
  ensemble.

Plus shared entropy utilities and the classification metrics (accuracy,
macro F1) used for the baseline systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyQuestion,
    EmptyQuestionSet,
    InvalidDistribution,
    LabelSpaceMismatch,
    LengthMismatch,
    MissingPrediction,
)
from .predictions import (
    QC_LABELS,
    EnsemblePrediction,
    PredictionSet,
    Purpose,
    mean_distribution,
)
from .text import words

NATS = "nats"
BITS = "bits"

COMPLEXITY_WEIGHTS = np.array([0.0, 0.5, 1.0])  # easy, medium, hard


class QuestionType(Enum):
    WHAT = "what"
    WHO = "who"
    WHEN = "when"
    WHERE = "where"
    WHY = "why"
    HOW = "how"
    WHICH = "which"
    YESNO = "yesno"
    OTHER = "other"


class StandaloneClass(Enum):
    STANDALONE = "standalone"
    PASSAGE_DEPENDENT = "passage_dependent"


class DiversityScheme(Enum):
    EIGHT_WAY = "eight_way"
    BINARY = "binary"


_WH_WORDS = {
    "what": QuestionType.WHAT,
    "who": QuestionType.WHO,
    "whom": QuestionType.WHO,
    "whose": QuestionType.WHO,
    "when": QuestionType.WHEN,
    "where": QuestionType.WHERE,
    "why": QuestionType.WHY,
    "how": QuestionType.HOW,
    "which": QuestionType.WHICH,
}

_AUXILIARIES = {
    "is", "are", "was", "were", "do", "does", "did", "can", "could", "will",
    "would", "shall", "should", "has", "have", "had", "may", "might", "must",
}


def _log_fn(base: str):
    if base == NATS:
        return np.log
    if base == BITS:
        return np.log2
    raise ValueError(f"base must be {NATS!r} or {BITS!r}, got {base!r}")


def entropy(p: Sequence[float] | np.ndarray, base: str = NATS) -> float:
    """Shannon entropy of a discrete distribution, with 0*log(0) taken as 0."""
    log = _log_fn(base)
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidDistribution(f"expected a non-empty 1-d vector, got shape {arr.shape}")
    if np.any(arr < -1e-9) or np.any(arr > 1.0 + 1e-9):
        raise InvalidDistribution(f"entries outside [0, 1]: {arr!r}")
    total = float(arr.sum())
    if abs(total - 1.0) > 1e-6:
        raise InvalidDistribution(f"distribution sums to {total!r}, expected 1 within 1e-6")
    pos = arr[arr > 0.0]
    h = float(-(pos * log(pos)).sum())
    return h if h > 0.0 else 0.0


def expected_entropy(p: EnsemblePrediction, base: str = NATS) -> float:
    """Average of the per-member entropies of an ensemble prediction."""
    rows = p.member_distributions
    return float(np.mean([entropy(row, base) for row in rows]))


@dataclass(frozen=True)
class SetScore:
    """An aggregate metric value plus the per-question values behind it."""

    value: float
    per_question: dict[str, float]


def unanswerability(pred_set: PredictionSet, ids: Sequence[str],
                    base: str = NATS) -> SetScore:
    """Mean expected entropy over the given question ids (higher = harder to answer)."""
    if pred_set.purpose is not Purpose.MCMRC:
        raise LabelSpaceMismatch(
            f"unanswerability needs an mcmrc prediction set, got {pred_set.purpose.value!r}")
    if not ids:
        raise EmptyQuestionSet("no question ids given")
    per_question: dict[str, float] = {}
    for qid in ids:
        if qid not in pred_set:
            raise MissingPrediction(qid)
        per_question[qid] = expected_entropy(pred_set[qid], base)
    return SetScore(value=float(np.mean(list(per_question.values()))),
                    per_question=per_question)


def classify_question_type(question: str) -> QuestionType:
    """Rule-based question type.

    The first wh-word occurring anywhere in the question decides the type
    (whose/whom count as who); with no wh-word, a leading auxiliary verb
    makes it a yes/no question; anything else is 'other'.
    """
    if not question.strip():
        raise EmptyQuestion("question is empty")
    tokens = words(question)
    for tok in tokens:
        if tok in _WH_WORDS:
            return _WH_WORDS[tok]
    if tokens and tokens[0] in _AUXILIARIES:
        return QuestionType.YESNO
    return QuestionType.OTHER


def classify_standalone(question: str) -> StandaloneClass:
    """Binary scheme: a question is passage-dependent iff it contains the
    word "passage" as a token (case-insensitive, exact word only)."""
    if not question.strip():
        raise EmptyQuestion("question is empty")
    if "passage" in words(question):
        return StandaloneClass.PASSAGE_DEPENDENT
    return StandaloneClass.STANDALONE


def class_histogram(questions: Sequence[str],
                    scheme: DiversityScheme) -> dict[str, int]:
    """Counts of question-type classes under the given scheme."""
    hist: dict[str, int] = {}
    for q in questions:
        if scheme is DiversityScheme.EIGHT_WAY:
            label = classify_question_type(q).value
        else:
            label = classify_standalone(q).value
        hist[label] = hist.get(label, 0) + 1
    return hist


def diversity(questions: Sequence[str],
              scheme: DiversityScheme = DiversityScheme.BINARY) -> float:
    """Entropy in bits of the empirical question-type distribution."""
    if not questions:
        raise EmptyQuestionSet("diversity of an empty question set is undefined")
    hist = class_histogram(questions, scheme)
    counts = np.array(list(hist.values()), dtype=float)
    return entropy(counts / counts.sum(), base=BITS)


def complexity_score(p: EnsemblePrediction) -> float:
    """Expected difficulty weight of the ensemble-mean easy/medium/hard distribution."""
    if p.label_space != QC_LABELS:
        raise LabelSpaceMismatch(
            f"complexity needs label space {list(QC_LABELS)!r}, got {list(p.label_space)!r}")
    return float(mean_distribution(p) @ COMPLEXITY_WEIGHTS)


def mean_complexity(pred_set: PredictionSet, ids: Sequence[str]) -> SetScore:
    """Mean complexity over the given question ids."""
    if pred_set.purpose is not Purpose.QC:
        raise LabelSpaceMismatch(
            f"complexity needs a qc prediction set, got {pred_set.purpose.value!r}")
    if not ids:
        raise EmptyQuestionSet("no question ids given")
    per_question: dict[str, float] = {}
    for qid in ids:
        if qid not in pred_set:
            raise MissingPrediction(qid)
        per_question[qid] = complexity_score(pred_set[qid])
    return SetScore(value=float(np.mean(list(per_question.values()))),
                    per_question=per_question)


_BRACKETS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = set(_BRACKETS.values())


def naive_grammar_errors(question: str) -> int:
    """Violation count from a deliberately naive surface checker.

    Checks only that the question ends with "?", starts with a capital
    letter, and has balanced double quotes and brackets. This is a fallback
    producer of error counts and is nowhere near a real grammar checker.
    """
    text = question.strip()
    errors = 0
    if not text.endswith("?"):
        errors += 1
    first_letter = next((ch for ch in text if ch.isalpha()), None)
    if first_letter is None or not first_letter.isupper():
        errors += 1
    stack: list[str] = []
    balanced = text.count('"') % 2 == 0
    for ch in text:
        if ch in _BRACKETS:
            stack.append(_BRACKETS[ch])
        elif ch in _CLOSERS:
            if not stack or stack.pop() != ch:
                balanced = False
                break
    if stack:
        balanced = False
    if not balanced:
        errors += 1
    return errors


def grammar_rate(counts: Sequence[int], n_questions: int) -> float:
    """Total grammatical errors divided by the number of questions."""
    if n_questions <= 0:
        raise EmptyQuestionSet("grammar rate over zero questions is undefined")
    if any(c < 0 for c in counts):
        raise ValueError("error counts must be non-negative")
    return float(sum(counts)) / n_questions


def accuracy(pred_labels: Sequence, true_labels: Sequence) -> float:
    """Fraction of positions where predicted and true labels agree."""
    if len(pred_labels) != len(true_labels):
        raise LengthMismatch(f"{len(pred_labels)} predictions vs {len(true_labels)} labels")
    if not true_labels:
        raise EmptyQuestionSet("accuracy of an empty label set is undefined")
    hits = sum(1 for p, t in zip(pred_labels, true_labels) if p == t)
    return hits / len(true_labels)


def macro_f1(pred_labels: Sequence, true_labels: Sequence,
             classes: Iterable) -> float:
    """Unweighted mean of per-class F1 scores.

    A class with no predicted and no true positives contributes F1 = 0,
    which is what makes a constant predictor score 1/C of its own F1.
    """
    if len(pred_labels) != len(true_labels):
        raise LengthMismatch(f"{len(pred_labels)} predictions vs {len(true_labels)} labels")
    class_list = list(classes)
    allowed = set(class_list)
    for lab in list(pred_labels) + list(true_labels):
        if lab not in allowed:
            raise ValueError(f"label {lab!r} outside the declared classes")
    f1s = []
    for cls in class_list:
        tp = sum(1 for p, t in zip(pred_labels, true_labels) if p == cls and t == cls)
        fp = sum(1 for p, t in zip(pred_labels, true_labels) if p == cls and t != cls)
        fn = sum(1 for p, t in zip(pred_labels, true_labels) if p != cls and t == cls)
        denom = 2 * tp + fp + fn
        f1s.append(2 * tp / denom if denom else 0.0)
    return sum(f1s) / len(f1s)


@dataclass(frozen=True)
class MetricScores:
    """Aggregate G/A/D/C for a question set, with per-question detail retained."""

    g: float
    a: float
    a_base: str
    d_bits: float
    d_scheme: DiversityScheme
    d_histogram: dict[str, int]
    c: float
    n_questions: int
    per_question: tuple[dict, ...] = ()

    def __post_init__(self) -> None:
        if not (-1e-9 <= self.c <= 1.0 + 1e-9):
            raise InvalidDistribution(f"complexity {self.c!r} outside [0, 1]")
        if self.a < -1e-9 or self.d_bits < -1e-9 or self.g < 0:
            raise InvalidDistribution("metric aggregates must be non-negative")

    def to_dict(self) -> dict:
        return {
            "G": self.g,
            "A": {"value": self.a, "base": self.a_base},
            "D": {"value_bits": self.d_bits, "scheme": self.d_scheme.value,
                  "class_histogram": dict(sorted(self.d_histogram.items()))},
            "C": self.c,
            "n_questions": self.n_questions,
            "per_question": list(self.per_question),
        }
