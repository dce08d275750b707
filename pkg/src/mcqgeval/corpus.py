"""Dataset ingestion and parsing of raw generated question sequences.

Datasets are JSON-lines files, one record per line:

    {"example_id": str, "context_id": str, "context": str, "question": str,
     "options": [str, ...], "answer": "A"|"B"|"C"|"D",
     "difficulty": "easy"|"medium"|"hard"}   # difficulty optional

Generated-output files are JSON-lines of {"context_id": str, "raw": str},
where `raw` is a single sequence holding the question followed by the answer
options, delimited by a separator token (default "[SEP]"). The first option
is asserted to be the correct answer.

All loaded values are immutable; loading either returns a fully validated
list or raises an error locating the offending line.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import (
    DuplicateExampleId,
    MalformedRecord,
    NotParsed,
    UnknownAnswerLetter,
)

DEFAULT_SEPARATOR = "[SEP]"

_ANSWER_LETTERS = {"A": 0, "B": 1, "C": 2, "D": 3}


class Split(Enum):
    TRN = "Trn"
    DEV = "Dev"
    EVL = "Evl"


class Difficulty(Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"


class ParseStatus(Enum):
    OK = "Ok"
    TOO_FEW_SEGMENTS = "TooFewSegments"
    EMPTY_SEGMENT = "EmptySegment"


@dataclass(frozen=True)
class MCQExample:
    """One context/question/options/answer record.

    Invariants (enforced by load_dataset): at least two options,
    correct_index in range, question and context non-empty after trimming.
    """

    example_id: str
    context_id: str
    context: str
    question: str
    options: tuple[str, ...]
    correct_index: int
    split: Split
    difficulty_label: Difficulty | None = None


@dataclass(frozen=True)
class GeneratedOutput:
    """A raw generated sequence and its parsed question/options."""

    context_id: str
    raw: str
    question: str
    options: tuple[str, ...]
    parse_status: ParseStatus


@dataclass(frozen=True)
class SubsetCounts:
    questions: int
    contexts: int


@dataclass(frozen=True)
class SplitStats:
    """Question and context counts per difficulty subset, one entry per split.

    counts[split][difficulty] -> SubsetCounts. Totals are always the sum of
    the subset counts; unlabeled examples are not counted.
    """

    counts: dict[Split, dict[Difficulty, SubsetCounts]]

    def total_questions(self, split: Split) -> int:
        return sum(c.questions for c in self.counts.get(split, {}).values())

    def total_contexts(self, split: Split) -> int:
        return sum(c.contexts for c in self.counts.get(split, {}).values())


def _require(cond: bool, path: str, line_no: int, reason: str) -> None:
    if not cond:
        raise MalformedRecord(path, line_no, reason)


def load_dataset(path: str | Path, split: Split) -> list[MCQExample]:
    """Load and validate a JSON-lines dataset file for the given split.

    Raises MalformedRecord / UnknownAnswerLetter / DuplicateExampleId with
    the offending line number; an empty file yields an empty list.
    """
    path = Path(path)
    examples: list[MCQExample] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_no, f"invalid JSON: {exc}")
            _require(isinstance(rec, dict), str(path), line_no, "record is not an object")
            for field in ("example_id", "context_id", "context", "question", "answer"):
                _require(isinstance(rec.get(field), str), str(path), line_no,
                         f"missing or non-string field {field!r}")
            options = rec.get("options")
            _require(isinstance(options, list) and all(isinstance(o, str) for o in options),
                     str(path), line_no, "field 'options' must be a list of strings")
            _require(len(options) >= 2, str(path), line_no,
                     f"need at least 2 options, got {len(options)}")
            _require(rec["question"].strip() != "", str(path), line_no, "empty question")
            _require(rec["context"].strip() != "", str(path), line_no, "empty context")

            answer = rec["answer"]
            if answer not in _ANSWER_LETTERS:
                raise UnknownAnswerLetter(str(path), line_no,
                                          f"unknown answer letter {answer!r}")
            correct_index = _ANSWER_LETTERS[answer]
            _require(correct_index < len(options), str(path), line_no,
                     f"answer {answer!r} points past the {len(options)} options")

            difficulty = None
            if "difficulty" in rec and rec["difficulty"] is not None:
                try:
                    difficulty = Difficulty(rec["difficulty"])
                except ValueError:
                    raise MalformedRecord(str(path), line_no,
                                          f"unknown difficulty {rec['difficulty']!r}")

            example_id = rec["example_id"]
            if example_id in seen_ids:
                raise DuplicateExampleId(str(path), line_no,
                                         f"duplicate example_id {example_id!r}")
            seen_ids.add(example_id)

            examples.append(MCQExample(
                example_id=example_id,
                context_id=rec["context_id"],
                context=rec["context"],
                question=rec["question"],
                options=tuple(options),
                correct_index=correct_index,
                split=split,
                difficulty_label=difficulty,
            ))
    return examples


def answer_letter(example: MCQExample) -> str:
    """Inverse of the A-D mapping used by load_dataset."""
    return "ABCD"[example.correct_index]


def parse_generated(raw: str, separator: str = DEFAULT_SEPARATOR,
                    context_id: str = "") -> GeneratedOutput:
    """Split a raw generated sequence into question and options.

    The first separator-delimited segment is the question, the rest are the
    options, each whitespace-trimmed. Structural problems are encoded in
    parse_status rather than raised; no segment is dropped.
    """
    if not separator:
        raise ValueError("separator must be non-empty")
    segments = [seg.strip() for seg in raw.split(separator)]
    question, options = segments[0], tuple(segments[1:])
    if len(segments) < 2:
        status = ParseStatus.TOO_FEW_SEGMENTS
    elif any(seg == "" for seg in segments):
        status = ParseStatus.EMPTY_SEGMENT
    else:
        status = ParseStatus.OK
    return GeneratedOutput(context_id=context_id, raw=raw, question=question,
                           options=options, parse_status=status)


def join_generated(question: str, options: Iterable[str],
                   separator: str = DEFAULT_SEPARATOR) -> str:
    """Rebuild the raw sequence form; inverse of parse_generated for clean inputs."""
    return f" {separator} ".join([question, *options])


def load_generated(path: str | Path,
                   separator: str = DEFAULT_SEPARATOR) -> list[GeneratedOutput]:
    """Load a generated-output JSON-lines file and parse every record."""
    path = Path(path)
    out: list[GeneratedOutput] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_no, f"invalid JSON: {exc}")
            _require(isinstance(rec, dict), str(path), line_no, "record is not an object")
            for field in ("context_id", "raw"):
                _require(isinstance(rec.get(field), str), str(path), line_no,
                         f"missing or non-string field {field!r}")
            out.append(parse_generated(rec["raw"], separator, context_id=rec["context_id"]))
    return out


def unique_option_count(g: GeneratedOutput) -> int:
    """Number of distinct options, exact match on trimmed text (case kept)."""
    if g.parse_status is not ParseStatus.OK:
        raise NotParsed(f"generation {g.context_id!r} has parse_status "
                        f"{g.parse_status.value}")
    return len({opt.strip() for opt in g.options})


def split_stats(examples: Iterable[MCQExample]) -> SplitStats:
    """Question and distinct-context counts grouped by split and difficulty."""
    questions: dict[tuple[Split, Difficulty], int] = defaultdict(int)
    contexts: dict[tuple[Split, Difficulty], set[str]] = defaultdict(set)
    for ex in examples:
        if ex.difficulty_label is None:
            continue
        key = (ex.split, ex.difficulty_label)
        questions[key] += 1
        contexts[key].add(ex.context_id)
    counts: dict[Split, dict[Difficulty, SubsetCounts]] = {}
    for (split, diff), q in sorted(questions.items(),
                                   key=lambda kv: (kv[0][0].value, kv[0][1].value)):
        counts.setdefault(split, {})[diff] = SubsetCounts(
            questions=q, contexts=len(contexts[(split, diff)]))
    return SplitStats(counts=counts)
