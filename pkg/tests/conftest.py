"""Shared fixture builders for the test suite."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from mcqgeval.corpus import Difficulty, MCQExample, Split

# Canonical per-split question/context counts of the reference corpus the
# toolkit is built around, keyed by difficulty tier.
REFERENCE_COUNTS = {
    Split.TRN: {"easy": (25421, 6409), "medium": (62445, 18728), "hard": (12702, 2437)},
    Split.DEV: {"easy": (1436, 368), "medium": (3451, 1021), "hard": (712, 136)},
    Split.EVL: {"easy": (1436, 362), "medium": (3498, 1045), "hard": (708, 135)},
}


def write_jsonl(path: Path, rows: list[dict]) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def dataset_record(i: int = 0, **overrides) -> dict:
    rec = {
        "example_id": f"q{i}",
        "context_id": f"c{i}",
        "context": f"Context paragraph number {i}.",
        "question": f"What is item {i}?",
        "options": ["alpha", "beta", "gamma", "delta"],
        "answer": "A",
    }
    rec.update(overrides)
    return rec


def reference_split_rows(split: Split) -> list[dict]:
    """Synthetic dataset rows reproducing the reference per-tier counts.

    Questions are distributed over the tier's contexts round-robin so both
    the question and the distinct-context counts come out exactly.
    """
    rows = []
    for tier, (n_questions, n_contexts) in REFERENCE_COUNTS[split].items():
        for i in range(n_questions):
            ctx = i % n_contexts
            rows.append({
                "example_id": f"{split.value}-{tier}-q{i}",
                "context_id": f"{split.value}-{tier}-c{ctx}",
                "context": f"Passage {ctx} of the {tier} tier.",
                "question": f"What does item {i} describe?",
                "options": ["one", "two", "three", "four"],
                "answer": "ABCD"[i % 4],
                "difficulty": tier,
            })
    return rows


@pytest.fixture(scope="session")
def reference_dataset_dir(tmp_path_factory) -> Path:
    """Dev and Evl dataset files with the exact reference counts."""
    root = tmp_path_factory.mktemp("refdata")
    for split in (Split.DEV, Split.EVL):
        write_jsonl(root / f"{split.value.lower()}.jsonl", reference_split_rows(split))
    return root


def prediction_rows(purpose: str, ensemble_size: int,
                    members_by_id: dict[str, list[list[float]]]) -> list[dict]:
    labels = ["A", "B", "C", "D"] if purpose == "mcmrc" else ["easy", "medium", "hard"]
    rows: list[dict] = [{"purpose": purpose, "ensemble_size": ensemble_size}]
    for qid, members in members_by_id.items():
        rows.append({"question_id": qid, "labels": labels, "members": members})
    return rows


def one_hot(index: int, size: int = 4) -> list[float]:
    row = [0.0] * size
    row[index] = 1.0
    return row


def simple_example(question: str = "What is this?",
                   difficulty: Difficulty | None = None,
                   context: str = "Some context.",
                   options: tuple[str, ...] = ("a", "b", "c", "d"),
                   example_id: str = "q0") -> MCQExample:
    return MCQExample(
        example_id=example_id,
        context_id=f"ctx-{example_id}",
        context=context,
        question=question,
        options=options,
        correct_index=0,
        split=Split.DEV,
        difficulty_label=difficulty,
    )
