"""Ensemble prediction files: the boundary through which external models feed
the assessment framework.

A prediction file is JSON-lines with one header line followed by one record
per question:

    {"purpose": "mcmrc"|"qc", "ensemble_size": K}
    {"question_id": str, "labels": [str, ...], "members": [[float, ...], ...]}

Members are probability rows (one per ensemble member), not logits; adapters
apply their own softmax before emission. Reading-comprehension ("mcmrc") sets
carry the label space [A, B, C, D]; question-complexity ("qc") sets carry
[easy, medium, hard]. Every row must sum to 1 within 1e-6; rows inside that
tolerance are silently renormalized, anything else is rejected. A file either
loads fully or raises with the offending location; there are no partially
loaded sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import (
    DuplicateQuestionId,
    EnsembleSizeMismatch,
    LabelSpaceMismatch,
    MalformedRecord,
    RowNotNormalized,
)

ROW_SUM_TOLERANCE = 1e-6

MCMRC_LABELS = ("A", "B", "C", "D")
QC_LABELS = ("easy", "medium", "hard")


class Purpose(Enum):
    MCMRC = "mcmrc"
    QC = "qc"


def labels_for(purpose: Purpose) -> tuple[str, ...]:
    return MCMRC_LABELS if purpose is Purpose.MCMRC else QC_LABELS


@dataclass(frozen=True)
class EnsemblePrediction:
    """K probability rows over a fixed label space for one question."""

    question_id: str
    label_space: tuple[str, ...]
    member_distributions: np.ndarray  # shape (K, C), rows sum to 1

    def __post_init__(self) -> None:
        arr = np.asarray(self.member_distributions, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "member_distributions", arr)

    @property
    def ensemble_size(self) -> int:
        return self.member_distributions.shape[0]


@dataclass(frozen=True)
class PredictionSet:
    """All predictions of one file, keyed by question_id."""

    purpose: Purpose
    predictions: Mapping[str, EnsemblePrediction]
    ensemble_size: int = field(default=1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "predictions", MappingProxyType(dict(self.predictions)))

    def __getitem__(self, question_id: str) -> EnsemblePrediction:
        return self.predictions[question_id]

    def __contains__(self, question_id: str) -> bool:
        return question_id in self.predictions

    def __len__(self) -> int:
        return len(self.predictions)


def _validate_rows(question_id: str, rows: list[list[float]], path: str,
                   line_no: int) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2:
        raise MalformedRecord(path, line_no, "'members' must be a list of equal-length rows")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise MalformedRecord(path, line_no,
                              f"probabilities outside [0, 1] for {question_id!r}")
    sums = arr.sum(axis=1)
    for k, s in enumerate(sums):
        if abs(s - 1.0) > ROW_SUM_TOLERANCE:
            raise RowNotNormalized(question_id, k, float(s))
    return arr / sums[:, None]


def load_predictions(path: str | Path, purpose: Purpose) -> PredictionSet:
    """Load and validate a prediction file for the stated purpose."""
    path = Path(path)
    expected_labels = labels_for(purpose)
    predictions: dict[str, EnsemblePrediction] = {}
    ensemble_size: int | None = None
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_no, f"invalid JSON: {exc}")
            if not isinstance(rec, dict):
                raise MalformedRecord(str(path), line_no, "record is not an object")

            if ensemble_size is None:
                # First line is the file header.
                if "purpose" not in rec or "ensemble_size" not in rec:
                    raise MalformedRecord(str(path), line_no,
                                          "first line must be the header "
                                          '{"purpose": ..., "ensemble_size": ...}')
                try:
                    header_purpose = Purpose(rec["purpose"])
                except ValueError:
                    raise MalformedRecord(str(path), line_no,
                                          f"unknown purpose {rec['purpose']!r}")
                if header_purpose is not purpose:
                    raise LabelSpaceMismatch(
                        f"{path}: header purpose {header_purpose.value!r} does not "
                        f"match requested {purpose.value!r}")
                if not isinstance(rec["ensemble_size"], int) or rec["ensemble_size"] < 1:
                    raise MalformedRecord(str(path), line_no,
                                          "ensemble_size must be a positive integer")
                ensemble_size = rec["ensemble_size"]
                continue

            for req in ("question_id", "labels", "members"):
                if req not in rec:
                    raise MalformedRecord(str(path), line_no, f"missing field {req!r}")
            question_id = rec["question_id"]
            if not isinstance(question_id, str):
                raise MalformedRecord(str(path), line_no, "question_id must be a string")
            if tuple(rec["labels"]) != expected_labels:
                raise LabelSpaceMismatch(
                    f"{path}:{line_no}: labels {rec['labels']!r} do not match the "
                    f"{purpose.value} label space {list(expected_labels)!r}")
            if question_id in predictions:
                raise DuplicateQuestionId(str(path), line_no,
                                          f"duplicate question_id {question_id!r}")
            rows = _validate_rows(question_id, rec["members"], str(path), line_no)
            if rows.shape[0] != ensemble_size:
                raise EnsembleSizeMismatch(
                    f"{path}:{line_no}: {question_id!r} has {rows.shape[0]} member "
                    f"rows, header says ensemble_size={ensemble_size}")
            if rows.shape[1] != len(expected_labels):
                raise LabelSpaceMismatch(
                    f"{path}:{line_no}: rows have {rows.shape[1]} entries for "
                    f"{len(expected_labels)} labels")
            predictions[question_id] = EnsemblePrediction(
                question_id=question_id,
                label_space=expected_labels,
                member_distributions=rows,
            )
    if ensemble_size is None:
        raise MalformedRecord(str(path), 1, "file is empty, expected a header line")
    return PredictionSet(purpose=purpose, predictions=predictions,
                         ensemble_size=ensemble_size)


def mean_distribution(p: EnsemblePrediction) -> np.ndarray:
    """Arithmetic mean of the member rows; sums to 1 within 1e-9."""
    return p.member_distributions.mean(axis=0)


def write_predictions(path: str | Path, purpose: Purpose,
                      records: Mapping[str, np.ndarray] | dict[str, list[list[float]]],
                      ensemble_size: int) -> None:
    """Write a schema-conforming prediction file (mainly for fixtures/tools)."""
    path = Path(path)
    labels = list(labels_for(purpose))
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"purpose": purpose.value,
                             "ensemble_size": ensemble_size}) + "\n")
        for question_id, rows in records.items():
            members = np.asarray(rows, dtype=float).tolist()
            fh.write(json.dumps({"question_id": question_id, "labels": labels,
                                 "members": members}) + "\n")
