"""Validity filters for generated questions and augmentation-set export.

A generated item survives filtering iff it has exactly four unique answer
options and the reading-comprehension ensemble agrees the first option is the
most likely answer. Agreement defaults to per-member argmax (every ensemble
member must rank option A first); argmax of the ensemble-mean distribution is
available as an alternative reading. Argmax ties resolve to the lowest index,
so a tie involving option A counts as agreement.

Kept items can be exported as a dataset-schema JSON-lines file with the first
option recorded as the correct answer, ready to be reloaded as training
augmentation data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import MCQExample, GeneratedOutput, ParseStatus, Split, unique_option_count
from .errors import (
    LabelSpaceMismatch,
    MissingPrediction,
    NotParsed,
    WriteFailure,
)
from .predictions import (
    MCMRC_LABELS,
    EnsemblePrediction,
    PredictionSet,
    Purpose,
    mean_distribution,
)


class AgreementMode(Enum):
    PER_MEMBER_ARGMAX = "per_member"
    MEAN_ARGMAX = "mean"


@dataclass(frozen=True)
class FilterOutcome:
    question_id: str
    four_unique: bool
    ensemble_agrees_first: bool
    kept: bool


@dataclass(frozen=True)
class FilterResult:
    """Per-item outcomes, the kept subset in input order, and summary rates.

    four_opt_rate uses all inputs as the denominator; because it is unstated
    whether unparseable generations should count, four_opt_rate_parsed gives
    the same rate over parseable items only. accuracy is the fraction of
    four-unique-option items whose ensemble agrees on the first option.
    """

    outcomes: tuple[FilterOutcome, ...]
    kept: tuple[GeneratedOutput, ...]
    n_input: int
    n_parsed: int
    four_opt_rate: float
    four_opt_rate_parsed: float
    accuracy: float
    n_kept: int
    mode: AgreementMode

    def summary(self) -> dict:
        return {
            "n_input": self.n_input,
            "n_parsed": self.n_parsed,
            "four_opt_rate": self.four_opt_rate,
            "four_opt_rate_parsed": self.four_opt_rate_parsed,
            "accuracy": self.accuracy,
            "n_kept": self.n_kept,
            "mode": self.mode.value,
        }


def check_four_options(g: GeneratedOutput) -> bool:
    """True iff the parsed generation has exactly four distinct options."""
    if g.parse_status is not ParseStatus.OK:
        raise NotParsed(f"generation {g.context_id!r} has parse_status "
                        f"{g.parse_status.value}")
    return len(g.options) == 4 and unique_option_count(g) == 4


def ensemble_first_agreement(p: EnsemblePrediction,
                             mode: AgreementMode = AgreementMode.PER_MEMBER_ARGMAX) -> bool:
    """Does the ensemble rank the first answer option most likely?"""
    if p.label_space != MCMRC_LABELS:
        raise LabelSpaceMismatch(
            f"agreement check needs label space {list(MCMRC_LABELS)!r}, "
            f"got {list(p.label_space)!r}")
    if mode is AgreementMode.PER_MEMBER_ARGMAX:
        return bool(np.all(np.argmax(p.member_distributions, axis=1) == 0))
    return int(np.argmax(mean_distribution(p))) == 0


def filter_set(gens: Sequence[GeneratedOutput], preds: PredictionSet,
               mode: AgreementMode = AgreementMode.PER_MEMBER_ARGMAX) -> FilterResult:
    """Apply both validity filters to a generation list.

    Every four-unique-option item must have a prediction (keyed by its
    context_id); items failing the option check never consult the ensemble.
    """
    outcomes: list[FilterOutcome] = []
    kept: list[GeneratedOutput] = []
    n_parsed = 0
    n_four = 0
    n_agree = 0
    for g in gens:
        parsed = g.parse_status is ParseStatus.OK
        if parsed:
            n_parsed += 1
        four = parsed and check_four_options(g)
        agrees = False
        if four:
            n_four += 1
            if g.context_id not in preds:
                raise MissingPrediction(g.context_id)
            agrees = ensemble_first_agreement(preds[g.context_id], mode)
            if agrees:
                n_agree += 1
        keep = four and agrees
        outcomes.append(FilterOutcome(question_id=g.context_id, four_unique=four,
                                      ensemble_agrees_first=agrees, kept=keep))
        if keep:
            kept.append(g)
    n_input = len(gens)
    return FilterResult(
        outcomes=tuple(outcomes),
        kept=tuple(kept),
        n_input=n_input,
        n_parsed=n_parsed,
        four_opt_rate=n_four / n_input if n_input else 0.0,
        four_opt_rate_parsed=n_four / n_parsed if n_parsed else 0.0,
        accuracy=n_agree / n_four if n_four else 0.0,
        n_kept=len(kept),
        mode=mode,
    )


def to_examples(kept: Sequence[GeneratedOutput], contexts: Mapping[str, str],
                split: Split = Split.TRN) -> list[MCQExample]:
    """Pair kept generations with their context text as dataset examples.

    The first option is the correct answer by construction, so every
    resulting example has correct_index 0. Example ids are derived from the
    context id plus a per-context ordinal so repeated generations stay unique.
    """
    seen: dict[str, int] = {}
    out: list[MCQExample] = []
    for g in kept:
        if g.context_id not in contexts:
            raise MissingPrediction(g.context_id)
        ordinal = seen.get(g.context_id, 0)
        seen[g.context_id] = ordinal + 1
        out.append(MCQExample(
            example_id=f"{g.context_id}#g{ordinal}",
            context_id=g.context_id,
            context=contexts[g.context_id],
            question=g.question,
            options=g.options,
            correct_index=0,
            split=split,
        ))
    return out


def export_augmentation(kept: Sequence[MCQExample], path: str | Path) -> None:
    """Write kept examples as a dataset-schema JSON-lines file.

    Items must carry exactly 4 options; the answer letter is written from
    correct_index, which is "A" for everything produced by to_examples.
    """
    for ex in kept:
        if len(ex.options) != 4:
            raise ValueError(
                f"augmentation item {ex.example_id!r} has {len(ex.options)} options, "
                "expected exactly 4")
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            for ex in kept:
                rec = {
                    "example_id": ex.example_id,
                    "context_id": ex.context_id,
                    "context": ex.context,
                    "question": ex.question,
                    "options": list(ex.options),
                    "answer": "ABCD"[ex.correct_index],
                }
                if ex.difficulty_label is not None:
                    rec["difficulty"] = ex.difficulty_label.value
                fh.write(json.dumps(rec) + "\n")
    except OSError as exc:
        raise WriteFailure(f"cannot write {path}: {exc}") from exc
