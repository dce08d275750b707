"""Assemble the full assessment report for a set of generated questions.

The report carries one row for the complete generation set and one for the
filtered subset (exactly four unique options and unanimous first-option
agreement). Grammar and diversity are computed over every parseable
question; unanswerability and complexity are computed over the questions the
prediction files cover, which is the four-unique-option subset, since the
reading-comprehension models need exactly four options to run.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import GeneratedOutput, ParseStatus
from .errors import MalformedRecord
from .filtering import AgreementMode, FilterResult, filter_set
from .metrics import (
    DiversityScheme,
    MetricScores,
    NATS,
    class_histogram,
    classify_question_type,
    classify_standalone,
    diversity,
    grammar_rate,
    mean_complexity,
    naive_grammar_errors,
    unanswerability,
)
from .predictions import PredictionSet

GRAMMAR_NAIVE = "naive_builtin"
GRAMMAR_EXTERNAL = "external"


def load_grammar_report(path: str | Path) -> dict[str, int]:
    """Read an external checker's error counts, JSON-lines {"question_id", "errors"}."""
    path = Path(path)
    counts: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(str(path), line_no, f"invalid JSON: {exc}")
            if (not isinstance(rec, dict) or not isinstance(rec.get("question_id"), str)
                    or not isinstance(rec.get("errors"), int) or rec["errors"] < 0):
                raise MalformedRecord(str(path), line_no,
                                      'expected {"question_id": str, "errors": int >= 0}')
            counts[rec["question_id"]] = rec["errors"]
    return counts


def _row(gens: Sequence[GeneratedOutput], filter_result: FilterResult,
         mcmrc: PredictionSet, qc: PredictionSet | None,
         grammar_counts: Mapping[str, int] | None,
         base: str, scheme: DiversityScheme) -> dict:
    parsed = [g for g in gens if g.parse_status is ParseStatus.OK]
    four_ids = [o.question_id for o in filter_result.outcomes if o.four_unique]

    per_question: list[dict] = []
    g_counts: list[int] = []
    outcome_by_id = {o.question_id: o for o in filter_result.outcomes}
    for g in parsed:
        if grammar_counts is not None:
            errors = grammar_counts.get(g.context_id, 0)
        else:
            errors = naive_grammar_errors(g.question)
        g_counts.append(errors)
        outcome = outcome_by_id[g.context_id]
        per_question.append({
            "question_id": g.context_id,
            "question_type": classify_question_type(g.question).value,
            "standalone": classify_standalone(g.question).value,
            "grammar_errors": errors,
            "four_unique": outcome.four_unique,
            "ensemble_agrees_first": outcome.ensemble_agrees_first,
            "kept": outcome.kept,
        })

    a_score = unanswerability(mcmrc, four_ids, base) if four_ids else None
    c_score = mean_complexity(qc, four_ids) if (qc is not None and four_ids) else None
    for entry in per_question:
        qid = entry["question_id"]
        if a_score is not None and qid in a_score.per_question:
            entry["A"] = a_score.per_question[qid]
        if c_score is not None and qid in c_score.per_question:
            entry["C"] = c_score.per_question[qid]

    questions = [g.question for g in parsed]
    scores = MetricScores(
        g=grammar_rate(g_counts, len(parsed)) if parsed else 0.0,
        a=a_score.value if a_score else 0.0,
        a_base=base,
        d_bits=diversity(questions, scheme) if questions else 0.0,
        d_scheme=scheme,
        d_histogram=class_histogram(questions, scheme) if questions else {},
        c=c_score.value if c_score else 0.0,
        n_questions=len(parsed),
        per_question=tuple(per_question),
    )
    row = scores.to_dict()
    row["four_opt_rate"] = filter_result.four_opt_rate
    row["four_opt_rate_parsed"] = filter_result.four_opt_rate_parsed
    row["accuracy"] = filter_result.accuracy
    row["n_input"] = filter_result.n_input
    if a_score is None:
        row["A"]["value"] = None
    if c_score is None:
        row["C"] = None
    return row


def build_assessment(gens: Sequence[GeneratedOutput], mcmrc: PredictionSet,
                     qc: PredictionSet | None = None,
                     grammar_counts: Mapping[str, int] | None = None,
                     base: str = NATS,
                     scheme: DiversityScheme = DiversityScheme.BINARY,
                     mode: AgreementMode = AgreementMode.PER_MEMBER_ARGMAX) -> dict:
    """Full-set and filtered-set assessment rows plus the configuration used."""
    full = filter_set(gens, mcmrc, mode)
    kept = list(full.kept)
    filtered = filter_set(kept, mcmrc, mode)
    report = {
        "config": {
            "entropy_base": base,
            "diversity_scheme": scheme.value,
            "agreement_mode": mode.value,
            "grammar_source": GRAMMAR_EXTERNAL if grammar_counts is not None else GRAMMAR_NAIVE,
        },
        "rows": {
            "all": _row(gens, full, mcmrc, qc, grammar_counts, base, scheme),
            "filtered": _row(kept, filtered, mcmrc, qc, grammar_counts, base, scheme),
        },
    }
    return report
