"""Run classifier ensembles over input items and emit prediction files.

Each ensemble member is loaded with AutoModel*/AutoTokenizer from a local
path or hub identifier, run in eval mode (inference is deterministic), and
its softmaxed probabilities are written as one member row per model. The
output follows the evaluation toolkit's prediction schema:

    {"purpose": ..., "ensemble_size": K}
    {"question_id": ..., "labels": [...], "members": [[...], ...]}

Inputs longer than the configured maximum are truncated by the tokenizer and
logged per question.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Sequence

import numpy as np
import torch
from transformers import (
    AutoModelForMultipleChoice,
    AutoModelForSequenceClassification,
    AutoTokenizer,
)

from .config import AdapterConfig
from .records import InputItem

log = logging.getLogger(__name__)

MCMRC_LABELS = ["A", "B", "C", "D"]
QC_LABELS = ["easy", "medium", "hard"]


def _batches(items: Sequence[InputItem], size: int):
    for start in range(0, len(items), size):
        yield items[start:start + size]


def _log_truncation(tokenizer, firsts: list[str], seconds: list[str],
                    question_id: str, max_length: int) -> bool:
    lengths = [len(tokenizer(a, b)["input_ids"]) for a, b in zip(firsts, seconds)]
    if max(lengths) > max_length:
        log.warning("input for %s truncated (%d > %d tokens)",
                    question_id, max(lengths), max_length)
        return True
    return False


def _mcmrc_member_probs(model, tokenizer, items: Sequence[InputItem],
                        config: AdapterConfig) -> np.ndarray:
    probs = []
    for batch in _batches(items, config.batch_size):
        firsts, seconds = [], []
        for item in batch:
            for option in item.options:
                firsts.append(item.context)
                seconds.append(f"{item.question} {option}")
        enc = tokenizer(firsts, seconds, truncation=True,
                        max_length=config.max_input_length, padding=True,
                        return_tensors="pt")
        shaped = {k: v.view(len(batch), 4, -1) for k, v in enc.items()}
        with torch.no_grad():
            logits = model(**shaped).logits
        probs.append(torch.softmax(logits, dim=-1).numpy())
    return np.concatenate(probs, axis=0)


def _qc_member_probs(model, tokenizer, items: Sequence[InputItem],
                     config: AdapterConfig) -> np.ndarray:
    sep = tokenizer.sep_token or "[SEP]"
    probs = []
    for batch in _batches(items, config.batch_size):
        firsts = [item.question for item in batch]
        seconds = [f" {sep} ".join((item.context, *item.options)) for item in batch]
        enc = tokenizer(firsts, seconds, truncation=True,
                        max_length=config.max_input_length, padding=True,
                        return_tensors="pt")
        with torch.no_grad():
            logits = model(**enc).logits
        probs.append(torch.softmax(logits, dim=-1).numpy())
    return np.concatenate(probs, axis=0)


def _check_truncation(tokenizer, items: Sequence[InputItem],
                      config: AdapterConfig) -> int:
    truncated = 0
    for item in items:
        if config.purpose == "mcmrc":
            firsts = [item.context] * 4
            seconds = [f"{item.question} {opt}" for opt in item.options]
        else:
            sep = tokenizer.sep_token or "[SEP]"
            firsts = [item.question]
            seconds = [f" {sep} ".join((item.context, *item.options))]
        truncated += _log_truncation(tokenizer, firsts, seconds, item.question_id,
                                     config.max_input_length)
    return truncated


def _write_file(path: Path, purpose: str, labels: list[str],
                items: Sequence[InputItem], member_probs: list[np.ndarray]) -> None:
    k = len(member_probs)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"purpose": purpose, "ensemble_size": k}) + "\n")
        for i, item in enumerate(items):
            rows = []
            for member in member_probs:
                row = member[i].astype(float)
                rows.append((row / row.sum()).tolist())  # exact row sums
            fh.write(json.dumps({"question_id": item.question_id,
                                 "labels": labels, "members": rows}) + "\n")


def _run_ensemble(config: AdapterConfig, items: Sequence[InputItem],
                  load_model, member_fn, labels: list[str]) -> Path:
    if not items:
        raise ValueError("no input items to predict on")
    torch.manual_seed(config.seed)
    member_probs = []
    for model_id in config.model_ids:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = load_model(model_id)
        model.eval()
        member_probs.append(member_fn(model, tokenizer, items, config))
    truncated = _check_truncation(tokenizer, items, config)
    if truncated:
        log.warning("%d of %d inputs were truncated to %d tokens",
                    truncated, len(items), config.max_input_length)
    _write_file(config.output_path, config.purpose, labels, items, member_probs)
    log.info("wrote %d predictions x %d members to %s",
             len(items), config.ensemble_size, config.output_path)
    return config.output_path


def emit_mcmrc_predictions(config: AdapterConfig,
                           items: Sequence[InputItem]) -> Path:
    """Answer-option probabilities from a multiple-choice ensemble."""
    if config.purpose != "mcmrc":
        raise ValueError(f"config purpose is {config.purpose!r}, expected 'mcmrc'")
    return _run_ensemble(config, items, AutoModelForMultipleChoice.from_pretrained,
                         _mcmrc_member_probs, MCMRC_LABELS)


def emit_qc_predictions(config: AdapterConfig,
                        items: Sequence[InputItem]) -> Path:
    """easy/medium/hard probabilities from a complexity-classifier ensemble."""
    if config.purpose != "qc":
        raise ValueError(f"config purpose is {config.purpose!r}, expected 'qc'")
    return _run_ensemble(config, items, AutoModelForSequenceClassification.from_pretrained,
                         _qc_member_probs, QC_LABELS)
