"""Build tiny randomly initialized local checkpoints.

This sandbox-friendly helper materializes ensembles that AutoModel can load
from disk without any network access: a word-level tokenizer trained on the
dataset's own text plus small randomly weighted encoder models. The outputs
are only useful for exercising the prediction pipeline end to end; they have
no predictive value.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import torch
from tokenizers import Tokenizer, models, pre_tokenizers, trainers
from transformers import (
    ElectraConfig,
    ElectraForMultipleChoice,
    ElectraForSequenceClassification,
    PreTrainedTokenizerFast,
)

from .records import InputItem

SPECIAL_TOKENS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]


def build_tokenizer(corpus: Iterable[str]) -> PreTrainedTokenizerFast:
    tok = Tokenizer(models.WordLevel(unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordLevelTrainer(special_tokens=SPECIAL_TOKENS)
    tok.train_from_iterator(corpus, trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        pad_token="[PAD]", unk_token="[UNK]", cls_token="[CLS]", sep_token="[SEP]",
    )


def _tiny_config(vocab_size: int, **kwargs) -> ElectraConfig:
    return ElectraConfig(
        vocab_size=vocab_size,
        embedding_size=16,
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=512,
        **kwargs,
    )


def corpus_from_items(items: Iterable[InputItem]) -> list[str]:
    lines = []
    for item in items:
        lines.append(item.context)
        lines.append(item.question)
        lines.extend(item.options)
    return lines


def build_ensemble_dirs(out_dir: str | Path, purpose: str, count: int,
                        corpus: Iterable[str], seed: int = 0) -> list[str]:
    """Write `count` member checkpoints under out_dir and return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer = build_tokenizer(corpus)
    paths = []
    for member in range(count):
        member_dir = out_dir / f"member-{member}"
        torch.manual_seed(seed + member)
        if purpose == "mcmrc":
            model = ElectraForMultipleChoice(_tiny_config(len(tokenizer)))
        elif purpose == "qc":
            model = ElectraForSequenceClassification(
                _tiny_config(len(tokenizer), num_labels=3))
        else:
            raise ValueError(f"unknown purpose {purpose!r}")
        tokenizer.save_pretrained(member_dir)
        model.save_pretrained(member_dir)
        paths.append(str(member_dir))
    return paths
