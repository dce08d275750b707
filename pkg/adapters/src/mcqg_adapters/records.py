"""Read the toolkit's dataset and generated-output file formats.

Only the wire format is consumed here; full validation belongs to the
evaluation toolkit. The adapter needs a question id, a context, a question
and exactly four options per item.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

log = logging.getLogger(__name__)

DEFAULT_SEPARATOR = "[SEP]"


@dataclass(frozen=True)
class InputItem:
    question_id: str
    context: str
    question: str
    options: tuple[str, ...]


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
    return rows


def load_dataset_items(path: str | Path) -> list[InputItem]:
    """Items from a dataset file; records without exactly 4 options are errors."""
    items = []
    for rec in _read_jsonl(Path(path)):
        options = tuple(rec["options"])
        if len(options) != 4:
            raise ValueError(
                f"example {rec.get('example_id')!r} has {len(options)} options, "
                "the reading-comprehension input needs exactly 4")
        items.append(InputItem(question_id=rec["example_id"], context=rec["context"],
                               question=rec["question"], options=options))
    return items


def load_generation_items(generations_path: str | Path, dataset_path: str | Path,
                          separator: str = DEFAULT_SEPARATOR) -> list[InputItem]:
    """Items from a generated-output file, joined to contexts by context_id.

    Generations without exactly four unique options are skipped (the
    evaluation toolkit only expects predictions for the four-option subset).
    """
    contexts = {rec["context_id"]: rec["context"]
                for rec in _read_jsonl(Path(dataset_path))}
    items = []
    skipped = 0
    for rec in _read_jsonl(Path(generations_path)):
        cid = rec["context_id"]
        segments = [seg.strip() for seg in rec["raw"].split(separator)]
        question, options = segments[0], segments[1:]
        if (len(segments) < 2 or any(s == "" for s in segments)
                or len(options) != 4 or len(set(options)) != 4):
            skipped += 1
            log.info("skipping %s: not a four-unique-option generation", cid)
            continue
        if cid not in contexts:
            raise ValueError(f"generation {cid!r} has no context in {dataset_path}")
        items.append(InputItem(question_id=cid, context=contexts[cid],
                               question=question, options=tuple(options)))
    if skipped:
        log.warning("skipped %d generation(s) without four unique options", skipped)
    return items
