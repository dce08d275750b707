"""Adapter run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

PURPOSES = ("mcmrc", "qc")

# Input constructions, one per purpose: the reading-comprehension models see
# context then question+option (repeated per option in parallel); the
# complexity classifier sees question, then context and all options joined
# with separator tokens.
TEMPLATES = {
    "mcmrc": "context | question option (x4)",
    "qc": "question | context [SEP] optionA..D",
}


@dataclass
class AdapterConfig:
    model_ids: tuple[str, ...]
    purpose: str
    output_path: Path
    max_input_length: int = 512
    batch_size: int = 8
    seed: int = 0

    def __post_init__(self) -> None:
        self.model_ids = tuple(self.model_ids)
        if not self.model_ids:
            raise ValueError("need at least one model identifier")
        if self.purpose not in PURPOSES:
            raise ValueError(f"purpose must be one of {PURPOSES}, got {self.purpose!r}")
        if self.max_input_length < 8:
            raise ValueError("max_input_length is too small to fit any input")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        self.output_path = Path(self.output_path)

    @property
    def ensemble_size(self) -> int:
        return len(self.model_ids)

    @property
    def template(self) -> str:
        return TEMPLATES[self.purpose]
