"""Fixtures: a 10-question dataset file and tiny local ensembles."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from mcqg_adapters.records import load_dataset_items
from mcqg_adapters.tinymodels import build_ensemble_dirs, corpus_from_items


def ten_question_rows() -> list[dict]:
    rows = []
    for i in range(10):
        rows.append({
            "example_id": f"q{i}",
            "context_id": f"c{i}",
            "context": f"The town hall of district {i} opened after a long "
                       f"renovation that cost the council {i} million.",
            "question": f"What happened in district {i}?",
            "options": [f"the hall opened {i}", f"the hall closed {i}",
                        f"nothing happened {i}", f"the council moved {i}"],
            "answer": "A",
        })
    return rows


@pytest.fixture(scope="session")
def dataset_path(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("data") / "dataset.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in ten_question_rows()),
                    encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def mcmrc_model_dirs(tmp_path_factory, dataset_path) -> list[str]:
    corpus = corpus_from_items(load_dataset_items(dataset_path))
    return build_ensemble_dirs(tmp_path_factory.mktemp("mcmrc-models"),
                               "mcmrc", count=3, corpus=corpus, seed=11)


@pytest.fixture(scope="session")
def qc_model_dirs(tmp_path_factory, dataset_path) -> list[str]:
    corpus = corpus_from_items(load_dataset_items(dataset_path))
    return build_ensemble_dirs(tmp_path_factory.mktemp("qc-models"),
                               "qc", count=3, corpus=corpus, seed=23)
