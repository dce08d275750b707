"""Command-line entry points for the adapter scripts."""

from __future__ import annotations

import logging
import sys

import click
from transformers.utils import logging as hf_logging

from .config import AdapterConfig
from .emit import emit_mcmrc_predictions, emit_qc_predictions
from .records import DEFAULT_SEPARATOR, load_dataset_items, load_generation_items
from .tinymodels import build_ensemble_dirs, corpus_from_items


@click.group()
def main() -> None:
    """Run classifier ensembles over dataset files and emit prediction files."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    hf_logging.disable_progress_bar()


def _load_items(dataset, generations, separator):
    if generations:
        if not dataset:
            raise click.UsageError("--generations needs --dataset for the context texts")
        return load_generation_items(generations, dataset, separator)
    if not dataset:
        raise click.UsageError("provide --dataset (and optionally --generations)")
    return load_dataset_items(dataset)


_shared = [
    click.option("--models", "model_ids", multiple=True, required=True,
                 help="Model path or identifier; repeat once per ensemble member."),
    click.option("--dataset", type=click.Path(exists=True)),
    click.option("--out", "output_path", required=True, type=click.Path()),
    click.option("--max-length", type=int, default=512, show_default=True),
    click.option("--batch-size", type=int, default=8, show_default=True),
    click.option("--seed", type=int, default=0, show_default=True),
]


def shared_options(fn):
    for opt in reversed(_shared):
        fn = opt(fn)
    return fn


@main.command("emit-mcmrc")
@shared_options
@click.option("--generations", type=click.Path(exists=True),
              help="Score generated questions instead of dataset questions.")
@click.option("--separator", default=DEFAULT_SEPARATOR, show_default=True)
def emit_mcmrc(model_ids, dataset, output_path, max_length, batch_size, seed,
               generations, separator) -> None:
    """Emit answer-option probability rows over [A, B, C, D]."""
    try:
        items = _load_items(dataset, generations, separator)
        config = AdapterConfig(model_ids=model_ids, purpose="mcmrc",
                               output_path=output_path, max_input_length=max_length,
                               batch_size=batch_size, seed=seed)
        emit_mcmrc_predictions(config, items)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command("emit-qc")
@shared_options
def emit_qc(model_ids, dataset, output_path, max_length, batch_size, seed) -> None:
    """Emit difficulty probability rows over [easy, medium, hard]."""
    try:
        items = load_dataset_items(dataset) if dataset else None
        if items is None:
            raise click.UsageError("provide --dataset")
        config = AdapterConfig(model_ids=model_ids, purpose="qc",
                               output_path=output_path, max_input_length=max_length,
                               batch_size=batch_size, seed=seed)
        emit_qc_predictions(config, items)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command("make-tiny")
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--purpose", type=click.Choice(["mcmrc", "qc"]), required=True)
@click.option("--count", type=int, default=3, show_default=True)
@click.option("--dataset", type=click.Path(exists=True), required=True,
              help="Used only to harvest the tokenizer vocabulary.")
@click.option("--seed", type=int, default=0, show_default=True)
def make_tiny(out_dir, purpose, count, dataset, seed) -> None:
    """Materialize a tiny random local ensemble for offline pipeline tests."""
    items = load_dataset_items(dataset)
    paths = build_ensemble_dirs(out_dir, purpose, count,
                                corpus_from_items(items), seed)
    for path in paths:
        click.echo(path)


if __name__ == "__main__":
    main()
