"""Command-line surface for the assessment workflow and the scaling simulator.

Subcommands:

    assess      full-set and filtered-set quality report for generations
    filter      validity filtering and optional augmentation export
    tune-vocab  grid-search the vocab-score thresholds on a labeled dev split
    baselines   majority-class and vocab-based difficulty baselines
    simulate    best-of-J reference-scaling experiments

Every report embeds the configuration it was produced with (entropy base,
diversity scheme, agreement mode, seed), and a fixed seed plus fixed inputs
yields byte-identical machine-readable output. Exit codes: 0 success,
1 validation error, 2 I/O error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .assess import build_assessment, load_grammar_report
from .corpus import DEFAULT_SEPARATOR, Difficulty, Split, load_dataset, load_generated
from .errors import MissingDifficultyLabels, ToolkitError, WriteFailure
from .filtering import AgreementMode, filter_set, to_examples, export_augmentation
from .metrics import BITS, NATS, DiversityScheme, accuracy, macro_f1
from .predictions import Purpose, load_predictions
from .refsim import SimPosterior, linearity_check, simulate_exact_match, simulate_overlap
from .vocab import classify_by_threshold, load_lexicon, tune_thresholds, vocab_score

_BASE_CHOICE = click.Choice([NATS, BITS])
_SCHEME_CHOICE = click.Choice([s.value for s in DiversityScheme])
_AGREEMENT_CHOICE = click.Choice([m.value for m in AgreementMode])


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise WriteFailure(f"cannot write {out}: {exc}") from exc


def _as_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _as_csv(rows: list[list]) -> str:
    return "\n".join(",".join(str(cell) for cell in row) for row in rows) + "\n"


def _as_md(rows: list[list]) -> str:
    header, *body = rows
    lines = ["| " + " | ".join(str(c) for c in header) + " |",
             "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in body]
    return "\n".join(lines) + "\n"


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, (WriteFailure, OSError)):
        sys.exit(2)
    sys.exit(1)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Assessment toolkit for multiple-choice question generation."""


def _assess_table(report: dict) -> list[list]:
    rows = [["set", "n", "four_opt_rate", "accuracy", "A", "C", "D_bits", "G"]]
    for name in ("all", "filtered"):
        row = report["rows"][name]
        rows.append([
            name, row["n_questions"], repr(row["four_opt_rate"]),
            repr(row["accuracy"]),
            repr(row["A"]["value"]) if row["A"]["value"] is not None else "",
            repr(row["C"]) if row["C"] is not None else "",
            repr(row["D"]["value_bits"]), repr(row["G"]),
        ])
    return rows


@main.command()
@click.option("--generations", required=True, type=click.Path(exists=True))
@click.option("--mcmrc-preds", required=True, type=click.Path(exists=True))
@click.option("--qc-preds", type=click.Path(exists=True))
@click.option("--grammar-report", type=click.Path(exists=True),
              help="External checker counts; defaults to the naive built-in checker.")
@click.option("--separator", default=DEFAULT_SEPARATOR, show_default=True)
@click.option("--entropy-base", type=_BASE_CHOICE, default=NATS, show_default=True)
@click.option("--diversity-scheme", type=_SCHEME_CHOICE,
              default=DiversityScheme.BINARY.value, show_default=True)
@click.option("--agreement", type=_AGREEMENT_CHOICE,
              default=AgreementMode.PER_MEMBER_ARGMAX.value, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "md"]), default="json")
def assess(generations, mcmrc_preds, qc_preds, grammar_report, separator,
           entropy_base, diversity_scheme, agreement, seed, out, fmt) -> None:
    """Quality report (four-option rate, accuracy, A, C, D, G) for a generation set."""
    try:
        gens = load_generated(generations, separator)
        mcmrc = load_predictions(mcmrc_preds, Purpose.MCMRC)
        qc = load_predictions(qc_preds, Purpose.QC) if qc_preds else None
        counts = load_grammar_report(grammar_report) if grammar_report else None
        report = build_assessment(
            gens, mcmrc, qc, counts,
            base=entropy_base,
            scheme=DiversityScheme(diversity_scheme),
            mode=AgreementMode(agreement),
        )
        report["config"]["seed"] = seed
        report["config"]["separator"] = separator
        if fmt == "json":
            _emit(_as_json(report), out)
        elif fmt == "csv":
            _emit(_as_csv(_assess_table(report)), out)
        else:
            _emit(_as_md(_assess_table(report)), out)
    except (ToolkitError, OSError) as exc:
        _fail(exc)


@main.command("filter")
@click.option("--generations", required=True, type=click.Path(exists=True))
@click.option("--mcmrc-preds", required=True, type=click.Path(exists=True))
@click.option("--dataset", type=click.Path(exists=True),
              help="Context source, needed only for --export-dataset.")
@click.option("--export-dataset", type=click.Path(),
              help="Write kept items as a dataset-schema JSON-lines file.")
@click.option("--separator", default=DEFAULT_SEPARATOR, show_default=True)
@click.option("--agreement", type=_AGREEMENT_CHOICE,
              default=AgreementMode.PER_MEMBER_ARGMAX.value, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "md"]), default="json")
def filter_cmd(generations, mcmrc_preds, dataset, export_dataset, separator,
               agreement, seed, out, fmt) -> None:
    """Keep generations with four unique options and unanimous first-option agreement."""
    try:
        gens = load_generated(generations, separator)
        mcmrc = load_predictions(mcmrc_preds, Purpose.MCMRC)
        result = filter_set(gens, mcmrc, AgreementMode(agreement))
        if export_dataset:
            if not dataset:
                raise ToolkitError("--export-dataset needs --dataset for the context texts")
            contexts = {ex.context_id: ex.context
                        for ex in load_dataset(dataset, Split.TRN)}
            export_augmentation(to_examples(result.kept, contexts), export_dataset)
        payload = {
            "config": {"agreement_mode": result.mode.value, "seed": seed,
                       "separator": separator},
            "summary": result.summary(),
            "outcomes": [
                {"question_id": o.question_id, "four_unique": o.four_unique,
                 "ensemble_agrees_first": o.ensemble_agrees_first, "kept": o.kept}
                for o in result.outcomes
            ],
        }
        if fmt == "json":
            _emit(_as_json(payload), out)
        else:
            rows = [["n_input", "n_parsed", "four_opt_rate", "four_opt_rate_parsed",
                     "accuracy", "n_kept", "mode"]]
            s = result.summary()
            rows.append([s["n_input"], s["n_parsed"], repr(s["four_opt_rate"]),
                         repr(s["four_opt_rate_parsed"]), repr(s["accuracy"]),
                         s["n_kept"], s["mode"]])
            _emit(_as_csv(rows) if fmt == "csv" else _as_md(rows), out)
    except (ToolkitError, OSError) as exc:
        _fail(exc)


@main.command("tune-vocab")
@click.option("--dataset", "dev_path", required=True, type=click.Path(exists=True),
              help="Labeled dev split used for tuning.")
@click.option("--lexicon", required=True, type=click.Path(exists=True))
@click.option("--eval-dataset", type=click.Path(exists=True),
              help="Optional second split to evaluate the tuned thresholds on.")
@click.option("--grid-step", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path())
def tune_vocab(dev_path, lexicon, eval_dataset, grid_step, seed, out) -> None:
    """Tune the easy/medium and medium/hard vocab-score thresholds on a dev split."""
    try:
        dev = load_dataset(dev_path, Split.DEV)
        lex = load_lexicon(lexicon)
        thresholds, dev_acc = tune_thresholds(dev, lex, grid_step)
        payload = {"t1": thresholds.t1, "t2": thresholds.t2, "dev_accuracy": dev_acc,
                   "config": {"grid_step": grid_step, "seed": seed}}
        if eval_dataset:
            evl = load_dataset(eval_dataset, Split.EVL)
            unlabeled = [ex for ex in evl if ex.difficulty_label is None]
            if unlabeled:
                raise MissingDifficultyLabels(
                    f"{len(unlabeled)} eval examples lack difficulty labels")
            preds = [classify_by_threshold(vocab_score(ex, lex), thresholds)
                     for ex in evl]
            payload["eval_accuracy"] = accuracy(
                preds, [ex.difficulty_label for ex in evl])
        _emit(_as_json(payload), out)
    except (ToolkitError, OSError) as exc:
        _fail(exc)


def _baseline_rows(examples, lex, thresholds, split_name: str) -> list[dict]:
    labels = [ex.difficulty_label for ex in examples]
    if any(lab is None for lab in labels):
        raise MissingDifficultyLabels(f"{split_name} has unlabeled examples")
    order = [Difficulty.EASY, Difficulty.MEDIUM, Difficulty.HARD]
    majority = max(order, key=lambda d: (labels.count(d), -order.index(d)))
    rows = []

    def row(system: str, preds) -> dict:
        acc = accuracy(preds, labels)
        f1 = macro_f1(preds, labels, order)
        return {"system": system, "split": split_name,
                "accuracy": acc, "accuracy_pct": round(100 * acc, 2),
                "macro_f1": f1, "macro_f1_pct": round(100 * f1, 2)}

    rows.append(row("majority_class", [majority] * len(labels)))
    if lex is not None:
        preds = [classify_by_threshold(vocab_score(ex, lex), thresholds)
                 for ex in examples]
        rows.append(row("vocab_based", preds))
    return rows


@main.command()
@click.option("--dataset", required=True, type=click.Path(exists=True),
              help="Labeled evaluation split.")
@click.option("--dev-dataset", type=click.Path(exists=True),
              help="Labeled dev split; reported alongside and used to tune vocab thresholds.")
@click.option("--lexicon", type=click.Path(exists=True),
              help="Adds the vocab-based baseline rows.")
@click.option("--grid-step", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "md"]), default="json")
def baselines(dataset, dev_dataset, lexicon, grid_step, seed, out, fmt) -> None:
    """Majority-class and vocab-based difficulty classification baselines."""
    try:
        evl = load_dataset(dataset, Split.EVL)
        dev = load_dataset(dev_dataset, Split.DEV) if dev_dataset else None
        lex = load_lexicon(lexicon) if lexicon else None
        thresholds = None
        if lex is not None:
            tune_on = dev if dev is not None else evl
            thresholds, _ = tune_thresholds(tune_on, lex, grid_step)
        rows: list[dict] = []
        if dev is not None:
            rows += _baseline_rows(dev, lex, thresholds, "dev")
        rows += _baseline_rows(evl, lex, thresholds, "evl")
        payload = {"config": {"grid_step": grid_step, "seed": seed,
                              "thresholds": None if thresholds is None else
                              {"t1": thresholds.t1, "t2": thresholds.t2}},
                   "rows": rows}
        if fmt == "json":
            _emit(_as_json(payload), out)
        else:
            table = [["system", "split", "accuracy_pct", "macro_f1_pct"]]
            table += [[r["system"], r["split"], f"{r['accuracy_pct']:.2f}",
                       f"{r['macro_f1_pct']:.2f}"] for r in rows]
            _emit(_as_csv(table) if fmt == "csv" else _as_md(table), out)
    except (ToolkitError, OSError) as exc:
        _fail(exc)


def _parse_probs(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ToolkitError(f"cannot parse probabilities {text!r}: {exc}") from exc


def _build_posterior(family, m, zipf_exponent, probs, positions, posterior_file):
    if posterior_file:
        spec = json.loads(Path(posterior_file).read_text(encoding="utf-8"))
        if "explicit" in spec:
            return SimPosterior.explicit(spec["explicit"])
        if "positionwise" in spec:
            return SimPosterior.positionwise(spec["positionwise"])
        raise ToolkitError(
            f"{posterior_file}: expected an 'explicit' or 'positionwise' key")
    if family == "zipf":
        return SimPosterior.zipf(m, zipf_exponent)
    if family == "uniform":
        return SimPosterior.uniform(m)
    if family == "explicit":
        if not probs:
            raise ToolkitError("--family explicit needs --probs")
        return SimPosterior.explicit(_parse_probs(probs))
    if family == "positionwise":
        if not probs:
            raise ToolkitError("--family positionwise needs --probs")
        return SimPosterior.iid_positions(positions, _parse_probs(probs))
    raise ToolkitError(f"unknown posterior family {family!r}")


@main.command()
@click.option("--framework", type=click.Choice(["exact_match", "overlap"]),
              default="exact_match", show_default=True)
@click.option("--family", type=click.Choice(["zipf", "uniform", "explicit", "positionwise"]),
              default="zipf", show_default=True)
@click.option("--m", type=int, default=1000, show_default=True,
              help="Outcome count for zipf/uniform families.")
@click.option("--zipf-exponent", type=float, default=1.0, show_default=True)
@click.option("--probs", help="Comma-separated probabilities (explicit/positionwise families).")
@click.option("--positions", type=int, default=2, show_default=True,
              help="Sequence length for the positionwise family.")
@click.option("--posterior-file", type=click.Path(exists=True),
              help='JSON {"explicit": [...]} or {"positionwise": [[...], ...]}.')
@click.option("--j-values", default="1,2,3,4,5,6,7,8,9,10", show_default=True)
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=20240601, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--linearity-tol", type=float, default=0.01, show_default=True)
@click.option("--out", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def simulate(framework, family, m, zipf_exponent, probs, positions, posterior_file,
             j_values, trials, seed, threads, linearity_tol, out, fmt) -> None:
    """Monte Carlo best-of-J reference scaling, with closed forms where available."""
    try:
        posterior = _build_posterior(family, m, zipf_exponent, probs, positions,
                                     posterior_file)
        js = [int(x) for x in j_values.split(",") if x.strip() != ""]
        if framework == "exact_match":
            result = simulate_exact_match(posterior, js, trials, seed, threads)
        else:
            result = simulate_overlap(posterior, js, trials, seed, threads)
        if fmt == "csv":
            _emit(_as_csv(result.to_csv_rows()), out)
            return
        payload = {
            "config": {
                "framework": framework, "family": family,
                "m": m if family in ("zipf", "uniform") else None,
                "zipf_exponent": zipf_exponent if family == "zipf" else None,
                "probs": probs, "positions": positions if family == "positionwise" else None,
                "posterior_file": posterior_file,
                "trials": trials, "seed": seed, "threads": threads,
            },
            "result": result.to_dict(),
        }
        if 1 in result.j_values:
            rep = linearity_check(result, rel_tol=linearity_tol)
            payload["linearity"] = {
                "passed": rep.passed, "p_star": rep.p_star, "rel_tol": rep.rel_tol,
                "checked_j": list(rep.checked_j),
                "deviations": {str(j): d for j, d in rep.deviations.items()},
                "saturation_onset": rep.saturation_onset,
                "saturation_tol": rep.saturation_tol,
            }
        _emit(_as_json(payload), out)
    except (ToolkitError, OSError) as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
