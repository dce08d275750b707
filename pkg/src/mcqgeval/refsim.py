"""Simulator for how best-of-J reference scoring scales with J.

When a model's output is scored against the best of J references drawn
independently from the true output posterior, the expected exact-match
performance of the modal output is 1 - (1 - p*)^J, where p* is the modal
probability. For small J*p* this grows linearly in J and then saturates.
The same machinery covers a position-wise overlap score (fraction of
positions matching the modal sequence, max over the J references), which
degenerates to exact match at sequence length 1.

Posteriors come in two kinds: an explicit categorical over M outcomes, and a
factorized sequence posterior with independent per-position categoricals
(joint over V^T sequences). Both support Monte Carlo simulation with a
seedable generator whose per-trial substream is derived from (seed, trial
index), so serial and parallel runs produce identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Sequence

import numpy as np

from .errors import (
    DomainError,
    InvalidDistribution,
    LengthMismatch,
    PosteriorKindMismatch,
)
from .metrics import NATS, entropy

POSTERIOR_SUM_TOL = 1e-9

# Exact enumeration of the overlap expectation is attempted only below these
# limits; larger instances get Monte Carlo estimates only.
ENUM_MAX_OUTCOMES = 4096
ENUM_MAX_J = 3


class PosteriorKind(Enum):
    EXPLICIT = "explicit"
    POSITIONWISE = "positionwise"


def _check_distribution(vec: np.ndarray, what: str) -> np.ndarray:
    vec = np.asarray(vec, dtype=float)
    if vec.ndim != 1 or vec.size == 0:
        raise InvalidDistribution(f"{what} must be a non-empty 1-d vector")
    if np.any(vec < 0.0):
        raise InvalidDistribution(f"{what} has negative entries")
    if abs(float(vec.sum()) - 1.0) > POSTERIOR_SUM_TOL:
        raise InvalidDistribution(
            f"{what} sums to {float(vec.sum())!r}, expected 1 within {POSTERIOR_SUM_TOL}")
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True)
class SimPosterior:
    """A synthetic output-sequence distribution.

    Use the explicit()/positionwise() constructors or the zipf()/uniform()
    families. The modal outcome is always well defined; argmax ties break to
    the lowest index.
    """

    kind: PosteriorKind
    probs: np.ndarray  # explicit: (M,); positionwise: (T, V)

    @staticmethod
    def explicit(probs: Sequence[float] | np.ndarray) -> "SimPosterior":
        vec = _check_distribution(np.asarray(probs, dtype=float), "outcome distribution")
        return SimPosterior(kind=PosteriorKind.EXPLICIT, probs=vec)

    @staticmethod
    def positionwise(rows: Sequence[Sequence[float]] | np.ndarray) -> "SimPosterior":
        arr = np.asarray(rows, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise InvalidDistribution("positionwise posterior must be a (T, V) matrix")
        for t in range(arr.shape[0]):
            _check_distribution(arr[t], f"position {t} distribution")
        arr = arr.copy()
        arr.setflags(write=False)
        return SimPosterior(kind=PosteriorKind.POSITIONWISE, probs=arr)

    @staticmethod
    def zipf(m: int, exponent: float = 1.0) -> "SimPosterior":
        """Heavy-tailed categorical with p_i proportional to 1 / rank^exponent."""
        if m < 1:
            raise DomainError(f"need at least one outcome, got m={m}")
        ranks = np.arange(1, m + 1, dtype=float)
        weights = ranks ** -exponent
        return SimPosterior.explicit(weights / weights.sum())

    @staticmethod
    def uniform(m: int) -> "SimPosterior":
        if m < 1:
            raise DomainError(f"need at least one outcome, got m={m}")
        return SimPosterior.explicit(np.full(m, 1.0 / m))

    @staticmethod
    def iid_positions(length: int, probs: Sequence[float]) -> "SimPosterior":
        """Factorized posterior with the same per-position distribution everywhere."""
        if length < 1:
            raise DomainError(f"need at least one position, got length={length}")
        row = np.asarray(probs, dtype=float)
        return SimPosterior.positionwise(np.tile(row, (length, 1)))

    @property
    def n_outcomes(self) -> int:
        if self.kind is PosteriorKind.EXPLICIT:
            return int(self.probs.shape[0])
        t, v = self.probs.shape
        return int(v ** t)

    def modal_outcome(self) -> int | np.ndarray:
        """Most probable outcome: an index (explicit) or a token sequence."""
        if self.kind is PosteriorKind.EXPLICIT:
            return int(np.argmax(self.probs))
        return np.argmax(self.probs, axis=1)

    def modal_probability(self) -> float:
        if self.kind is PosteriorKind.EXPLICIT:
            return float(self.probs[int(np.argmax(self.probs))])
        return float(np.prod(np.max(self.probs, axis=1)))


def conditional_entropy(p: SimPosterior, base: str = NATS) -> float:
    """Entropy of the joint outcome distribution.

    For the factorized kind this is the sum of per-position entropies, which
    equals the entropy of the full joint by independence. Bounded by 0 below
    and log(number of outcomes) above.
    """
    if p.kind is PosteriorKind.EXPLICIT:
        return entropy(p.probs, base)
    return float(sum(entropy(row, base) for row in p.probs))


def exact_match_closed_form(p_star: float, j: int) -> float:
    """Probability that at least one of j independent draws hits the mode."""
    if not (0.0 <= p_star <= 1.0):
        raise DomainError(f"p_star must be in [0, 1], got {p_star}")
    if j < 1:
        raise DomainError(f"need at least one draw, got j={j}")
    return 1.0 - (1.0 - p_star) ** j


@dataclass(frozen=True)
class SimResult:
    """Monte Carlo estimates per J, with closed-form values where available."""

    j_values: tuple[int, ...]
    estimates: tuple[float, ...]
    stderrs: tuple[float, ...]
    closed_form: tuple[float | None, ...]
    trials: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "points": [
                {"J": j, "estimate": est, "stderr": se, "closed_form": cf}
                for j, est, se, cf in zip(self.j_values, self.estimates,
                                          self.stderrs, self.closed_form)
            ],
        }

    def to_csv_rows(self) -> list[list]:
        rows: list[list] = [["J", "estimate", "stderr", "closed_form"]]
        for j, est, se, cf in zip(self.j_values, self.estimates,
                                  self.stderrs, self.closed_form):
            rows.append([j, repr(est), repr(se), "" if cf is None else repr(cf)])
        return rows


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # The documented substream contract: stream identity depends only on
    # (seed, trial index), never on execution order.
    return np.random.default_rng([seed, trial])


def _draw_outcomes(p: SimPosterior, count: int,
                   rng: np.random.Generator) -> np.ndarray:
    """Draw `count` outcomes by inverse-CDF sampling.

    Returns shape (count,) of outcome indices for explicit posteriors and
    (count, T) of token indices for positionwise ones.
    """
    if p.kind is PosteriorKind.EXPLICIT:
        cdf = np.cumsum(p.probs)
        u = rng.random(count)
        return np.minimum(np.searchsorted(cdf, u, side="right"), p.probs.size - 1)
    t_len, v = p.probs.shape
    u = rng.random((count, t_len))
    idx = np.empty((count, t_len), dtype=np.int64)
    for t in range(t_len):
        cdf = np.cumsum(p.probs[t])
        idx[:, t] = np.minimum(np.searchsorted(cdf, u[:, t], side="right"), v - 1)
    return idx


def _prefix_max_performance(per_draw: np.ndarray, j_values: Sequence[int]) -> np.ndarray:
    cummax = np.maximum.accumulate(per_draw)
    return np.array([cummax[j - 1] for j in j_values])


def _check_sim_args(j_values: Sequence[int], trials: int) -> tuple[int, ...]:
    js = tuple(int(j) for j in j_values)
    if not js or any(j < 1 for j in js):
        raise DomainError(f"J values must be positive integers, got {list(j_values)!r}")
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    return js


def _run_trials(p: SimPosterior, js: tuple[int, ...], trials: int, seed: int,
                per_draw_fn, threads: int) -> np.ndarray:
    """Fill a (trials, len(js)) performance matrix using per-trial substreams."""
    j_max = max(js)
    perf = np.empty((trials, len(js)))

    def run_range(lo: int, hi: int) -> None:
        for trial in range(lo, hi):
            rng = _trial_rng(seed, trial)
            draws = _draw_outcomes(p, j_max, rng)
            perf[trial] = _prefix_max_performance(per_draw_fn(draws), js)

    if threads <= 1:
        run_range(0, trials)
    else:
        chunk = math.ceil(trials / threads)
        bounds = [(i, min(i + chunk, trials)) for i in range(0, trials, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda b: run_range(*b), bounds))
    return perf


def _summarize(perf: np.ndarray) -> tuple[list[float], list[float]]:
    estimates = [float(col.mean()) for col in perf.T]
    if perf.shape[0] > 1:
        stderrs = [float(col.std(ddof=1) / math.sqrt(perf.shape[0])) for col in perf.T]
    else:
        stderrs = [0.0] * perf.shape[1]
    return estimates, stderrs


def simulate_exact_match(p: SimPosterior, j_values: Sequence[int], trials: int,
                         seed: int, threads: int = 1) -> SimResult:
    """Monte Carlo best-of-J exact-match performance of the modal outcome.

    Per trial, J references are drawn from the posterior and performance is 1
    iff any reference equals the modal outcome. Draws are shared across the J
    grid (prefixes of one sample of max(J) draws), which makes the estimate
    curve monotone in J by construction.
    """
    js = _check_sim_args(j_values, trials)
    modal = p.modal_outcome()

    if p.kind is PosteriorKind.EXPLICIT:
        def per_draw(draws: np.ndarray) -> np.ndarray:
            return (draws == modal).astype(float)
    else:
        def per_draw(draws: np.ndarray) -> np.ndarray:
            return (draws == modal).all(axis=1).astype(float)

    perf = _run_trials(p, js, trials, seed, per_draw, threads)
    estimates, stderrs = _summarize(perf)
    p_star = p.modal_probability()
    closed = [exact_match_closed_form(p_star, j) for j in js]
    return SimResult(j_values=js, estimates=tuple(estimates), stderrs=tuple(stderrs),
                     closed_form=tuple(closed), trials=trials, seed=seed)


def overlap_score(prediction: Sequence[int], reference: Sequence[int]) -> float:
    """Fraction of positions where the two equal-length sequences agree."""
    pred = np.asarray(prediction)
    ref = np.asarray(reference)
    if pred.shape != ref.shape:
        raise LengthMismatch(f"sequence lengths differ: {pred.shape} vs {ref.shape}")
    if pred.size == 0:
        raise LengthMismatch("sequences must be non-empty")
    return float((pred == ref).mean())


def exact_overlap_expectation(p: SimPosterior, j: int) -> float:
    """Exact E[max over J draws of the overlap with the modal sequence].

    Enumerates all V^T sequences once; grouping the J-tuple enumeration by
    the maximum overlap level collapses it to a cumulative-probability power,
    which is exact by independence of the draws.
    """
    if p.kind is not PosteriorKind.POSITIONWISE:
        raise PosteriorKindMismatch("exact overlap expectation needs a positionwise posterior")
    if j < 1:
        raise DomainError(f"need at least one draw, got j={j}")
    t_len, v = p.probs.shape
    modal = p.modal_outcome()
    level_mass = np.zeros(t_len + 1)  # mass at overlap = k / T
    for seq in product(range(v), repeat=t_len):
        prob = float(np.prod(p.probs[np.arange(t_len), list(seq)]))
        matches = int(np.sum(np.asarray(seq) == modal))
        level_mass[matches] += prob
    cumulative = np.cumsum(level_mass)
    expectation = 0.0
    for k in range(t_len + 1):
        below = cumulative[k - 1] if k > 0 else 0.0
        expectation += (k / t_len) * (cumulative[k] ** j - below ** j)
    return float(expectation)


def simulate_overlap(p: SimPosterior, j_values: Sequence[int], trials: int,
                     seed: int, threads: int = 1) -> SimResult:
    """Monte Carlo best-of-J overlap performance of the modal sequence.

    Performance per trial is the maximum positionwise overlap between the
    modal sequence and any of the J drawn references. For tiny instances
    (V^T <= 4096 and J <= 3) the closed_form column carries the exact
    enumeration value.
    """
    if p.kind is not PosteriorKind.POSITIONWISE:
        raise PosteriorKindMismatch("overlap simulation needs a positionwise posterior")
    js = _check_sim_args(j_values, trials)
    modal = p.modal_outcome()

    def per_draw(draws: np.ndarray) -> np.ndarray:
        return (draws == modal).mean(axis=1)

    perf = _run_trials(p, js, trials, seed, per_draw, threads)
    estimates, stderrs = _summarize(perf)
    closed: list[float | None] = []
    for j in js:
        if p.n_outcomes <= ENUM_MAX_OUTCOMES and j <= ENUM_MAX_J:
            closed.append(exact_overlap_expectation(p, j))
        else:
            closed.append(None)
    return SimResult(j_values=js, estimates=tuple(estimates), stderrs=tuple(stderrs),
                     closed_form=tuple(closed), trials=trials, seed=seed)


@dataclass(frozen=True)
class LinearityReport:
    """Outcome of checking estimate(J) ~ J * estimate(1) in the small-J regime."""

    passed: bool
    p_star: float
    rel_tol: float
    checked_j: tuple[int, ...]
    deviations: dict[int, float]
    saturation_onset: int | None
    saturation_tol: float


def linearity_check(result: SimResult, rel_tol: float,
                    column: str = "estimate",
                    saturation_tol: float = 0.05) -> LinearityReport:
    """Verify the linear small-J growth and locate where the curve saturates.

    The check covers every J with J * p_star <= 0.01 and passes iff the
    relative deviation from J * value(1) stays within rel_tol there; with no
    qualifying J (or a zero baseline) it passes vacuously. saturation_onset
    is the smallest J whose deviation exceeds saturation_tol, if any.
    """
    if column == "estimate":
        values = result.estimates
    elif column == "closed_form":
        if any(cf is None for cf in result.closed_form):
            raise DomainError("closed_form column is not fully populated")
        values = tuple(float(cf) for cf in result.closed_form)  # type: ignore[arg-type]
    else:
        raise ValueError(f"column must be 'estimate' or 'closed_form', got {column!r}")

    if 1 not in result.j_values:
        raise DomainError("linearity check needs a J=1 point")
    by_j = dict(zip(result.j_values, values))
    v1 = by_j[1]
    p_star = (float(result.closed_form[result.j_values.index(1)])
              if result.closed_form[result.j_values.index(1)] is not None else v1)

    deviations: dict[int, float] = {}
    saturation_onset: int | None = None
    for j in sorted(by_j):
        expected = j * v1
        dev = abs(by_j[j] - expected) / expected if expected > 0 else 0.0
        deviations[j] = dev
        if saturation_onset is None and dev > saturation_tol:
            saturation_onset = j

    checked = tuple(j for j in sorted(by_j) if j * p_star <= 0.01)
    passed = all(deviations[j] <= rel_tol for j in checked)
    return LinearityReport(passed=passed, p_star=p_star, rel_tol=rel_tol,
                           checked_j=checked, deviations=deviations,
                           saturation_onset=saturation_onset,
                           saturation_tol=saturation_tol)
