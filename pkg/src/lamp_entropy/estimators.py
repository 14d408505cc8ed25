"""The seven entropy estimators and the artificial-weight sweep.

Three empirical estimators work on raw symbol frequencies; the plug-in
estimators substitute fitted transition matrices (first-order or
lag-mixture) into the closed-form entropy rate after conditioning the
matrix to be irreducible. The sweep re-conditions one fitted matrix at
``p = 2**-i`` over a range of exponents and looks for the plateau where
the estimate stabilises.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .conditioning import Induced, LargestCC, apply_conditioning
from .corpus import SequenceCorpus
from .errors import (
    EmptyCorpusError,
    EmptySequenceError,
    NotADistributionError,
    NotIrreducibleError,
)
from .fitting import fit_first_order, fit_lamp_em
from .lamp import KernelDistribution
from .markov import (
    ROW_SUM_TOL,
    TransitionMatrix,
    entropy_rate,
    is_irreducible,
    stationary_distribution,
)

DEFAULT_MARKOV_SWEEP_EXPONENTS = range(1, 26)
DEFAULT_LAMP_SWEEP_EXPONENTS = range(1, 51)
DEFAULT_PLATEAU_REL_TOL = 1e-3
DEFAULT_PLATEAU_WINDOW = 3


class EstimatorMethod(str, Enum):
    SEQUENCE_LEVEL = "sequence_level"
    PATH_LEVEL = "path_level"
    STATIONARY_DISTRIBUTION = "stationary_distribution"
    MARKOV_LARGEST_CC = "markov_largest_cc"
    MARKOV_INDUCED = "markov_induced"
    LAMP_LARGEST_CC = "lamp_largest_cc"
    LAMP_INDUCED = "lamp_induced"


@dataclass(frozen=True)
class EntropyReport:
    """An entropy estimate in bits per symbol, with its provenance."""

    method: EstimatorMethod
    bits_per_symbol: float
    conditioning: dict | None = None
    preprocessing: dict | None = None
    details: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "method": self.method.value,
            "bits_per_symbol": self.bits_per_symbol,
            "conditioning": self.conditioning,
            "preprocessing": self.preprocessing,
            "details": self.details,
        }


@dataclass(frozen=True)
class SweepResult:
    """Entropy estimates across ``p = 2**-i`` with plateau metadata."""

    exponents: tuple[int, ...]
    raw: tuple[float, ...]
    normalized: tuple[float, ...]
    recommended_exponent: int | None


def shannon_entropy(dist) -> float:
    """Shannon entropy of a probability vector, in bits (0 log 0 == 0)."""
    arr = np.asarray(dist, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise NotADistributionError("expected a non-empty 1-D probability vector")
    if (arr < 0).any():
        raise NotADistributionError("probabilities must be non-negative")
    if abs(arr.sum() - 1.0) >= ROW_SUM_TOL:
        raise NotADistributionError(f"probabilities sum to {arr.sum()!r}, expected 1")
    positive = arr[arr > 0.0]
    value = float(-(positive * np.log2(positive)).sum())
    return value if value > 0.0 else 0.0


def sequence_level_estimate(
    corpus: SequenceCorpus, preprocessing: dict | None = None
) -> EntropyReport:
    """Entropy of the token distribution pooled across all sequences."""
    counts = np.zeros(corpus.vocabulary.n)
    for idx in corpus.encoded():
        counts += np.bincount(idx, minlength=corpus.vocabulary.n)
    total = counts.sum()
    if total == 0:
        raise EmptyCorpusError("corpus contains no tokens")
    return EntropyReport(
        EstimatorMethod.SEQUENCE_LEVEL,
        shannon_entropy(counts / total),
        preprocessing=preprocessing,
    )


def path_level_estimate(
    corpus: SequenceCorpus, preprocessing: dict | None = None
) -> EntropyReport:
    """Per-sequence frequency entropy, averaged with equal weight per sequence."""
    values = []
    for i, idx in enumerate(corpus.encoded()):
        if idx.shape[0] == 0:
            raise EmptySequenceError(f"sequence {i} is empty")
        counts = np.bincount(idx)
        values.append(shannon_entropy(counts / counts.sum()))
    return EntropyReport(
        EstimatorMethod.PATH_LEVEL,
        float(np.mean(values)),
        preprocessing=preprocessing,
    )


def stationary_distribution_estimate(
    matrix: TransitionMatrix,
    conditioning: dict | None = None,
    preprocessing: dict | None = None,
) -> EntropyReport:
    """Entropy of the stationary distribution of an (irreducible) chain."""
    if not is_irreducible(matrix):
        raise NotIrreducibleError("condition the matrix before taking its stationary entropy")
    pi = stationary_distribution(matrix)
    return EntropyReport(
        EstimatorMethod.STATIONARY_DISTRIBUTION,
        shannon_entropy(pi.probs),
        conditioning=conditioning,
        preprocessing=preprocessing,
    )


def markov_plugin_estimate(
    corpus: SequenceCorpus,
    conditioning: LargestCC | Induced,
    preprocessing: dict | None = None,
) -> EntropyReport:
    """Entropy rate of the first-order fit after conditioning."""
    fitted = fit_first_order(corpus, smoothing=0.0)
    conditioned, report = apply_conditioning(fitted, conditioning)
    pi = stationary_distribution(conditioned)
    method = (
        EstimatorMethod.MARKOV_LARGEST_CC
        if isinstance(conditioning, LargestCC)
        else EstimatorMethod.MARKOV_INDUCED
    )
    return EntropyReport(
        method,
        entropy_rate(conditioned, pi),
        conditioning=report,
        preprocessing=preprocessing,
    )


def lamp_plugin_estimate(
    corpus: SequenceCorpus,
    k: int,
    conditioning: LargestCC | Induced,
    *,
    init: tuple[KernelDistribution, TransitionMatrix] | None = None,
    max_iter: int | None = None,
    tol: float | None = None,
    preprocessing: dict | None = None,
) -> EntropyReport:
    """Entropy rate of the fitted lag-mixture's matrix after conditioning.

    The fitted kernel is reported in the details but does not enter the
    value: the entropy rate depends on the transition matrix alone.
    """
    kwargs = {}
    if max_iter is not None:
        kwargs["max_iter"] = max_iter
    if tol is not None:
        kwargs["tol"] = tol
    fit = fit_lamp_em(corpus, k, init=init, **kwargs)
    conditioned, report = apply_conditioning(fit.model.matrix, conditioning)
    pi = stationary_distribution(conditioned)
    method = (
        EstimatorMethod.LAMP_LARGEST_CC
        if isinstance(conditioning, LargestCC)
        else EstimatorMethod.LAMP_INDUCED
    )
    return EntropyReport(
        method,
        entropy_rate(conditioned, pi),
        conditioning=report,
        preprocessing=preprocessing,
        details={
            "kernel": fit.model.kernel.weights.tolist(),
            "em_iterations": fit.iterations,
            "em_converged": fit.converged,
        },
    )


def sweep_p_artificial(
    corpus: SequenceCorpus,
    kind: str = "markov",
    k: int | None = None,
    exponents=None,
    *,
    max_iter: int | None = None,
    tol: float | None = None,
) -> SweepResult:
    """Entropy estimates across artificial weights ``p = 2**-i``.

    The model is fitted once; only the conditioning varies with ``i``.
    The normalised curve is a min-max rescaling (all zeros when the raw
    curve is constant), and the recommended exponent is the default
    plateau choice.
    """
    if kind == "markov":
        if exponents is None:
            exponents = DEFAULT_MARKOV_SWEEP_EXPONENTS
        fitted = fit_first_order(corpus, smoothing=0.0)
    elif kind == "lamp":
        if k is None:
            raise ValueError("lamp sweeps need the kernel order k")
        if exponents is None:
            exponents = DEFAULT_LAMP_SWEEP_EXPONENTS
        kwargs = {}
        if max_iter is not None:
            kwargs["max_iter"] = max_iter
        if tol is not None:
            kwargs["tol"] = tol
        fitted = fit_lamp_em(corpus, k, **kwargs).model.matrix
    else:
        raise ValueError(f"unknown model kind {kind!r}")

    exponents = tuple(int(i) for i in exponents)
    if not exponents:
        raise ValueError("exponent range is empty")
    raw = []
    for i in exponents:
        conditioned, _ = apply_conditioning(fitted, Induced(2.0**-i))
        pi = stationary_distribution(conditioned)
        raw.append(entropy_rate(conditioned, pi))
    raw_t = tuple(raw)
    result = SweepResult(
        exponents,
        raw_t,
        tuple(minmax_normalize(raw_t)),
        None,
    )
    recommended = detect_plateau(result)
    return SweepResult(exponents, raw_t, result.normalized, recommended)


def minmax_normalize(values) -> list[float]:
    """Rescale to [0, 1] with min 0 and max 1; a constant curve maps to zeros."""
    arr = np.asarray(values, dtype=float)
    lo = arr.min()
    hi = arr.max()
    if hi == lo:
        return [0.0] * arr.size
    return ((arr - lo) / (hi - lo)).tolist()


def detect_plateau(
    sweep: SweepResult,
    rel_tol: float = DEFAULT_PLATEAU_REL_TOL,
    window: int = DEFAULT_PLATEAU_WINDOW,
) -> int | None:
    """Largest exponent whose trailing window of raw values is stable.

    A window ending at exponent ``i`` qualifies when its raw values
    differ pairwise by less than ``rel_tol * |raw value at i|``. Returns
    ``None`` when no window qualifies.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    best = None
    values = sweep.raw
    for j in range(window - 1, len(values)):
        chunk = values[j - window + 1 : j + 1]
        if max(chunk) - min(chunk) < rel_tol * abs(values[j]):
            best = sweep.exponents[j]
    return best


def write_sweep_csv(sweep: SweepResult, path) -> None:
    """Curve data as CSV with columns i, p, raw_bits, normalized."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "p", "raw_bits", "normalized"])
        for i, raw, norm in zip(sweep.exponents, sweep.raw, sweep.normalized):
            writer.writerow([i, repr(2.0**-i), repr(raw), repr(norm)])


def read_sweep_csv(path) -> SweepResult:
    rows = list(csv.DictReader(Path(path).open("r", encoding="utf-8", newline="")))
    exponents = tuple(int(r["i"]) for r in rows)
    raw = tuple(float(r["raw_bits"]) for r in rows)
    normalized = tuple(float(r["normalized"]) for r in rows)
    return SweepResult(exponents, raw, normalized, None)
