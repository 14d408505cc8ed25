"""Maximum-likelihood fitting of chains and lag-mixture models.

The first-order fit is a closed-form count ratio with optional add-alpha
smoothing. The lag-mixture fit treats the backward lag at each position
as a latent variable and alternates exact expectation and maximisation
steps; the total log2-likelihood never decreases.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .corpus import SequenceCorpus
from .errors import DegenerateInitError, EmptyCorpusError, TooShortError
from .lamp import KernelDistribution, LampModel, step_log2_probs
from .markov import StateSpace, TransitionMatrix

logger = logging.getLogger(__name__)

DEFAULT_EM_TOL = 1e-6
DEFAULT_EM_MAX_ITER = 500
DEFAULT_INIT_SMOOTHING = 0.1

# np.bincount beats scattered adds but allocates n*n floats; past this
# many states fall back to np.add.at.
_BINCOUNT_MAX_CELLS = 16_000_000


@dataclass(frozen=True)
class TransitionCounts:
    """Observed i -> j adjacent-pair counts, never across sequence ends."""

    states: StateSpace
    counts: np.ndarray


@dataclass(frozen=True)
class FitReport:
    """Outcome of an alternating-maximisation fit."""

    model: LampModel
    log_likelihood_trace: tuple[float, ...]
    iterations: int
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "model": {
                "labels": list(self.model.labels),
                "rows": self.model.matrix.rows.tolist(),
                "kernel": self.model.kernel.weights.tolist(),
            },
            "log_likelihood_trace": list(self.log_likelihood_trace),
            "iterations": self.iterations,
            "converged": self.converged,
        }


def count_transitions(corpus: SequenceCorpus) -> TransitionCounts:
    """Count adjacent pairs within each sequence."""
    n = corpus.vocabulary.n
    counts = np.zeros((n, n), dtype=np.int64)
    for idx in corpus.encoded():
        if idx.shape[0] >= 2:
            np.add.at(counts, (idx[:-1], idx[1:]), 1)
    return TransitionCounts(corpus.vocabulary, counts)


def fit_first_order(corpus: SequenceCorpus, smoothing: float = 0.0) -> TransitionMatrix:
    """Estimate a first-order transition matrix from pair counts.

    ``P_ij = (count_ij + smoothing) / (rowsum_i + smoothing * n)``. With
    zero smoothing, states never observed as a source get a uniform row.
    """
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    counts = count_transitions(corpus).counts
    if counts.sum() == 0:
        raise EmptyCorpusError("corpus contains no transitions to fit")
    return TransitionMatrix(corpus.vocabulary, _normalise_rows(counts + smoothing))


def _normalise_rows(weights: np.ndarray) -> np.ndarray:
    weights = weights.astype(float, copy=True)
    row_sums = weights.sum(axis=1)
    empty = row_sums == 0.0
    if empty.any():
        for i in np.nonzero(empty)[0]:
            logger.info("state %d has no observed transitions; using a uniform row", i)
        weights[empty] = 1.0
        row_sums = weights.sum(axis=1)
    return weights / row_sums[:, None]


def fit_lamp_em(
    corpus: SequenceCorpus,
    k: int,
    init: tuple[KernelDistribution, TransitionMatrix] | None = None,
    max_iter: int = DEFAULT_EM_MAX_ITER,
    tol: float = DEFAULT_EM_TOL,
) -> FitReport:
    """Fit kernel weights and a transition matrix by alternating maximisation.

    The latent variable is the backward lag at each scored position.
    Expectation assigns each position a responsibility over lags
    proportional to ``w_q * P[x_{max(0, t-q)}, x_t]``; maximisation
    renormalises responsibility totals into new weights and a new
    matrix. Stops once the total log2-likelihood improves by less than
    ``tol``, or after ``max_iter`` rounds.

    Parameters
    ----------
    corpus : SequenceCorpus
        Training data; every sequence must hold at least two tokens.
    k : int
        Kernel order (largest backward lag).
    init : optional (kernel, matrix) pair
        Starting point. The default is a uniform kernel and an
        add-``0.1`` smoothed first-order fit, which keeps the initial
        likelihood finite.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    encoded = corpus.encoded()
    if any(idx.shape[0] < 2 for idx in encoded):
        raise TooShortError("every sequence must hold at least two tokens")
    n = corpus.vocabulary.n

    src_blocks = []
    tgt_blocks = []
    for idx in encoded:
        positions = np.arange(1, idx.shape[0])
        tgt_blocks.append(idx[1:])
        src_blocks.append(
            np.stack([idx[np.maximum(positions - q, 0)] for q in range(1, k + 1)], axis=1)
        )
    sources = np.concatenate(src_blocks)          # (T, k)
    targets = np.concatenate(tgt_blocks)          # (T,)
    total_positions = targets.shape[0]
    cell_of = sources.astype(np.int64) * n + targets[:, None]

    if init is None:
        weights = np.full(k, 1.0 / k)
        matrix_rows = fit_first_order(corpus, smoothing=DEFAULT_INIT_SMOOTHING).rows.copy()
    else:
        kernel0, matrix0 = init
        if kernel0.k != k:
            raise ValueError(f"init kernel has order {kernel0.k}, expected {k}")
        if matrix0.states.labels != corpus.vocabulary.labels:
            raise ValueError("init matrix state space does not match the corpus vocabulary")
        weights = kernel0.weights.copy()
        matrix_rows = matrix0.rows.copy()

    trace: list[float] = []
    previous = -np.inf
    converged = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        mixture = matrix_rows[sources, targets[:, None]] * weights
        totals = mixture.sum(axis=1)
        if (totals <= 0.0).any():
            raise DegenerateInitError(
                "an observed transition has probability 0 under the current "
                "parameters; the initialisation contains a structural zero "
                "the data requires"
            )
        log_likelihood = float(np.log2(totals).sum())
        trace.append(log_likelihood)
        delta = log_likelihood - previous
        logger.info("em iter=%d log2_likelihood=%.6f delta=%.3g", iteration, log_likelihood, delta)

        responsibilities = mixture / totals[:, None]
        weights = responsibilities.sum(axis=0) / total_positions
        if n * n <= _BINCOUNT_MAX_CELLS:
            accum = np.bincount(
                cell_of.ravel(), weights=responsibilities.ravel(), minlength=n * n
            ).reshape(n, n)
        else:
            accum = np.zeros((n, n))
            np.add.at(accum, (sources.ravel(), np.repeat(targets, k)), responsibilities.ravel())
        matrix_rows = _normalise_rows(accum)

        if delta < tol:
            converged = True
            break
        previous = log_likelihood

    model = LampModel(
        TransitionMatrix(corpus.vocabulary, matrix_rows),
        KernelDistribution(weights),
    )
    return FitReport(model, tuple(trace), iteration, converged)


def lamp_log_likelihood(model: LampModel, corpus: SequenceCorpus) -> float:
    """Total log2-likelihood of the corpus under the model.

    Every position after the first of each sequence is scored against
    its full history; single-token sequences contribute nothing.
    """
    total = 0.0
    for seq in corpus.sequences:
        if len(seq) >= 2:
            total += float(step_log2_probs(model, seq).sum())
    return total
