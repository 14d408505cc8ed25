"""Mixture-of-lags processes: a first-order chain plus a lag kernel.

The process picks a backward lag q from the kernel, then transitions
from the state observed q steps ago using the ordinary transition
matrix. Early steps, where the history is shorter than the lag, clamp
to the first symbol.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EmptyHistoryError,
    NotIrreducibleError,
    RowSumError,
    NegativeEntryError,
    TooShortError,
    ZeroProbabilityError,
)
from .markov import (
    ROW_SUM_TOL,
    _TABLE_SAMPLING_MAX_STATES,
    _next_state_table,
    _resolve_init,
    TransitionMatrix,
    entropy_rate,
    is_irreducible,
    stationary_distribution,
    validate_stochastic,
)


@dataclass(frozen=True)
class KernelDistribution:
    """Probability distribution over backward lags 1..k."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("kernel weights must be a non-empty 1-D vector")
        if (w < 0).any():
            raise NegativeEntryError("kernel weights must be non-negative")
        if abs(w.sum() - 1.0) >= ROW_SUM_TOL:
            raise RowSumError(f"kernel weights sum to {w.sum()!r}, expected 1")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def k(self) -> int:
        """Order of the process: the largest representable lag."""
        return int(self.weights.size)

    @classmethod
    def point_mass(cls, lag: int) -> "KernelDistribution":
        if lag < 1:
            raise ValueError("lag must be >= 1")
        w = np.zeros(lag)
        w[lag - 1] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, k: int) -> "KernelDistribution":
        if k < 1:
            raise ValueError("k must be >= 1")
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def geometric(cls, k: int, ratio: float = 0.5) -> "KernelDistribution":
        """Truncated geometric kernel, w_q proportional to ratio**(q-1)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if not 0 < ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        w = ratio ** np.arange(k, dtype=float)
        return cls(w / w.sum())


@dataclass(frozen=True)
class LampModel:
    """A transition matrix paired with a lag kernel."""

    matrix: TransitionMatrix
    kernel: KernelDistribution

    @property
    def labels(self) -> tuple[str, ...]:
        return self.matrix.labels


def lamp_transition_distribution(model: LampModel, history) -> np.ndarray:
    """Next-symbol distribution given the observed history.

    Returns ``sum_q w_q * P[x_{max(0, n-q)}]`` where ``n`` is the
    history length; lags that reach past the start of the history clamp
    to the first symbol.
    """
    if len(history) == 0:
        raise EmptyHistoryError("cannot condition on an empty history")
    idx = model.matrix.states.encode(history)
    n_hist = idx.shape[0]
    k = model.kernel.k
    sources = idx[np.maximum(n_hist - np.arange(1, k + 1), 0)]
    return model.kernel.weights @ model.matrix.rows[sources]


def simulate_lamp(
    model: LampModel,
    n_steps: int,
    seed,
    init: int | str | None = None,
) -> list[str]:
    """Sample a length-``n_steps`` token path from the process.

    Each step consumes two uniform draws: one selects the backward lag
    through the kernel's inverse CDF, the next selects the successor
    state from the chosen source row. ``init`` seeds the single first
    symbol (``None`` draws it from the stationary distribution of the
    matrix); lags pointing before the start clamp to that symbol.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    matrix = model.matrix
    rng = np.random.default_rng(seed)
    first = _resolve_init(matrix, init, rng)
    labels = matrix.states.labels
    if n_steps == 1:
        return [labels[first]]

    u = rng.random((n_steps - 1, 2))
    cum_w = np.cumsum(model.kernel.weights)
    lag_idx = np.searchsorted(cum_w, u[:, 0], side="left")
    np.minimum(lag_idx, model.kernel.k - 1, out=lag_idx)
    # Source position for step t is max(0, t - q_t); always already sampled.
    sources = np.maximum(np.arange(1, n_steps) - (lag_idx + 1), 0).tolist()

    states = [0] * n_steps
    states[0] = first
    if matrix.n <= _TABLE_SAMPLING_MAX_STATES:
        table = _next_state_table(matrix.rows, u[:, 1])
        for t in range(1, n_steps):
            states[t] = table[states[sources[t - 1]]][t - 1]
    else:
        from bisect import bisect_left

        cum = [row.tolist() for row in np.cumsum(matrix.rows, axis=1)]
        top = matrix.n - 1
        draws = u[:, 1].tolist()
        for t in range(1, n_steps):
            x = bisect_left(cum[states[sources[t - 1]]], draws[t - 1])
            states[t] = x if x <= top else top
    return [labels[i] for i in states]


def lamp_entropy_rate(model: LampModel) -> float:
    """Entropy rate of the process in bits per symbol.

    Equals the entropy rate of the underlying first-order chain; the
    lag kernel does not enter the value.
    """
    if not is_irreducible(model.matrix):
        raise NotIrreducibleError("underlying transition matrix is reducible")
    pi = stationary_distribution(model.matrix)
    return entropy_rate(model.matrix, pi)


def step_log2_probs(model: LampModel, sequence) -> np.ndarray:
    """log2 predictive probability of each symbol after the first.

    Entry ``t-1`` scores ``sequence[t]`` against the history
    ``sequence[:t]``; raising on any zero-probability symbol.
    """
    mixture, _ = _step_scores(model, sequence)
    return np.log2(mixture)


def _step_scores(model: LampModel, sequence) -> tuple[np.ndarray, np.ndarray]:
    """Per position t >= 1: the mixture probability of ``sequence[t]``,
    and the posterior-weighted log2 transition probability.

    The second array is ``sum_q gamma_q * log2 P[x_{max(0,t-q)}, x_t]``
    with ``gamma_q`` proportional to ``w_q * P[x_{max(0,t-q)}, x_t]``:
    the expected surprisal of the step's realised transition once the
    latent lag is integrated out under its posterior given the path.
    """
    idx = model.matrix.states.encode(sequence)
    if idx.shape[0] < 2:
        raise TooShortError("need at least two symbols to score")
    rows = model.matrix.rows
    w = model.kernel.weights
    t = np.arange(1, idx.shape[0])
    targets = idx[1:]
    mixture = np.zeros(t.shape[0])
    weighted_log = np.zeros(t.shape[0])
    for q in range(1, model.kernel.k + 1):
        p = rows[idx[np.maximum(t - q, 0)], targets]
        mixture += w[q - 1] * p
        positive = p > 0.0
        weighted_log[positive] += (
            w[q - 1] * p[positive] * np.log2(p[positive])
        )
    if (mixture <= 0.0).any():
        pos = int(np.argmax(mixture <= 0.0)) + 1
        raise ZeroProbabilityError(f"symbol at position {pos} has model probability 0")
    return mixture, weighted_log / mixture


def log_loss(model: LampModel, sequence, burn_in: int = 1000) -> float:
    """Average surprisal of the realised transitions, in bits per symbol.

    Each scored position contributes ``-log2 P[source, x_t]`` for the
    transition actually taken; the latent lag that picked the source is
    integrated out under its posterior given the path. For a
    self-generated path this is a Monte-Carlo estimate of the entropy
    rate: the transition source is stationary, so the expected step
    surprisal is exactly ``-sum_ij pi_i P_ij log2 P_ij`` no matter what
    the kernel looks like. Positions ``t > burn_in`` are scored, which
    washes out the clamping of early lags to the first symbol.
    """
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    if len(sequence) <= burn_in + 1:
        raise TooShortError(
            f"sequence of length {len(sequence)} leaves nothing to score "
            f"after burn_in={burn_in}"
        )
    _, step_log2 = _step_scores(model, sequence)
    return max(float(-step_log2[burn_in:].mean()), 0.0)


def save_model(model: LampModel, path) -> None:
    doc = {
        "labels": list(model.labels),
        "rows": model.matrix.rows.tolist(),
        "kernel": model.kernel.weights.tolist(),
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_model(path) -> LampModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    matrix = validate_stochastic(doc["rows"], doc["labels"])
    return LampModel(matrix, KernelDistribution(np.asarray(doc["kernel"], dtype=float)))
