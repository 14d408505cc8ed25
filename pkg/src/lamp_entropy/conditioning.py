"""Reducibility diagnosis and repair for transition matrices.

Two repair strategies are provided: restricting the chain to its
largest strongly connected component, and appending a low-probability
artificial state that links every state to every other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateComponentError, InvalidProbabilityError
from .markov import StateSpace, TransitionMatrix

ARTIFICIAL_STATE_LABEL = "__artificial__"
DEFAULT_P_ARTIFICIAL = 2.0**-15


@dataclass(frozen=True)
class SccPartition:
    """Partition of the state indices into strongly connected components."""

    components: tuple[frozenset[int], ...]
    component_of: dict[int, int]
    largest_id: int


@dataclass(frozen=True)
class LargestCC:
    """Conditioning strategy: keep only the largest strongly connected component."""


@dataclass(frozen=True)
class Induced:
    """Conditioning strategy: append an artificial state with weight ``p_artificial``."""

    p_artificial: float = DEFAULT_P_ARTIFICIAL


def strongly_connected_components(
    matrix: TransitionMatrix, edge_threshold: float = 0.0
) -> SccPartition:
    """Exact SCC partition of the digraph with edges where P_ij > threshold.

    Iterative Tarjan, linear in nodes plus edges. ``largest_id`` picks
    the maximum-cardinality component, ties broken by the lowest state
    index it contains.
    """
    if edge_threshold < 0:
        raise ValueError("edge_threshold must be >= 0")
    n = matrix.n
    adjacency = [np.nonzero(matrix.rows[i] > edge_threshold)[0].tolist() for i in range(n)]

    order = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[frozenset[int]] = []
    counter = 0

    for root in range(n):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, next_edge = work[-1]
            if next_edge == 0:
                order[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            neighbours = adjacency[v]
            for i in range(next_edge, len(neighbours)):
                w = neighbours[i]
                if order[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w] and low[w] < low[v]:
                    low[v] = low[w]
            if descended:
                continue
            if low[v] == order[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    members.append(w)
                    if w == v:
                        break
                components.append(frozenset(members))
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]

    component_of = {}
    for cid, members in enumerate(components):
        for v in members:
            component_of[v] = cid
    best = max(range(len(components)), key=lambda c: (len(components[c]), -min(components[c])))
    return SccPartition(tuple(components), component_of, best)


def restrict_to_largest_scc(
    matrix: TransitionMatrix,
) -> tuple[TransitionMatrix, list[str], int]:
    """Restrict the chain to its largest SCC, renormalising each row.

    Returns the submatrix, the kept labels, and how many states were
    dropped.
    """
    partition = strongly_connected_components(matrix)
    keep = sorted(partition.components[partition.largest_id])
    sub = matrix.rows[np.ix_(keep, keep)]
    if len(keep) == 1 and sub[0, 0] <= 0.0:
        raise DegenerateComponentError(
            "largest component is a single state with no self-transition"
        )
    sub = sub / sub.sum(axis=1, keepdims=True)
    labels = [matrix.labels[i] for i in keep]
    restricted = TransitionMatrix(StateSpace(tuple(labels)), sub)
    return restricted, labels, matrix.n - len(keep)


def induce_irreducibility(matrix: TransitionMatrix, p_artificial: float) -> TransitionMatrix:
    """Append an artificial state reachable from (and reaching) every state.

    Every original row is scaled by ``1 - p_artificial`` and given
    probability ``p_artificial`` of jumping to the artificial state,
    whose own row is uniform over the original states. The result is
    irreducible and aperiodic by construction, and the original block
    equals ``(1 - p_artificial) * P`` exactly.
    """
    if not 0.0 < p_artificial < 1.0:
        raise InvalidProbabilityError(
            f"p_artificial must lie strictly between 0 and 1, got {p_artificial!r}"
        )
    n = matrix.n
    out = np.zeros((n + 1, n + 1))
    out[:n, :n] = matrix.rows * (1.0 - p_artificial)
    out[:n, n] = p_artificial
    out[n, :n] = 1.0 / n
    label = ARTIFICIAL_STATE_LABEL
    while label in matrix.states:
        label += "_"
    states = StateSpace(tuple(matrix.labels) + (label,))
    return TransitionMatrix(states, out)


def apply_conditioning(
    matrix: TransitionMatrix, strategy: LargestCC | Induced
) -> tuple[TransitionMatrix, dict]:
    """Apply a conditioning strategy; returns the new matrix and a report.

    The report is JSON-ready: method, excluded state count, the
    artificial weight (or null), and the state counts before and after.
    """
    if isinstance(strategy, LargestCC):
        conditioned, _, excluded = restrict_to_largest_scc(matrix)
        report = {
            "method": "largest_scc",
            "excluded": excluded,
            "p_artificial": None,
            "n_before": matrix.n,
            "n_after": conditioned.n,
        }
    elif isinstance(strategy, Induced):
        conditioned = induce_irreducibility(matrix, strategy.p_artificial)
        report = {
            "method": "induced",
            "excluded": 0,
            "p_artificial": strategy.p_artificial,
            "n_before": matrix.n,
            "n_after": conditioned.n,
        }
    else:
        raise TypeError(f"unknown conditioning strategy {strategy!r}")
    return conditioned, report
