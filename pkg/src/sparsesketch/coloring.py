"""Coloring and probing baselines for fixed-sparsity recovery.

Columns whose pattern supports never share a row can be probed together with
a single query, so a valid coloring of the column-intersection graph turns
into one query per color. Probing is exact when the matrix matches the
pattern, but the number of colors can be as large as the column count even
for patterns with few slots per row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RandomSeed
from .pattern import SparseApprox, banded_pattern
from .recover import RecoveryResult


@dataclass(frozen=True)
class Coloring:
    """Assignment of a color index to every column."""

    n_cols: int
    color_of: np.ndarray
    n_colors: int

    def __post_init__(self):
        color_of = np.ascontiguousarray(self.color_of, dtype=np.int64)
        if color_of.shape != (self.n_cols,):
            raise ValueError("need one color per column")
        present = np.unique(color_of)
        if not np.array_equal(present, np.arange(self.n_colors)):
            raise ValueError("colors must form the contiguous range [0, n_colors)")
        object.__setattr__(self, "color_of", color_of)


def column_intersection_graph(S):
    """Dense boolean adjacency: columns are adjacent iff they share a row.

    Built by marking all pairs among each row's slot columns; suitable up to
    a few thousand columns.
    """
    adj = np.zeros((S.n_cols, S.n_cols), dtype=bool)
    for i in range(S.n_rows):
        cols = S.row_cols(i)
        if cols.size > 1:
            adj[np.ix_(cols, cols)] = True
    np.fill_diagonal(adj, False)
    return adj


def greedy_coloring(graph, order="natural"):
    """Color vertices greedily with the smallest color unused by neighbors.

    ``order`` is ``natural`` (index order) or ``degree`` (largest degree
    first, ties by index). Neither is optimal in general; natural order uses
    exactly 2b + 1 colors on banded patterns.
    """
    graph = np.asarray(graph, dtype=bool)
    d = graph.shape[0]
    if order == "natural":
        sequence = range(d)
    elif order == "degree":
        sequence = np.argsort(-graph.sum(axis=1), kind="stable")
    else:
        raise ValueError(f"unknown order {order!r}")
    color_of = np.full(d, -1, dtype=np.int64)
    for v in sequence:
        taken = color_of[graph[v]]
        taken = set(taken[taken >= 0].tolist())
        c = 0
        while c in taken:
            c += 1
        color_of[v] = c
    return Coloring(n_cols=d, color_of=color_of, n_colors=int(color_of.max()) + 1)


def validate_coloring(S, coloring):
    """Raise unless every row sees at most one slot column per color."""
    if coloring.n_cols != S.n_cols:
        raise ValueError(
            f"coloring covers {coloring.n_cols} columns, pattern has {S.n_cols}"
        )
    for i in range(S.n_rows):
        row_colors = coloring.color_of[S.row_cols(i)]
        if np.unique(row_colors).size != row_colors.size:
            raise ValueError(f"row {i} has two slot columns sharing a color")


def exact_recover_by_coloring(oracle, S, coloring):
    """Probe one indicator vector per color and read slot values directly.

    Exact when the matrix equals its pattern restriction, using n_colors
    queries. With off-pattern mass the reads are contaminated by same-color
    columns; the raw reads are returned without correction.
    """
    validate_coloring(S, coloring)
    if oracle.n_cols != S.n_cols or oracle.n_rows != S.n_rows:
        raise ValueError(
            f"oracle shape {oracle.shape} does not match pattern shape {S.shape}"
        )
    X = np.zeros((S.n_cols, coloring.n_colors))
    X[np.arange(S.n_cols), coloring.color_of] = 1.0
    Y = oracle.apply(X)
    values = Y[S.slot_rows(), coloring.color_of[S.cols]]
    return RecoveryResult(
        approx=SparseApprox(S, values), queries_used=coloring.n_colors
    )


def banded_rademacher_estimate(oracle, d, b, t, seed):
    """Sign-probe estimate of the banded restriction of a square matrix.

    The band of total width s = 2b + 1 admits the color classes
    ``C_i = {i, i + s, i + 2s, ...}``; each row holds at most one slot per
    class. Every repetition probes all s classes in one block, each query
    carrying independent +-1 signs on its class, and the sign of a row's own
    slot column flips the read back to an unbiased estimate of the slot
    value. Averaging t repetitions divides the expected squared error by t;
    queries used: s * t.
    """
    s = 2 * b + 1
    if d % s != 0:
        raise ValueError(f"d must be a multiple of the bandwidth, got d={d}, s={s}")
    if t < 1:
        raise ValueError("repetition count must be positive")
    if oracle.n_rows != d or oracle.n_cols != d:
        raise ValueError(f"oracle shape {oracle.shape} does not match d={d}")
    k = d // s
    S = banded_pattern(d, b)
    slot_rows = S.slot_rows()
    slot_cols = S.cols
    slot_class = slot_cols % s

    rng = RandomSeed.coerce(seed).generator()
    values = np.zeros(S.nnz)
    for _ in range(t):
        signs = rng.integers(0, 2, size=(k, s)).astype(np.float64) * 2.0 - 1.0
        X = np.zeros((d, s))
        for i in range(s):
            X[i::s, i] = signs[:, i]
        Y = oracle.apply(X)
        values += X[slot_cols, slot_class] * Y[slot_rows, slot_class]
    values /= t
    return RecoveryResult(
        approx=SparseApprox(S, values),
        queries_used=s * t,
        seed=RandomSeed.coerce(seed),
    )
