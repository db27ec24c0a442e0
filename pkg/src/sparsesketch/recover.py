"""Sketch-based recovery of a fixed-sparsity approximation.

The main routine draws one shared Gaussian sketch G, reads back Z = A @ G in
a single non-adaptive block of m queries, and solves one small least-squares
problem per row: the row's values are G_i^+ z_i, where G_i keeps only the
rows of G indexed by that row's pattern slots. With m >= s + 2 the expected
squared recovery error is at most s/(m - s - 1) times the off-pattern mass,
and a matrix that already matches the pattern is recovered exactly once
m reaches the widest row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RandomSeed, gaussian_matrix, qr_solve_stack, rademacher_vector
from .errors import InsufficientQueriesError, UndefinedEstimateError
from .pattern import SparseApprox, SparsityPattern


@dataclass(frozen=True)
class RecoveryResult:
    """A recovered approximation plus its query accounting."""

    approx: SparseApprox
    queries_used: int
    m: int | None = None
    seed: RandomSeed | None = None


def recover_from_sketch(G, Z, S):
    """Per-row least squares on an existing sketch pair (G, Z).

    ``G`` is the d x m query block, ``Z = A @ G`` the n x m response block,
    and ``S`` the n x d pattern. Rows with no slots come back zero. The
    result is a deterministic function of (G, Z, S); rows are solved grouped
    by slot count, which leaves the values independent of evaluation order.
    """
    G = np.asarray(G, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    if G.ndim != 2 or Z.ndim != 2:
        raise ValueError("sketch blocks must be 2-D")
    if G.shape[0] != S.n_cols:
        raise ValueError(f"G has {G.shape[0]} rows, pattern has {S.n_cols} columns")
    if Z.shape[0] != S.n_rows:
        raise ValueError(f"Z has {Z.shape[0]} rows, pattern has {S.n_rows} rows")
    if G.shape[1] != Z.shape[1]:
        raise ValueError(f"sketch widths differ: G has {G.shape[1]}, Z has {Z.shape[1]}")
    m = G.shape[1]
    row_nnz = S.row_nnz()
    _check_width(row_nnz, m)

    values = np.zeros(S.nnz)
    for k in np.unique(row_nnz):
        if k == 0:
            continue
        rows = np.flatnonzero(row_nnz == k)
        slot_idx = S.offsets[rows][:, None] + np.arange(k)
        G_stack = np.swapaxes(G[S.cols[slot_idx]], 1, 2)
        values[slot_idx] = qr_solve_stack(G_stack, Z[rows], rows=rows)
    return SparseApprox(S, values)


def _check_width(row_nnz, m):
    if row_nnz.size and row_nnz.max() > m:
        row = int(np.argmax(row_nnz > m))
        raise InsufficientQueriesError(
            f"row {row} has {int(row_nnz[row])} slots but the sketch is only {m} wide",
            row=row,
        )


def fixed_sparse_recover(oracle, S, m, seed, symmetrize=False):
    """Approximate the oracle's matrix on pattern ``S`` with m sketch queries.

    Draws G from the seed, reads Z = A @ G in one block, and solves per row.
    ``symmetrize`` averages each slot with its mirror, which never increases
    the error when the underlying matrix is symmetric; it requires a square
    pattern with a symmetric slot set.
    """
    if oracle.n_cols != S.n_cols or oracle.n_rows != S.n_rows:
        raise ValueError(
            f"oracle shape {oracle.shape} does not match pattern shape {S.shape}"
        )
    if m < 1:
        raise ValueError("sketch width must be positive")
    _check_width(S.row_nnz(), m)
    if symmetrize and not S.is_symmetric():
        raise ValueError("symmetrize requires a square pattern with symmetric slots")
    seed = RandomSeed.coerce(seed)
    G = gaussian_matrix(S.n_cols, m, seed)
    Z = oracle.apply(G)
    approx = recover_from_sketch(G, Z, S)
    if symmetrize:
        perm = S.transpose_permutation()
        approx = SparseApprox(S, 0.5 * (approx.values + approx.values[perm]))
    return RecoveryResult(approx=approx, queries_used=m, m=m, seed=seed)


def hutchinson_diagonal(oracle, m, dist="gaussian", seed=0):
    """Stochastic diagonal estimate from m probe vectors.

    Returns ``[sum_j r_j * (A r_j)] / [sum_j r_j * r_j]`` entrywise. With
    Rademacher probes the denominator is exactly m. With Gaussian probes and
    the same seed this reproduces the sketch recovery at the diagonal
    pattern, since both reduce to the same rank-one least-squares solution
    per row.
    """
    if oracle.n_rows != oracle.n_cols:
        raise ValueError("diagonal estimation requires a square oracle")
    if m < 1:
        raise ValueError("need at least one probe vector")
    n = oracle.n_rows
    seed = RandomSeed.coerce(seed)
    if dist == "gaussian":
        R = gaussian_matrix(n, m, seed)
        denom = np.einsum("ij,ij->i", R, R)
    elif dist == "rademacher":
        R = rademacher_vector(n * m, seed).reshape(n, m)
        denom = np.full(n, float(m))
    else:
        raise ValueError(f"unknown probe distribution {dist!r}")
    Y = oracle.apply(R)
    numer = np.einsum("ij,ij->i", R, Y)
    zero = np.flatnonzero(denom == 0.0)
    if zero.size:
        raise UndefinedEstimateError(
            f"zero probe mass at entry {int(zero[0])}", entry=int(zero[0])
        )
    return numer / denom


def median_distance_selection(candidates):
    """Pick the candidate closest to the bulk of a candidate set.

    For each candidate i, the score B_i is the ceil(r/2)-th smallest of its
    distances to all candidates (including the zero self-distance). Returns
    ``(index, scores)`` where index is the argmin of B, ties broken by the
    lowest index.
    """
    arrays = [np.asarray(c, dtype=np.float64).ravel() for c in candidates]
    r = len(arrays)
    if r < 1:
        raise ValueError("need at least one candidate")
    dist = np.zeros((r, r))
    for i in range(r):
        for j in range(i + 1, r):
            dij = float(np.linalg.norm(arrays[i] - arrays[j]))
            dist[i, j] = dist[j, i] = dij
    scores = np.sort(dist, axis=1)[:, (r + 1) // 2 - 1]
    return int(np.argmin(scores)), scores


def boosted_recover(oracle, S, m, r, seed):
    """Run the sketch recovery r times and keep the median-centered candidate.

    Candidate j uses substream ``seed.child(j)``, so candidates are
    independent and the whole run is reproducible. The returned values are
    bitwise one of the r candidates; total queries are m * r. Repetition
    drives the failure probability down exponentially in r.
    """
    if r < 1:
        raise ValueError("candidate count must be positive")
    seed = RandomSeed.coerce(seed)
    candidates = [
        fixed_sparse_recover(oracle, S, m, seed.child(j)) for j in range(r)
    ]
    best, _ = median_distance_selection([c.approx.values for c in candidates])
    return RecoveryResult(
        approx=candidates[best].approx,
        queries_used=m * r,
        m=m,
        seed=seed,
    )
