"""Seeded sampling and dense linear-algebra kernels used by every other module.

Dense matrices are plain row-major float64 ``numpy.ndarray`` objects
throughout the package. Randomness flows exclusively through
:class:`RandomSeed`: a (seed, stream) pair keyed into the counter-based
Philox generator, so equal pairs reproduce sample sequences bit-for-bit
regardless of call order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficiencyError, UnderdeterminedSystemError
from .pattern import SparseApprox, SparsityPattern

_MASK64 = (1 << 64) - 1

# Recorded in output metadata so runs can be reproduced against the exact
# sampler implementation.
GENERATOR_ID = f"numpy.random.Philox/standard_normal numpy=={np.__version__}"


@dataclass(frozen=True)
class RandomSeed:
    """64-bit seed plus a substream index.

    Streams partition the sample space: one stream per (trial, purpose) pair.
    A single stream always yields one coherent sample sequence, never a
    per-row reshuffle.
    """

    seed: int
    stream: int = 0

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        return cls(int(value))

    def child(self, offset):
        """Substream at a fixed offset from this one."""
        return RandomSeed(self.seed, self.stream + int(offset))

    def generator(self):
        """Fresh Philox generator keyed by (seed, stream)."""
        key = [self.seed & _MASK64, self.stream & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))


def gaussian_matrix(n_rows, n_cols, seed):
    """Row-major matrix of independent standard normal samples."""
    if n_rows < 1 or n_cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {n_rows}x{n_cols}")
    rng = RandomSeed.coerce(seed).generator()
    return rng.standard_normal((n_rows, n_cols))


def rademacher_vector(length, seed):
    """Vector of independent fair +-1 signs."""
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    rng = RandomSeed.coerce(seed).generator()
    return rng.integers(0, 2, size=length).astype(np.float64) * 2.0 - 1.0


def frobenius_norm(M):
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(M, dtype=np.float64)))


def qr_solve_stack(G_stack, z_stack, rows=None):
    """Least-squares solutions for a stack of systems via Householder QR.

    Solves ``argmin_x ||G_stack[b] @ x - z_stack[b]||`` for each slice b.
    ``G_stack`` has shape (batch, m, k) with m >= k >= 1, ``z_stack`` shape
    (batch, m). ``rows`` optionally labels the slices for error messages.

    Raises
    ------
    UnderdeterminedSystemError
        If m < k.
    RankDeficiencyError
        If any slice's R factor has a diagonal entry at or below
        ``max(m, k) * eps * |r_11|``, carrying the detected rank.
    """
    G_stack = np.asarray(G_stack, dtype=np.float64)
    z_stack = np.asarray(z_stack, dtype=np.float64)
    batch, m, k = G_stack.shape
    if k < 1:
        raise ValueError("systems must have at least one unknown")
    if m < k:
        raise UnderdeterminedSystemError(
            f"need at least as many equations as unknowns, got {m} < {k}"
        )
    Q, R = np.linalg.qr(G_stack)
    diag = np.abs(np.diagonal(R, axis1=1, axis2=2))
    tol = max(m, k) * np.finfo(np.float64).eps * diag[:, :1]
    dead = diag <= tol
    if dead.any():
        b = int(np.argmax(dead.any(axis=1)))
        rank = int(np.count_nonzero(~dead[b]))
        label = rows[b] if rows is not None else b
        raise RankDeficiencyError(
            f"system {label} is numerically rank deficient (rank {rank} of {k})",
            rank=rank,
            row=label,
        )
    rhs = np.einsum("bmk,bm->bk", Q, z_stack)
    return np.linalg.solve(R, rhs[..., None])[..., 0]


def least_squares_solve(G, z):
    """argmin_x ||G x - z||_2 for a single m x k system (m >= k >= 1)."""
    G = np.asarray(G, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if G.ndim != 2:
        raise ValueError("coefficient matrix must be 2-D")
    if z.shape != (G.shape[0],):
        raise ValueError(f"right-hand side length {z.shape} does not match {G.shape[0]} rows")
    return qr_solve_stack(G[None], z[None])[0]


def hadamard_mask(A, S):
    """Entries of ``A`` at the pattern slots; off-pattern entries discarded."""
    A = np.asarray(A, dtype=np.float64)
    if not isinstance(S, SparsityPattern):
        raise TypeError("S must be a SparsityPattern")
    if A.shape != S.shape:
        raise ValueError(f"matrix shape {A.shape} does not match pattern shape {S.shape}")
    return SparseApprox(S, A[S.slot_rows(), S.cols])
