"""Built-in test matrices for experiments.

Both families are inverses of sparse, strictly diagonally dominant matrices,
so their entries decay away from the source sparsity and a banded or
multi-banded pattern captures most of the mass.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .core import frobenius_norm
from .errors import SingularMatrixError

# |i - j| offsets carrying ones in the Trefethen primes matrix.
POWER_OF_TWO_OFFSETS = tuple(2**p for p in range(10))  # 1 .. 512

_INVERSE_RESIDUAL_TOL = 1e-8


def primes(n):
    """First n primes by a sieve of Eratosthenes."""
    if n < 1:
        raise ValueError("need at least one prime")
    if n < 6:
        bound = 15
    else:
        # Rosser's upper bound on the n-th prime.
        bound = int(n * (math.log(n) + math.log(math.log(n)))) + 1
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    found = np.flatnonzero(sieve)
    if found.size < n:
        raise RuntimeError(f"sieve bound {bound} too small for {n} primes")
    return found[:n].astype(np.int64)


def model_source_matrix(d):
    """Tridiagonal matrix with 4 on the diagonal and -1 on the off-diagonals."""
    if d < 2:
        raise ValueError("d must be at least 2")
    M = 4.0 * np.eye(d)
    off = np.arange(d - 1)
    M[off, off + 1] = -1.0
    M[off + 1, off] = -1.0
    return M


def trefethen_source_matrix(d):
    """Primes on the diagonal, ones at power-of-two offsets |i - j|.

    For d below the usual 1000 the first d primes are used and offsets of at
    least d drop out.
    """
    if d < 1:
        raise ValueError("d must be positive")
    M = np.diag(primes(d).astype(np.float64))
    for t in POWER_OF_TWO_OFFSETS:
        if t >= d:
            break
        idx = np.arange(d - t)
        M[idx, idx + t] = 1.0
        M[idx + t, idx] = 1.0
    return M


def _dense_inverse(M):
    d = M.shape[0]
    A = scipy.linalg.solve(M, np.eye(d))
    residual = frobenius_norm(M @ A - np.eye(d))
    if residual > _INVERSE_RESIDUAL_TOL:
        raise SingularMatrixError(
            f"inverse residual {residual:.3e} exceeds {_INVERSE_RESIDUAL_TOL:.0e}"
        )
    return A

def model_problem_matrix(d):
    """Dense inverse of the tridiagonal model matrix."""
    return _dense_inverse(model_source_matrix(d))


def trefethen_matrix(d):
    """Dense inverse of the Trefethen primes matrix."""
    return _dense_inverse(trefethen_source_matrix(d))
