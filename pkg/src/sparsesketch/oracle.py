"""Matrix-vector product access to the target matrix, with query accounting.

An oracle is the only window onto the matrix being approximated. Queries are
submitted as blocks (one column per query vector); all oracles here are
deterministic and safe for concurrent ``apply`` calls.
"""

from __future__ import annotations

import threading
import warnings

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import SingularMatrixError
from .pattern import SparseApprox


class MatVecOracle:
    """Base oracle: maps a query block X (n_cols x m) to A @ X (n_rows x m)."""

    def __init__(self, n_rows, n_cols):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)

    def apply(self, X):
        raise NotImplementedError

    def _check_block(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("query block must be 2-D (one column per query)")
        if X.shape[0] != self.n_cols:
            raise ValueError(
                f"query block has {X.shape[0]} rows, oracle expects {self.n_cols}"
            )
        return X

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)


class DenseOracle(MatVecOracle):
    """Oracle over an explicit dense matrix."""

    def __init__(self, A):
        A = np.asarray(A, dtype=np.float64)
        if A.ndim != 2:
            raise ValueError("matrix must be 2-D")
        super().__init__(*A.shape)
        self.matrix = A

    def apply(self, X):
        return self.matrix @ self._check_block(X)


class SparseOracle(MatVecOracle):
    """Oracle over pattern-aligned values, applied in compressed sparse row form."""

    def __init__(self, pattern, values):
        if isinstance(values, SparseApprox):
            if values.pattern is not pattern and values.pattern != pattern:
                raise ValueError("values are aligned with a different pattern")
            values = values.values
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != (pattern.nnz,):
            raise ValueError(
                f"value array length {values.shape} does not match {pattern.nnz} slots"
            )
        super().__init__(pattern.n_rows, pattern.n_cols)
        self._csr = scipy.sparse.csr_array(
            (values, pattern.cols.copy(), pattern.offsets.copy()), shape=pattern.shape
        )

    def apply(self, X):
        return np.asarray(self._csr @ self._check_block(X))


class InverseOracle(MatVecOracle):
    """Oracle for A = M^-1: factors M once (LU, partial pivoting), then solves."""

    def __init__(self, M):
        M = np.asarray(M, dtype=np.float64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("matrix must be square")
        super().__init__(*M.shape)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            self._lu = scipy.linalg.lu_factor(M)
        pivots = np.abs(np.diag(self._lu[0]))
        d = M.shape[0]
        if pivots.max() == 0.0 or pivots.min() <= d * np.finfo(np.float64).eps * pivots.max():
            raise SingularMatrixError("matrix is singular to working precision")

    def apply(self, X):
        return scipy.linalg.lu_solve(self._lu, self._check_block(X))


class QueryCounter:
    """Exact count of matvec queries consumed (columns of all blocks)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._count = 0
        self._calls = 0

    def add(self, n_columns):
        with self._lock:
            self._count += int(n_columns)
            self._calls += 1

    @property
    def count(self):
        return self._count

    @property
    def calls(self):
        """Number of apply invocations (blocks), for non-adaptivity probes."""
        return self._calls


class CountingOracle(MatVecOracle):
    """Delegates to an inner oracle while counting queries."""

    def __init__(self, inner):
        super().__init__(inner.n_rows, inner.n_cols)
        self.inner = inner
        self.counter = QueryCounter()

    def apply(self, X):
        X = self._check_block(X)
        result = self.inner.apply(X)
        self.counter.add(X.shape[1])
        return result
