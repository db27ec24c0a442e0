"""Binary sparsity patterns: row-compressed pattern type, builders, value container.

A pattern marks the entries an approximation is allowed to hold. It is stored
in compressed-row form (one sorted column list per row plus prefix offsets) so
that a flat value array aligns slot-for-slot with the pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SparsityPattern:
    """Immutable binary n_rows x n_cols pattern.

    Attributes
    ----------
    n_rows, n_cols : int
        Pattern shape.
    cols : ndarray of int64
        Concatenated column indices, sorted and distinct within each row.
    offsets : ndarray of int64
        Prefix sums of row slot counts, length ``n_rows + 1``.
    """

    def __init__(self, n_rows, n_cols, cols, offsets):
        n_rows = int(n_rows)
        n_cols = int(n_cols)
        if n_rows < 1 or n_cols < 1:
            raise ValueError("pattern dimensions must be positive")
        cols = np.ascontiguousarray(cols, dtype=np.int64)
        offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        if offsets.shape != (n_rows + 1,) or offsets[0] != 0 or offsets[-1] != cols.size:
            raise ValueError("offsets must be prefix sums over the slot array")
        if np.any(np.diff(offsets) < 0):
            raise ValueError("offsets must be non-decreasing")
        if cols.size and (cols.min() < 0 or cols.max() >= n_cols):
            raise ValueError(f"column index out of range [0, {n_cols})")
        for i in range(n_rows):
            row = cols[offsets[i]:offsets[i + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise ValueError(f"row {i} has unsorted or duplicate column indices")
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.cols = cols
        self.offsets = offsets
        self.cols.flags.writeable = False
        self.offsets.flags.writeable = False

    @classmethod
    def from_rows(cls, n_rows, n_cols, rows):
        """Build from per-row column iterables; sorts and drops duplicates."""
        rows = list(rows)
        if len(rows) != n_rows:
            raise ValueError(f"expected {n_rows} rows, got {len(rows)}")
        lists = [np.unique(np.asarray(list(r), dtype=np.int64)) for r in rows]
        counts = np.array([r.size for r in lists], dtype=np.int64)
        offsets = np.concatenate(([0], np.cumsum(counts)))
        cols = np.concatenate(lists) if lists else np.empty(0, dtype=np.int64)
        return cls(n_rows, n_cols, cols, offsets)

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return int(self.cols.size)

    def row_cols(self, i):
        """Sorted column indices of row ``i`` (a read-only view)."""
        return self.cols[self.offsets[i]:self.offsets[i + 1]]

    def row_nnz(self):
        """Slot count per row."""
        return np.diff(self.offsets)

    def max_row_nnz(self):
        counts = self.row_nnz()
        return int(counts.max()) if counts.size else 0

    def col_degrees(self):
        """Slot count per column."""
        return np.bincount(self.cols, minlength=self.n_cols)

    def slot_rows(self):
        """Row index of each slot, aligned with ``cols``."""
        return np.repeat(np.arange(self.n_rows, dtype=np.int64), self.row_nnz())

    def to_dense_mask(self):
        """Dense 0/1 mask of the pattern."""
        mask = np.zeros((self.n_rows, self.n_cols))
        mask[self.slot_rows(), self.cols] = 1.0
        return mask

    def _slot_keys(self):
        # Row-major slot encoding; ascending by construction.
        return self.slot_rows() * self.n_cols + self.cols

    def is_symmetric(self):
        """True when the pattern is square and slot (i, j) implies slot (j, i)."""
        if self.n_rows != self.n_cols:
            return False
        keys = self._slot_keys()
        mirrored = np.sort(self.cols * self.n_cols + self.slot_rows())
        return keys.size == mirrored.size and np.array_equal(keys, mirrored)

    def transpose_permutation(self):
        """Index array p with p[slot of (i, j)] = slot of (j, i).

        Requires a symmetric pattern.
        """
        if not self.is_symmetric():
            raise ValueError("transpose permutation requires a symmetric pattern")
        keys = self._slot_keys()
        wanted = self.cols * self.n_cols + self.slot_rows()
        return np.searchsorted(keys, wanted)

    def __eq__(self, other):
        if not isinstance(other, SparsityPattern):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.cols, other.cols)
        )

    def __hash__(self):
        return hash((self.shape, self.cols.tobytes(), self.offsets.tobytes()))

    def __repr__(self):
        return f"SparsityPattern({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


@dataclass(frozen=True)
class SparseApprox:
    """Values aligned one-to-one with a pattern's slots."""

    pattern: SparsityPattern
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (self.pattern.nnz,):
            raise ValueError(
                f"value array length {values.shape} does not match "
                f"{self.pattern.nnz} pattern slots"
            )
        object.__setattr__(self, "values", values)

    def to_dense(self):
        """Dense matrix with off-pattern entries structurally zero."""
        out = np.zeros(self.pattern.shape)
        out[self.pattern.slot_rows(), self.pattern.cols] = self.values
        return out


def diagonal_pattern(d):
    """Slots (i, i) for i in [0, d)."""
    if d < 1:
        raise ValueError("d must be positive")
    idx = np.arange(d, dtype=np.int64)
    return SparsityPattern(d, d, idx, np.arange(d + 1, dtype=np.int64))


def banded_pattern(d, b):
    """Slots where |i - j| <= b; total bandwidth 2b + 1, truncated at edges."""
    if d < 1:
        raise ValueError("d must be positive")
    if b < 0:
        raise ValueError("bandwidth must be nonnegative")
    rows = [range(max(0, i - b), min(d, i + b + 1)) for i in range(d)]
    return SparsityPattern.from_rows(d, d, rows)


def circulant_band_pattern(d, b):
    """Slots where min(|i - j|, d - |i - j|) <= b; every row has exactly 2b + 1."""
    if d <= 2 * b:
        raise ValueError(f"circulant band needs d > 2b, got d={d}, b={b}")
    rows = [sorted({(i + o) % d for o in range(-b, b + 1)}) for i in range(d)]
    return SparsityPattern.from_rows(d, d, rows)


def multiband_pattern(d, offsets, b):
    """Union of bands of half-width ``b`` centered at the +-t diagonals.

    Slot (i, j) is present when |i - j - t| <= b or |i - j + t| <= b for some
    t in ``offsets``. Whether the main diagonal is covered depends on the
    offsets supplied (t = 0, or any t <= b).
    """
    if d < 1:
        raise ValueError("d must be positive")
    offsets = sorted({int(t) for t in offsets})
    if not offsets:
        raise ValueError("offsets must be nonempty")
    if offsets[0] < 0:
        raise ValueError("offsets must be nonnegative")
    if b < 0:
        raise ValueError("half-width must be nonnegative")
    rows = []
    for i in range(d):
        cols = set()
        for t in offsets:
            for center in (i - t, i + t):
                lo, hi = max(0, center - b), min(d, center + b + 1)
                cols.update(range(lo, hi))
        rows.append(sorted(cols))
    return SparsityPattern.from_rows(d, d, rows)


def hard_coloring_pattern(k):
    """k^2 x k^2 pattern with slot (p*k + i, q*k + j) when i == q or j == p.

    Every row and column has exactly 2k - 1 slots, yet the supports of all
    column pairs intersect, so probing by colors degrades to one query per
    column while sketching needs only 2k - 1.
    """
    if k < 1:
        raise ValueError("k must be positive")
    d = k * k
    rows = []
    for p in range(k):
        for i in range(k):
            cols = {i * k + j for j in range(k)} | {q * k + p for q in range(k)}
            rows.append(sorted(cols))
    return SparsityPattern.from_rows(d, d, rows)


def block_diagonal_pattern(d, block):
    """Dense block x block blocks along the diagonal; block must divide d."""
    if d < 1 or block < 1:
        raise ValueError("dimensions must be positive")
    if d % block != 0:
        raise ValueError(f"block size {block} does not divide d={d}")
    rows = []
    for i in range(d):
        start = (i // block) * block
        rows.append(range(start, start + block))
    return SparsityPattern.from_rows(d, d, rows)
