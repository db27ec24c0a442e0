"""Matrix Market readers and writers.

Supports the three shapes this package exchanges: ``array real`` for dense
matrices, ``coordinate real`` for pattern-aligned values, and ``coordinate
pattern`` for bare sparsity patterns. Indices are 1-based on disk and
0-based in memory; array entries are stored column by column per the format.
Parse failures carry the offending line number.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import MatrixMarketError
from .pattern import SparseApprox, SparsityPattern

_BANNER = "%%MatrixMarket"


def _format_value(v):
    return repr(float(v))


def _write_lines(path, lines):
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def write_dense(path, A, comments=()):
    """Write a dense matrix in array real general format."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("matrix must be 2-D")
    lines = [f"{_BANNER} matrix array real general"]
    lines += [f"% {c}" for c in comments]
    lines.append(f"{A.shape[0]} {A.shape[1]}")
    lines += [_format_value(v) for v in A.ravel(order="F")]
    _write_lines(path, lines)


def write_pattern(path, S, comments=()):
    """Write a sparsity pattern in coordinate pattern general format."""
    lines = [f"{_BANNER} matrix coordinate pattern general"]
    lines += [f"% {c}" for c in comments]
    lines.append(f"{S.n_rows} {S.n_cols} {S.nnz}")
    rows = S.slot_rows()
    lines += [f"{i + 1} {j + 1}" for i, j in zip(rows, S.cols)]
    _write_lines(path, lines)


def write_sparse(path, approx, comments=()):
    """Write pattern-aligned values in coordinate real general format."""
    if not isinstance(approx, SparseApprox):
        raise TypeError("expected a SparseApprox")
    S = approx.pattern
    lines = [f"{_BANNER} matrix coordinate real general"]
    lines += [f"% {c}" for c in comments]
    lines.append(f"{S.n_rows} {S.n_cols} {S.nnz}")
    rows = S.slot_rows()
    lines += [
        f"{i + 1} {j + 1} {_format_value(v)}"
        for i, j, v in zip(rows, S.cols, approx.values)
    ]
    _write_lines(path, lines)


class _Reader:
    def __init__(self, path):
        with open(path, "r", encoding="ascii", errors="replace") as fh:
            self.lines = fh.read().splitlines()
        self.path = path
        self.pos = 0

    def header(self):
        if not self.lines:
            raise MatrixMarketError("empty file", line=1)
        parts = self.lines[0].split()
        if len(parts) != 5 or parts[0] != _BANNER or parts[1].lower() != "matrix":
            raise MatrixMarketError(f"malformed header {self.lines[0]!r}", line=1)
        fmt, field, symmetry = (p.lower() for p in parts[2:])
        if fmt not in ("array", "coordinate"):
            raise MatrixMarketError(f"unsupported format {fmt!r}", line=1)
        if field not in ("real", "integer", "pattern"):
            raise MatrixMarketError(f"unsupported field {field!r}", line=1)
        if symmetry not in ("general", "symmetric"):
            raise MatrixMarketError(f"unsupported symmetry {symmetry!r}", line=1)
        self.pos = 1
        return fmt, field, symmetry

    def next_data_line(self):
        """Next non-comment, non-blank line with its 1-based number, or None."""
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            stripped = line.strip()
            if stripped and not stripped.startswith("%"):
                return stripped, self.pos
        return None

    def size_line(self, n_fields):
        item = self.next_data_line()
        if item is None:
            raise MatrixMarketError("missing size line", line=len(self.lines))
        text, line_no = item
        parts = text.split()
        if len(parts) != n_fields:
            raise MatrixMarketError(
                f"size line needs {n_fields} integers, got {text!r}", line=line_no
            )
        try:
            sizes = [int(p) for p in parts]
        except ValueError:
            raise MatrixMarketError(f"non-integer size in {text!r}", line=line_no)
        if any(s < 0 for s in sizes) or any(s == 0 for s in sizes[:2]):
            raise MatrixMarketError(f"invalid sizes {text!r}", line=line_no)
        return sizes


def _parse_index(token, limit, line_no, axis):
    try:
        idx = int(token)
    except ValueError:
        raise MatrixMarketError(f"non-integer {axis} index {token!r}", line=line_no)
    if not (1 <= idx <= limit):
        raise MatrixMarketError(
            f"{axis} index {idx} outside [1, {limit}]", line=line_no
        )
    return idx - 1


def _read_coordinate(reader, field, symmetry, want_values):
    n_rows, n_cols, nnz = reader.size_line(3)
    entries = {}
    duplicates = 0
    for _ in range(nnz):
        item = reader.next_data_line()
        if item is None:
            raise MatrixMarketError(
                f"expected {nnz} entries, file ended early", line=len(reader.lines)
            )
        text, line_no = item
        parts = text.split()
        expected = 2 if field == "pattern" else 3
        if len(parts) != expected:
            raise MatrixMarketError(
                f"entry needs {expected} fields, got {text!r}", line=line_no
            )
        i = _parse_index(parts[0], n_rows, line_no, "row")
        j = _parse_index(parts[1], n_cols, line_no, "column")
        if field == "pattern":
            v = 1.0
        else:
            try:
                v = float(parts[2])
            except ValueError:
                raise MatrixMarketError(f"non-numeric value {parts[2]!r}", line=line_no)
        pairs = [(i, j)]
        if symmetry == "symmetric" and i != j:
            pairs.append((j, i))
        for key in pairs:
            if key in entries:
                duplicates += 1
                if want_values:
                    entries[key] += v
            else:
                entries[key] = v
    trailing = reader.next_data_line()
    if trailing is not None:
        raise MatrixMarketError(
            f"unexpected extra data {trailing[0]!r}", line=trailing[1]
        )
    if duplicates:
        action = "summed" if want_values else "collapsed"
        warnings.warn(f"{duplicates} duplicate coordinate entries {action}")
    return n_rows, n_cols, entries


def read_pattern(path):
    """Read a coordinate pattern file into a SparsityPattern."""
    reader = _Reader(path)
    fmt, field, symmetry = reader.header()
    if fmt != "coordinate" or field != "pattern":
        raise MatrixMarketError(
            f"expected a coordinate pattern file, found {fmt} {field}", line=1
        )
    n_rows, n_cols, entries = _read_coordinate(reader, field, symmetry, want_values=False)
    rows = [[] for _ in range(n_rows)]
    for i, j in entries:
        rows[i].append(j)
    return SparsityPattern.from_rows(n_rows, n_cols, rows)


def read_dense(path):
    """Read a matrix as a dense array (array real or densified coordinate)."""
    reader = _Reader(path)
    fmt, field, symmetry = reader.header()
    if fmt == "array":
        if field == "pattern":
            raise MatrixMarketError("array format cannot carry a pattern field", line=1)
        n_rows, n_cols = reader.size_line(2)
        if symmetry == "symmetric":
            expected = n_rows * (n_rows + 1) // 2
            if n_rows != n_cols:
                raise MatrixMarketError("symmetric matrix must be square", line=1)
        else:
            expected = n_rows * n_cols
        values = []
        for _ in range(expected):
            item = reader.next_data_line()
            if item is None:
                raise MatrixMarketError(
                    f"expected {expected} entries, file ended early",
                    line=len(reader.lines),
                )
            text, line_no = item
            parts = text.split()
            if len(parts) != 1:
                raise MatrixMarketError(
                    f"array entry needs a single value, got {text!r}", line=line_no
                )
            try:
                values.append(float(parts[0]))
            except ValueError:
                raise MatrixMarketError(f"non-numeric value {text!r}", line=line_no)
        trailing = reader.next_data_line()
        if trailing is not None:
            raise MatrixMarketError(
                f"unexpected extra data {trailing[0]!r}", line=trailing[1]
            )
        if symmetry == "symmetric":
            A = np.zeros((n_rows, n_cols))
            k = 0
            for j in range(n_cols):
                for i in range(j, n_rows):
                    A[i, j] = values[k]
                    A[j, i] = values[k]
                    k += 1
            return A
        return np.asarray(values).reshape(n_rows, n_cols, order="F")
    n_rows, n_cols, entries = _read_coordinate(reader, field, symmetry, want_values=True)
    A = np.zeros((n_rows, n_cols))
    for (i, j), v in entries.items():
        A[i, j] = v
    return A
