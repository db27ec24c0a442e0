"""Wishart test fixtures with exact moment formulas.

A = G^T G for an r x d standard Gaussian G. Diagonal entries are
chi-squared with r degrees of freedom, off-diagonal entries are inner
products of independent length-r Gaussian vectors, which gives closed-form
expected squared norms for the diagonal and off-diagonal parts. These
matrices serve as statistically calibrated inputs for error experiments.
"""

from __future__ import annotations

import numpy as np

from .core import RandomSeed, gaussian_matrix


def wishart_matrix(r, d, seed):
    """Sample A = G^T G with G an r x d standard Gaussian matrix.

    The upper triangle is mirrored so the output is symmetric bitwise, not
    merely up to rounding.
    """
    if r < 1 or d < 1:
        raise ValueError(f"dimensions must be positive, got r={r}, d={d}")
    G = gaussian_matrix(r, d, RandomSeed.coerce(seed))
    W = G.T @ G
    upper = np.triu(W)
    return upper + np.triu(W, 1).T


def wishart_expected_norms(r, d):
    """Expected squared Frobenius norms (diagonal part, off-diagonal part).

    Diagonal entries have second moment 2r + r^2, off-diagonal entries have
    second moment r, so the expectations are d*(2r + r^2) and (d^2 - d)*r.
    """
    if r < 1 or d < 1:
        raise ValueError(f"dimensions must be positive, got r={r}, d={d}")
    on_diag = d * (2.0 * r + float(r) ** 2)
    off_diag = (float(d) ** 2 - d) * r
    return on_diag, off_diag
