"""Input validation helpers shared by the estimators, operators and CLI."""

from __future__ import annotations

import numpy as np
from sympy import isprime


def check_prime(p, name="p"):
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(p).__name__}")
    p = int(p)
    if not isprime(p):
        raise ValueError(f"{name} must be prime, got {p}")
    return p


def check_precision(k, name="k"):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(k).__name__}")
    k = int(k)
    if k < 1:
        raise ValueError(f"{name} must be >= 1, got {k}")
    return k


def check_truncation(N, p=None):
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise TypeError(f"N must be an integer, got {type(N).__name__}")
    N = int(N)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if p is not None and N < p:
        raise ValueError(f"N must be >= p so that U_p has a nonempty window (N={N}, p={p})")
    return N


def check_coefficient_matrix(X, modulus=None):
    """Return ``X`` as a list of integer rows of equal length.

    Accepts nested sequences or integer numpy arrays (including ``object``
    arrays of Python ints). Entries are reduced modulo ``modulus`` if given.
    """
    if hasattr(X, "coeffs") and hasattr(X, "N"):
        X = [X]
    rows = []
    for row in X:
        if hasattr(row, "coeffs") and hasattr(row, "N"):
            row = row.coeffs
        vals = []
        for x in np.asarray(row, dtype=object).ravel():
            if isinstance(x, (float, np.floating)):
                if x != int(x):
                    raise ValueError("coefficient matrix must hold integers")
            vals.append(int(x) if modulus is None else int(x) % modulus)
        rows.append(vals)
    if not rows:
        raise ValueError("coefficient matrix is empty")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ValueError("coefficient matrix rows must be nonempty and of equal length")
    return rows
