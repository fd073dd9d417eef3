"""Banded periodic linear solves.

The implicit part of every stepper is a banded matrix plus a handful of
corner entries from the periodic wrap. Those systems are solved with a
banded factorisation and a Woodbury correction for the corners: write
A = B + U V^T with B the in-band part and one rank-1 term per corner
entry, solve with B, then correct through the small capacitance matrix.
A dense solve is kept as a fallback for the (contrived) cases where the
in-band part alone is singular.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def dense_from_banded(l_and_u, ab, corners):
    """Materialize the full matrix; used by the fallback path and tests."""
    l, u = l_and_u
    n = ab.shape[1]
    A = np.zeros((n, n), dtype=ab.dtype)
    for row in range(ab.shape[0]):
        offset = u - row  # diagonal index: A[i, i+offset]
        for j in range(n):
            i = j - offset
            if 0 <= i < n:
                A[i, j] = ab[row, j]
    for (i, j, v) in corners:
        A[i, j] += v
    return A


def apply_banded_periodic(l_and_u, ab, corners, x):
    """Matrix-vector product for the banded-plus-corners operator.

    Kept independent of the solve path so residual checks exercise the
    assembled operator directly.
    """
    l, u = l_and_u
    n = ab.shape[1]
    y = np.zeros(n, dtype=np.result_type(ab, x))
    for row in range(ab.shape[0]):
        offset = u - row
        # y[i] += ab[row, i+offset] * x[i+offset] for in-range i
        lo = max(0, -offset)
        hi = min(n, n - offset)
        if lo < hi:
            y[lo:hi] += ab[row, lo + offset:hi + offset] * x[lo + offset:hi + offset]
    for (i, j, v) in corners:
        y[i] += v * x[j]
    return y


def solve_banded_periodic(l_and_u, ab, corners, b):
    """Solve (banded(ab) + corners) x = b.

    corners is a sequence of (row, col, value) entries lying outside the
    band. Returns x; raises numpy.linalg.LinAlgError if the matrix is
    singular even for the dense fallback.
    """
    corners = [(i, j, v) for (i, j, v) in corners if v != 0]
    try:
        x = _woodbury(l_and_u, ab, corners, b)
        if np.all(np.isfinite(x.view(float) if np.iscomplexobj(x) else x)):
            return x
    except np.linalg.LinAlgError:
        pass
    # in-band part singular (or capacitance breakdown): solve densely
    A = dense_from_banded(l_and_u, ab, corners)
    return np.linalg.solve(A, b)


def _woodbury(l_and_u, ab, corners, b):
    dtype = np.result_type(ab, b)
    n = ab.shape[1]
    if not corners:
        return solve_banded(l_and_u, ab, b)
    k = len(corners)
    rhs = np.empty((n, k + 1), dtype=dtype)
    rhs[:, 0] = b
    rhs[:, 1:] = 0
    for col, (i, _, v) in enumerate(corners):
        rhs[i, col + 1] = v
    y = solve_banded(l_and_u, ab, rhs)
    yb, yu = y[:, 0], y[:, 1:]
    cols = [j for (_, j, _) in corners]
    cap = np.eye(k, dtype=dtype) + yu[cols, :]
    coef = np.linalg.solve(cap, yb[cols])
    return yb - yu @ coef
