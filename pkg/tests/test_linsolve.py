"""Banded-plus-corners solver against dense reference solves."""

import numpy as np
import pytest

from cse_schemes.linsolve import (apply_banded_periodic, dense_from_banded,
                                  solve_banded_periodic)


def _random_system(rng, n, l_and_u, n_corners, dtype=complex):
    l, u = l_and_u
    ab = rng.standard_normal((l + u + 1, n))
    if dtype is complex:
        ab = ab + 1j * rng.standard_normal((l + u + 1, n))
    # diagonal dominance keeps the reference solve well conditioned
    ab[u] += 10.0
    corners = []
    taken = set()
    while len(corners) < n_corners:
        i, j = int(rng.integers(0, n)), int(rng.integers(0, n))
        if abs(i - j) <= max(l, u) or (i, j) in taken:
            continue
        v = rng.standard_normal() + (1j * rng.standard_normal() if dtype is complex else 0)
        corners.append((i, j, v))
        taken.add((i, j))
    return ab, corners


@pytest.mark.parametrize("n,lu,nc", [(16, (1, 1), 2), (50, (1, 1), 2),
                                     (40, (2, 2), 4), (33, (2, 1), 3)])
def test_solve_matches_dense(n, lu, nc):
    rng = np.random.default_rng(n)
    ab, corners = _random_system(rng, n, lu, nc)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = solve_banded_periodic(lu, ab, corners, b)
    A = dense_from_banded(lu, ab, corners)
    np.testing.assert_allclose(A @ x, b, atol=1e-10 * np.abs(b).max())
    np.testing.assert_allclose(x, np.linalg.solve(A, b), rtol=1e-9, atol=1e-12)


def test_real_dtype():
    rng = np.random.default_rng(5)
    ab, corners = _random_system(rng, 20, (1, 1), 2, dtype=float)
    b = rng.standard_normal(20)
    x = solve_banded_periodic((1, 1), ab, corners, b)
    A = dense_from_banded((1, 1), ab, corners)
    np.testing.assert_allclose(A @ x, b, atol=1e-11)


def test_apply_matches_dense_matvec():
    rng = np.random.default_rng(9)
    ab, corners = _random_system(rng, 24, (2, 2), 4)
    v = rng.standard_normal(24) + 1j * rng.standard_normal(24)
    A = dense_from_banded((2, 2), ab, corners)
    np.testing.assert_allclose(apply_banded_periodic((2, 2), ab, corners, v), A @ v,
                               rtol=1e-12)


def test_no_corners_plain_banded():
    rng = np.random.default_rng(13)
    ab, _ = _random_system(rng, 15, (1, 1), 0)
    b = rng.standard_normal(15) + 0j
    x = solve_banded_periodic((1, 1), ab, [], b)
    A = dense_from_banded((1, 1), ab, [])
    np.testing.assert_allclose(A @ x, b, atol=1e-11)


def test_dense_fallback_on_singular_capacitance():
    """Corner values chosen so the banded part alone is singular; the
    Woodbury update cannot start from it and the dense path must kick in."""
    n = 8
    ab = np.zeros((3, n), dtype=complex)
    ab[1] = 1.0
    ab[1, 0] = 0.0        # banded part singular at (0,0)
    # corners close the cycle: full matrix is a permutation-like system
    corners = [(0, n - 1, 1.0), (n - 1, 0, 1.0)]
    b = np.arange(1.0, n + 1.0) + 0j
    x = solve_banded_periodic((1, 1), ab, corners, b)
    A = dense_from_banded((1, 1), ab, corners)
    np.testing.assert_allclose(A @ x, b, atol=1e-12)
