"""Root finder checks.

np.roots (companion-matrix eigenvalues) is the independent reference for
both the report-producing path and the vectorized closed-form path.
"""

import numpy as np
import pytest

from cse_schemes.polyroots import (DegeneratePolynomialError, batch_max_modulus,
                                   batch_roots, find_roots, horner)


def _match(a, b, tol):
    """Greedy root-multiset match; returns worst pair distance."""
    a, b = list(a), list(b)
    worst = 0.0
    for r in a:
        j = int(np.argmin([abs(r - s) for s in b]))
        worst = max(worst, abs(r - b[j]))
        b.pop(j)
    assert worst <= tol, worst
    return worst


def test_trivial_factored_cubic():
    # (z-1)^2 (z+1) = z^3 - z^2 - z + 1
    rep = find_roots(np.array([1.0, -1.0, -1.0, 1.0]))
    _match(rep.roots, [1.0, 1.0, -1.0], 1e-6)
    assert rep.max_modulus == pytest.approx(1.0, abs=1e-7)
    assert rep.stable


def test_quartic_roots_of_unity():
    rep = find_roots(np.array([1.0, 0, 0, 0, -1.0]))
    _match(rep.roots, [1, -1, 1j, -1j], 1e-10)
    assert rep.stable
    assert np.all(rep.on_unit_circle)


def test_degenerate_leading_coefficient():
    with pytest.raises(DegeneratePolynomialError):
        find_roots(np.array([0.0, 1.0, 2.0]))


def test_residual_contract_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        deg = rng.integers(3, 5)
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        rep = find_roots(c)
        scale = np.max(np.abs(c))
        res = np.abs(horner(c, rep.roots))
        assert np.all(res <= 1e-8 * scale)
        _match(rep.roots, np.roots(c), 1e-6)


def test_horner_matches_polyval():
    rng = np.random.default_rng(3)
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    z = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    np.testing.assert_allclose(horner(c, z), np.polyval(c, z), rtol=1e-12)


def test_horner_batched_coeff_axis():
    rng = np.random.default_rng(4)
    cs = rng.standard_normal((6, 5)) + 1j * rng.standard_normal((6, 5))
    z = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    got = horner(cs, z)
    want = np.array([np.polyval(cs[i], z[i]) for i in range(6)])
    np.testing.assert_allclose(got, want, rtol=1e-12)


def test_batch_roots_vs_numpy():
    rng = np.random.default_rng(20)
    cs = rng.standard_normal((300, 5)) + 1j * rng.standard_normal((300, 5))
    roots, degen = batch_roots(cs)
    assert not degen.any()
    for i in range(300):
        _match(roots[i], np.roots(cs[i]), 1e-7)


def test_batch_roots_cubics():
    rng = np.random.default_rng(21)
    cs = rng.standard_normal((200, 4)) + 1j * rng.standard_normal((200, 4))
    roots, degen = batch_roots(cs)
    assert not degen.any()
    for i in range(200):
        _match(roots[i], np.roots(cs[i]), 1e-7)


def test_batch_roots_degenerate_rows_nan():
    cs = np.array([[1.0, 0, 0, 0, -1.0], [0.0, 1.0, 1.0, 1.0, 1.0]], dtype=complex)
    roots, degen = batch_roots(cs)
    assert list(degen) == [False, True]
    assert np.all(np.isnan(roots[1]))


def test_batch_max_modulus_agrees():
    rng = np.random.default_rng(22)
    cs = rng.standard_normal((500, 5)) + 1j * rng.standard_normal((500, 5))
    mods, degen = batch_max_modulus(cs)
    assert not degen.any()
    ref = np.array([np.abs(np.roots(cs[i])).max() for i in range(500)])
    np.testing.assert_allclose(mods, ref, rtol=1e-7, atol=1e-9)


def test_repeated_roots_modulus_accuracy():
    # multiple roots cost roughly half the digits; modulus still good to ~1e-7
    rng = np.random.default_rng(23)
    for _ in range(50):
        r = rng.standard_normal() + 1j * rng.standard_normal()
        s = rng.standard_normal() + 1j * rng.standard_normal()
        c = np.convolve(np.convolve([1, -r], [1, -r]), np.convolve([1, -s], [1, -s]))
        mods, _ = batch_max_modulus(c[None, :])
        assert mods[0] == pytest.approx(max(abs(r), abs(s)), abs=2e-7)


def test_biquadratic_exact_path():
    # z^4 - 2 z^2 + 1 = (z-1)^2 (z+1)^2, handled without cancellation
    mods, degen = batch_max_modulus(np.array([[1.0, 0.0, -2.0, 0.0, 1.0]]))
    assert not degen[0]
    assert mods[0] == pytest.approx(1.0, abs=1e-12)


def test_scaling_invariance():
    rng = np.random.default_rng(24)
    c = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    m1, _ = batch_max_modulus(c[None, :])
    m2, _ = batch_max_modulus((1e8 * c)[None, :])
    assert m1[0] == pytest.approx(m2[0], rel=1e-10)


def test_report_flags():
    rep = find_roots(np.array([1.0, 0.0, -4.0]), tol=1e-9)
    assert rep.max_modulus == pytest.approx(2.0)
    assert not rep.stable
    assert rep.degree == 2
