"""Root finding for degree-3/4 stability polynomials.

Two routes are kept deliberately separate:

- find_roots: companion-matrix eigenvalues plus one Newton pass, with a
  per-root residual contract. Used for point queries and as the check
  route in tests.
- cubic/quartic batch solvers: closed-form (Cardano / Ferrari) followed
  by two Newton passes, fully vectorized. Used by the region scans,
  where millions of small polynomials make companion matrices too slow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RESIDUAL_FACTOR = 1e-8
_OMEGA = np.exp(2j * np.pi / 3)


class DegeneratePolynomialError(ValueError):
    """Leading coefficient (numerically) zero."""


@dataclass(frozen=True)
class RootReport:
    roots: np.ndarray
    max_modulus: float
    stable: bool
    tol: float
    on_unit_circle: np.ndarray

    @property
    def degree(self):
        return len(self.roots)


def _coeff_array(p):
    coeffs = getattr(p, "coeffs", p)
    return np.asarray(coeffs, dtype=complex)


def horner(coeffs, z):
    z = np.asarray(z)
    acc = np.zeros(np.broadcast_shapes(coeffs[..., 0].shape, z.shape), dtype=complex)
    acc += coeffs[..., 0]
    for k in range(1, coeffs.shape[-1]):
        acc = acc * z + coeffs[..., k]
    return acc


def find_roots(p, tol: float = 1e-9) -> RootReport:
    """All roots with multiplicity, max modulus, and the stability verdict
    max_modulus <= 1 + tol."""
    coeffs = _coeff_array(p)
    scale = np.max(np.abs(coeffs))
    if scale == 0 or abs(coeffs[0]) <= 1e-12 * scale:
        raise DegeneratePolynomialError(
            f"leading coefficient {coeffs[0]} is degenerate (scale {scale:.3e})")
    roots = np.roots(coeffs)
    # one Newton pass; keep the original root where the derivative is tiny
    # (multiple root) or the update does not help
    deriv_coeffs = coeffs[:-1] * np.arange(len(coeffs) - 1, 0, -1)
    pv = horner(coeffs, roots)
    dv = horner(deriv_coeffs, roots)
    ok = np.abs(dv) > 1e-30
    polished = np.where(ok, roots - np.where(ok, pv / np.where(ok, dv, 1.0), 0), roots)
    better = np.abs(horner(coeffs, polished)) <= np.abs(pv)
    roots = np.where(better, polished, roots)

    resid = np.abs(horner(coeffs, roots))
    if np.any(resid > RESIDUAL_FACTOR * scale):
        raise RuntimeError(
            f"root residual {resid.max():.3e} exceeds {RESIDUAL_FACTOR * scale:.3e}")
    mods = np.abs(roots)
    max_modulus = float(mods.max())
    return RootReport(
        roots=roots,
        max_modulus=max_modulus,
        stable=bool(max_modulus <= 1 + tol),
        tol=tol,
        on_unit_circle=np.abs(mods - 1.0) <= tol,
    )


def _cbrt(z):
    return np.exp(np.log(np.where(z == 0, 1.0, z)) / 3.0) * (z != 0)


def _cubic_roots_monic(a, b, c):
    """Roots of z^3 + a z^2 + b z + c, elementwise over arrays."""
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    sq = np.sqrt(0.25 * q * q + p**3 / 27.0)
    u3a = -0.5 * q + sq
    u3b = -0.5 * q - sq
    u3 = np.where(np.abs(u3a) >= np.abs(u3b), u3a, u3b)
    u = _cbrt(u3)
    safe = np.abs(u) > 0
    v = np.where(safe, p / np.where(safe, 3.0 * u, 1.0), 0.0)
    shift = a / 3.0
    r0 = u - v - shift
    r1 = _OMEGA * u - v / _OMEGA - shift
    r2 = _OMEGA**2 * u - v / _OMEGA**2 - shift
    return np.stack([r0, r1, r2], axis=-1)


def _quartic_roots_monic(a, b, c, d):
    """Roots of z^4 + a z^3 + b z^2 + c z + d via Ferrari, elementwise."""
    p = b - 3.0 * a * a / 8.0
    q = c - 0.5 * a * b + a**3 / 8.0
    r = d - 0.25 * a * c + a * a * b / 16.0 - 3.0 * a**4 / 256.0
    # resolvent w^3 + 2p w^2 + (p^2 - 4r) w - q^2 = 0; the max-modulus
    # root keeps the factorization well-conditioned (and is exact for
    # the biquadratic q=0 case)
    wr = _cubic_roots_monic(2.0 * p, p * p - 4.0 * r, -q * q)
    w = np.take_along_axis(wr, np.argmax(np.abs(wr), axis=-1)[..., None], -1)[..., 0]
    alpha = np.sqrt(w)
    safe = np.abs(alpha) > 0
    diff = np.where(safe, q / np.where(safe, alpha, 1.0), 0.0)
    beta = 0.5 * (p + w - diff)
    gamma = 0.5 * (p + w + diff)
    s1 = np.sqrt(alpha * alpha - 4.0 * beta)
    s2 = np.sqrt(alpha * alpha - 4.0 * gamma)
    shift = a / 4.0
    y0 = 0.5 * (-alpha + s1) - shift
    y1 = 0.5 * (-alpha - s1) - shift
    y2 = 0.5 * (alpha + s2) - shift
    y3 = 0.5 * (alpha - s2) - shift
    return np.stack([y0, y1, y2, y3], axis=-1)


def _polish(coeffs_monic, roots, passes=2):
    n = coeffs_monic.shape[-1] - 1
    deriv = coeffs_monic[..., :-1] * np.arange(n, 0, -1)
    for _ in range(passes):
        pv = horner(coeffs_monic[..., None, :], roots)
        dv = horner(deriv[..., None, :], roots)
        ok = np.abs(dv) > 1e-30
        step = np.where(ok, pv / np.where(ok, dv, 1.0), 0.0)
        cand = roots - step
        roots = np.where(np.abs(horner(coeffs_monic[..., None, :], cand)) <= np.abs(pv),
                         cand, roots)
    return roots


def batch_roots(coeffs):
    """Roots of a batch of cubics or quartics.

    coeffs has shape (..., degree+1), highest power first. Rows whose
    leading coefficient is below 1e-12 of the row scale come back as
    NaN. Returns (roots, degenerate_mask).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    deg = coeffs.shape[-1] - 1
    if deg not in (3, 4):
        raise ValueError(f"batch solver handles degrees 3 and 4, got {deg}")
    scale = np.max(np.abs(coeffs), axis=-1)
    lead = coeffs[..., 0]
    degenerate = np.abs(lead) <= 1e-12 * scale
    lead_safe = np.where(degenerate, 1.0, lead)
    monic = coeffs / lead_safe[..., None]
    if deg == 3:
        roots = _cubic_roots_monic(monic[..., 1], monic[..., 2], monic[..., 3])
    else:
        roots = _quartic_roots_monic(monic[..., 1], monic[..., 2],
                                     monic[..., 3], monic[..., 4])
    roots = _polish(monic, roots)
    roots = np.where(degenerate[..., None], np.nan + 0j, roots)
    return roots, degenerate


def batch_max_modulus(coeffs):
    """Max root modulus per row; NaN where the row is degenerate."""
    roots, degenerate = batch_roots(coeffs)
    mods = np.abs(roots)
    out = np.max(mods, axis=-1)
    out = np.where(degenerate, np.nan, out)
    return out, degenerate
