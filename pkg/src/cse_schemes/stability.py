"""Plane-wave stability analysis.

The carrier a e^{i(kx - omega t)} is perturbed mode by mode; for each
perturbation wavenumber ell the linearized recurrence of a scheme has a
characteristic polynomial whose roots decide growth. Everything is
parameterized by the dimensionless triple q = lambda tau |a|^2,
K = k sqrt(tau), L = ell sqrt(tau); grids enter only through the symbol
of the 3-point Laplacian when h > 0.

All generated polynomials are self-reciprocal (root multiset invariant
under z -> 1/conj(z)); their coefficient lists equal their own
conjugate-reversals, which tests rely on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import PlaneWaveContext
from .polyroots import (DegeneratePolynomialError, batch_max_modulus, find_roots,
                        horner)

SCAN_TOL = 1e-6   # unit-circle tolerance inside scans (root noise at coalescence)
POINT_TOL = 1e-9  # tolerance for closed-form point queries


class DispersionError(RuntimeError):
    """The scheme's dispersion relation has no principal-branch solution."""


@dataclass(frozen=True)
class PerturbationMode:
    ell: float
    context: PlaneWaveContext

    @property
    def L(self) -> float:
        return self.ell * math.sqrt(self.context.tau)


@dataclass(frozen=True)
class StabilityPolynomial:
    coeffs: np.ndarray = field(repr=False)
    scheme: str = ""
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        scale = np.max(np.abs(c))
        if scale == 0 or abs(c[0]) <= 1e-12 * scale:
            raise DegeneratePolynomialError(
                f"degenerate leading coefficient for {self.scheme} at {self.provenance}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class NormalizedCubic:
    """Besse cubic reduced to two complex numbers.

    f is a unimodular ratio; the monic cubic with the same roots as
    p~(z) is z^3 + f conj(g) z^2 + g z + f. (With the z^2 coefficient
    f conj(g), the boundary curve g(theta) below produces an exact
    double root at e^{i theta} for every unimodular f.)
    """

    f: complex
    g: complex

    def monic_coeffs(self) -> np.ndarray:
        return np.array([1.0, self.f * np.conj(self.g), self.g, self.f], dtype=complex)


@dataclass(frozen=True)
class ExactModeSpectrum:
    eigenvalues: tuple
    is_unstable: bool


def omega_exact(k: float, lambda_amp2: float) -> float:
    """Dispersion of the exact plane wave: omega = k^2 + lambda |a|^2."""
    return k * k + lambda_amp2


def exact_mode_eigenvalues(k: float, ell: float, lambda_amp2: float) -> ExactModeSpectrum:
    """Eigenvalues of the exact perturbation matrix G_ell, and the
    instability verdict ell^2 < -2 lambda |a|^2 (ell != 0)."""
    root = cmath.sqrt(ell * ell + 2.0 * lambda_amp2)
    lam_plus = (-2.0 * k + root) * ell
    lam_minus = (-2.0 * k - root) * ell
    unstable = ell != 0 and ell * ell < -2.0 * lambda_amp2
    return ExactModeSpectrum((lam_plus, lam_minus), bool(unstable))


def spatial_symbol(ctx: PlaneWaveContext, wavenumber) -> float:
    """tau times the Laplacian symbol at a wavenumber: tau k^2 in the
    continuous limit, (2 tau/h^2)(1 - cos k h) on a grid."""
    w = np.asarray(wavenumber, dtype=float)
    if ctx.h == 0:
        s = ctx.tau * w * w
    else:
        s = 2.0 * ctx.rho * (1.0 - np.cos(w * ctx.h))
    return s if s.ndim else float(s)


def omega_scheme(scheme: str, ctx: PlaneWaveContext, theta: float = 1.0,
                 d: int = 1) -> float:
    """Solve the scheme's dispersion relation for omega*tau on the
    principal branch (Fei in (-pi/2, pi/2), Besse in (-pi, pi), the
    theta scheme by the branch continuous in (q, K) through 0).

    d is accepted for symmetry with the polynomial builders; for the
    axis-aligned wavevectors used here it does not change the relation.
    """
    q = ctx.q
    s = spatial_symbol(ctx, ctx.wavenumber)
    if scheme == "fei":
        return math.atan(q + s)
    if scheme == "besse":
        return 2.0 * math.atan(0.5 * (q + s))
    if scheme == "modified":
        return _modified_omega(q, s, theta)
    raise ValueError(f"unknown scheme {scheme!r}")


def _modified_omega(q, s, theta):
    # sin x = s (theta cos x + 1 - theta) + q cos x, written as
    # sin x + B cos x = C and solved as R sin(x + phi) = C
    B = -(theta * s + q)
    C = (1.0 - theta) * s
    R = np.hypot(1.0, B)
    if np.any(np.abs(C) > R):
        raise DispersionError(
            f"no principal-branch solution: |{C}| > sqrt(1 + {B}^2)")
    return np.arcsin(C / R) - np.arctan2(B, 1.0)


def fei_polynomial(ctx: PlaneWaveContext, ell, discrete: bool | None = None) -> StabilityPolynomial:
    """Degree-4 characteristic polynomial of the Fei perturbation
    recurrence at mode ell. discrete=True uses the grid symbol (needs
    h > 0); the default follows ctx.h."""
    if discrete is None:
        discrete = ctx.h > 0
    if discrete and ctx.h == 0:
        raise ValueError("discrete polynomial needs h > 0")
    wt = omega_scheme("fei", ctx)
    E = cmath.exp(-1j * wt)
    q = ctx.q
    if discrete:
        sp = spatial_symbol(ctx, ctx.wavenumber + ell)
        sm = spatial_symbol(ctx, ctx.wavenumber - ell)
    else:
        K, L = ctx.K, ell * math.sqrt(ctx.tau)
        sp, sm = (K + L) ** 2, (K - L) ** 2
    cp = E * (1j - sp - q)
    cm = E * (1j - sm - q)
    b = 2.0 * q * math.cos(wt)
    coeffs = _two_level_quartic(cp, cm, b)
    prov = dict(scheme="fei", q=q, K=ctx.K, ell=ell, h=ctx.h, tau=ctx.tau,
                discrete=discrete)
    return StabilityPolynomial(coeffs, "fei", prov)


def _two_level_quartic(cp, cm, b):
    cc = np.conj
    return np.array([
        cp * cc(cm),
        -b * (cp + cc(cm)),
        cp * cm + cc(cp) * cc(cm),
        -b * (cm + cc(cp)),
        cm * cc(cp),
    ], dtype=complex)


def besse_polynomial(ctx: PlaneWaveContext, ell, d: int = 1):
    """(quartic, cubic p~, NormalizedCubic) for the Besse recurrence.

    The quartic is (z+1) p~(z), the characteristic polynomial of the
    4x4 one-step system; p~ is expanded from its determinant. The phase
    in c is e^{-i omega tau / 2}: the relaxation step advances the
    carrier by half-step phases, and only this phase reproduces the
    near-1 root asymptote and the exact k=0 stability threshold.
    """
    cp, cm, b = _besse_coeffs(ctx, ell, d)
    cc = np.conj
    a3 = cp * cc(cm)
    a2 = cp * cc(cm) + cp * cm + cc(cp) * cc(cm) - 2.0 * b * (cp + cc(cm))
    a1 = cc(cp) * cm + cp * cm + cc(cp) * cc(cm) - 2.0 * b * (cc(cp) + cm)
    a0 = cc(cp) * cm
    cubic_coeffs = np.array([a3, a2, a1, a0], dtype=complex)
    quartic_coeffs = np.convolve([1.0, 1.0], cubic_coeffs)
    prov = dict(scheme="besse", q=ctx.q, K=ctx.K, ell=ell, h=ctx.h, tau=ctx.tau, d=d)
    quartic = StabilityPolynomial(quartic_coeffs, "besse", prov)
    cubic = StabilityPolynomial(cubic_coeffs, "besse", prov)
    norm = NormalizedCubic(f=complex(a0 / a3), g=complex(a1 / a3))
    return quartic, cubic, norm


def _besse_coeffs(ctx: PlaneWaveContext, ell, d):
    wt = omega_scheme("besse", ctx)
    ph = cmath.exp(-0.5j * wt)
    q = ctx.q
    K, L = ctx.K, ell * math.sqrt(ctx.tau)
    cp = (2j - (K + L) ** 2 - d * q) * ph
    cm = (2j - (K - L) ** 2 - d * q) * ph
    b = 2.0 * q * math.cos(0.5 * wt)
    return cp, cm, b


def modified_polynomial(ctx: PlaneWaveContext, ell, theta: float,
                        gamma: float) -> StabilityPolynomial:
    """Degree-4 characteristic polynomial of the theta/gamma recurrence,
    expanded from det(M+ z^2 - M0 z - M-). Reduces to the continuous
    Fei polynomial coefficient-by-coefficient at theta = gamma = 1."""
    q = ctx.q
    wt = omega_scheme("modified", ctx, theta)
    E = cmath.exp(-1j * wt)
    sp = spatial_symbol(ctx, ctx.wavenumber + ell)
    sm = spatial_symbol(ctx, ctx.wavenumber - ell)
    cp = (1j - gamma * q - theta * sp) * E
    cm = (1j - gamma * q - theta * sm) * E
    dp = 2.0 * (1.0 - theta) * sp
    dm = 2.0 * (1.0 - theta) * sm
    b = 2.0 * q * math.cos(wt)
    coeffs = _modified_quartic(cp, cm, dp, dm, b, q, gamma)
    prov = dict(scheme="modified", q=q, K=ctx.K, ell=ell, h=ctx.h, tau=ctx.tau,
                theta=theta, gamma=gamma)
    return StabilityPolynomial(coeffs, "modified", prov)


def _modified_quartic(cp, cm, dp, dm, b, q, gamma):
    cc = np.conj
    g1 = 1.0 - gamma
    z4 = cp * cc(cm) - g1 * g1 * q * q
    z3 = gamma * (gamma - 1.0) * b * b - ((2 - gamma) * b + dp) * cc(cm) \
        - ((2 - gamma) * b + dm) * cp
    z2 = ((2 - gamma) * b * (dp + dm) + dp * dm + cp * cm + cc(cp) * cc(cm)
          + g1 * g1 * (2.0 * q * q - b * b) + 4.0 * g1 * b * b)
    z1 = gamma * (gamma - 1.0) * b * b - ((2 - gamma) * b + dp) * cm \
        - ((2 - gamma) * b + dm) * cc(cp)
    z0 = cc(cp) * cm - g1 * g1 * q * q
    return np.array([z4, z3, z2, z1, z0], dtype=complex)


def fei_spurious_asymptote(ell: float, lambda_amp2: float, tau: float) -> complex:
    """Leading-order parasitic root z* = -(1 + tau ell sqrt(2 lambda|a|^2 - ell^2))."""
    return -(1.0 + tau * ell * cmath.sqrt(2.0 * lambda_amp2 - ell * ell))


def growth_constant(lambda_amp2: float):
    """C = sqrt(2 lambda |a|^2 - 1); real at and above the k=0 threshold,
    complex below it."""
    c = cmath.sqrt(2.0 * lambda_amp2 - 1.0)
    return c.real if c.imag == 0 else c


def besse_asymptote(ell: float, lambda_amp2: float, tau: float):
    """Leading-order root pair z* = 1 +- tau ell sqrt(-2 lambda|a|^2 - ell^2)."""
    root = tau * ell * cmath.sqrt(-2.0 * lambda_amp2 - ell * ell)
    return (1.0 + root, 1.0 - root)


def besse_boundary(f: complex, theta: float) -> complex:
    """Boundary value g(theta) = e^{2 i theta} - 2 f e^{-i theta} at which
    the normalized cubic acquires a double root at e^{i theta}."""
    if abs(abs(f) - 1.0) > 1e-10:
        raise ValueError(f"f must be unimodular, got |f| = {abs(f)}")
    return cmath.exp(2j * theta) - 2.0 * f * cmath.exp(-1j * theta)


def necessary_condition(g: complex) -> bool:
    return abs(g) <= 3.0


def sufficient_condition(g: complex) -> bool:
    return abs(g) <= 1.0


# ---------------------------------------------------------------------------
# linearized-recurrence oracle


def one_step_matrix(scheme: str, ctx: PlaneWaveContext, ell,
                    theta: float = 1.0, gamma: float = 1.0, d: int = 1) -> np.ndarray:
    """4x4 one-step matrix of the scheme's linearized perturbation
    recurrence at mode ell (two-level schemes are companion-stacked)."""
    cc = np.conj
    if scheme == "fei":
        discrete = ctx.h > 0
        wt = omega_scheme("fei", ctx)
        E = cmath.exp(-1j * wt)
        q = ctx.q
        if discrete:
            sp = spatial_symbol(ctx, ctx.wavenumber + ell)
            sm = spatial_symbol(ctx, ctx.wavenumber - ell)
        else:
            K, L = ctx.K, ell * math.sqrt(ctx.tau)
            sp, sm = (K + L) ** 2, (K - L) ** 2
        cp = E * (1j - sp - q)
        cm = E * (1j - sm - q)
        b = 2.0 * q * math.cos(wt)
        A = np.diag([cp, cc(cm)])
        B = np.full((2, 2), b, dtype=complex)
        C = np.diag([cc(cp), cm])
        return _companion_stack(A, B, -C)
    if scheme == "besse":
        cp, cm, b = _besse_coeffs(ctx, ell, d)
        A = np.array([[cp, 0, -b, 0],
                      [0, cc(cm), 0, -b],
                      [0, 0, 1, 0],
                      [0, 0, 0, 1]], dtype=complex)
        B = np.array([[-cc(cp), 0, 0, 0],
                      [0, -cm, 0, 0],
                      [2, 2, -1, 0],
                      [2, 2, 0, -1]], dtype=complex)
        return np.linalg.solve(A, B)
    if scheme == "modified":
        q = ctx.q
        wt = omega_scheme("modified", ctx, theta)
        E = cmath.exp(-1j * wt)
        sp = spatial_symbol(ctx, ctx.wavenumber + ell)
        sm = spatial_symbol(ctx, ctx.wavenumber - ell)
        cp = (1j - gamma * q - theta * sp) * E
        cm = (1j - gamma * q - theta * sm) * E
        dp = 2.0 * (1.0 - theta) * sp
        dm = 2.0 * (1.0 - theta) * sm
        b = 2.0 * q * math.cos(wt)
        gq = (1.0 - gamma) * q
        Mp = np.array([[cp, -gq / E], [-gq * E, cc(cm)]], dtype=complex)
        M0 = np.array([[dp + (2 - gamma) * b, gamma * b],
                       [gamma * b, dm + (2 - gamma) * b]], dtype=complex)
        Mm = np.array([[-cc(cp), gq * E], [gq / E, -cm]], dtype=complex)
        return _companion_stack(Mp, M0, Mm)
    raise ValueError(f"unknown scheme {scheme!r}")


def _companion_stack(A, B, C):
    """One-step matrix of A X^{n+1} = B X^n + C X^{n-1}."""
    try:
        top = np.hstack([np.linalg.solve(A, B), np.linalg.solve(A, C)])
    except np.linalg.LinAlgError as e:
        raise DegeneratePolynomialError(f"recurrence matrix singular: {e}") from e
    bottom = np.hstack([np.eye(2), np.zeros((2, 2))])
    return np.vstack([top, bottom])


def recurrence_oracle(scheme: str, ctx: PlaneWaveContext, ell,
                      theta: float = 1.0, gamma: float = 1.0,
                      n_steps: int = 8192, d: int = 1, seed: int = 0) -> float:
    """Per-step growth rate of the exact linearized recurrence, measured
    by iterating from random initial data and fitting the slope of
    log ||X^n|| over the last quarter of the run.

    The iteration is strided: T^s is applied between samples (s even, so
    period-2 parasitic alternation cancels exactly), with per-sample
    renormalization and growth accumulated in log space.
    """
    if n_steps < 100:
        raise ValueError("need n_steps >= 100")
    T = one_step_matrix(scheme, ctx, ell, theta, gamma, d)
    s = max(2, (n_steps // 1024) & ~1)
    n_samples = n_steps // s
    Ts = np.linalg.matrix_power(T, s)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    x /= np.linalg.norm(x)
    logs = np.empty(n_samples + 1)
    logs[0] = 0.0
    acc = 0.0
    for j in range(1, n_samples + 1):
        x = Ts @ x
        nrm = np.linalg.norm(x)
        if nrm == 0 or not np.isfinite(nrm):
            raise FloatingPointError("recurrence iterate degenerated")
        acc += math.log(nrm)
        x /= nrm
        logs[j] = acc
    start = (3 * n_samples) // 4
    idx = np.arange(start, n_samples + 1, dtype=float) * s
    slope = np.polyfit(idx, logs[start:], 1)[0]
    return float(math.exp(slope))


# ---------------------------------------------------------------------------
# region scans


@dataclass
class ScanResult:
    scheme: str
    K: float
    q_grid: np.ndarray
    L_grid: np.ndarray
    max_modulus: np.ndarray   # shape (len(q), len(L))
    tol: float
    meta: dict


@dataclass
class RegionResult:
    scheme: str
    q_grid: np.ndarray
    K_grid: np.ndarray
    stable: np.ndarray        # boolean, shape (len(q), len(K))
    max_modulus: np.ndarray   # max over the scanned L per cell
    L_spec: tuple
    tol: float
    meta: dict


def _scan_coeffs(scheme, q, K, L, theta, gamma):
    """Vectorized continuous-space polynomial coefficients.

    q broadcasts against L (typically q is a column, L a row); K is a
    scalar. Returns (coeffs stacked on the last axis, is_cubic).
    """
    cc = np.conj
    q = np.asarray(q, dtype=float)
    L = np.asarray(L, dtype=float)
    if scheme == "fei":
        wt = np.arctan(q + K * K)
        E = np.exp(-1j * wt)
        cp = E * (1j - (K + L) ** 2 - q)
        cm = E * (1j - (K - L) ** 2 - q)
        b = 2.0 * q * np.cos(wt)
        coeffs = np.stack(np.broadcast_arrays(
            cp * cc(cm),
            -b * (cp + cc(cm)),
            cp * cm + cc(cp) * cc(cm),
            -b * (cm + cc(cp)),
            cm * cc(cp)), axis=-1)
        return coeffs, False
    if scheme == "besse":
        wt = 2.0 * np.arctan(0.5 * (q + K * K))
        ph = np.exp(-0.5j * wt)
        cp = (2j - (K + L) ** 2 - q) * ph
        cm = (2j - (K - L) ** 2 - q) * ph
        b = 2.0 * q * np.cos(0.5 * wt)
        coeffs = np.stack(np.broadcast_arrays(
            cp * cc(cm),
            cp * cc(cm) + cp * cm + cc(cp) * cc(cm) - 2 * b * (cp + cc(cm)),
            cc(cp) * cm + cp * cm + cc(cp) * cc(cm) - 2 * b * (cc(cp) + cm),
            cc(cp) * cm), axis=-1)
        return coeffs, True
    if scheme == "modified":
        sq = theta * K * K + q
        B = -sq
        C = (1.0 - theta) * K * K
        R = np.hypot(1.0, B)
        bad = np.abs(C) > R
        Bsafe = np.where(bad, 1.0, B)
        wt = np.arcsin(np.where(bad, 0.0, C) / np.hypot(1.0, Bsafe)) - np.arctan2(Bsafe, 1.0)
        E = np.exp(-1j * wt)
        sp = (K + L) ** 2
        sm = (K - L) ** 2
        cp = (1j - gamma * q - theta * sp) * E
        cm = (1j - gamma * q - theta * sm) * E
        dp = 2.0 * (1.0 - theta) * sp
        dm = 2.0 * (1.0 - theta) * sm
        b = 2.0 * q * np.cos(wt)
        g1 = 1.0 - gamma
        coeffs = np.stack(np.broadcast_arrays(
            cp * cc(cm) - g1 * g1 * q * q,
            gamma * (gamma - 1) * b * b - ((2 - gamma) * b + dp) * cc(cm)
            - ((2 - gamma) * b + dm) * cp,
            (2 - gamma) * b * (dp + dm) + dp * dm + cp * cm + cc(cp) * cc(cm)
            + g1 * g1 * (2 * q * q - b * b) + 4 * g1 * b * b,
            gamma * (gamma - 1) * b * b - ((2 - gamma) * b + dp) * cm
            - ((2 - gamma) * b + dm) * cc(cp),
            cc(cp) * cm - g1 * g1 * q * q), axis=-1)
        coeffs = np.where(np.broadcast_to(bad[..., None], coeffs.shape), np.nan, coeffs)
        return coeffs, False
    raise ValueError(f"unknown scheme {scheme!r}")


def _schur_strictly_inside(c):
    """Schur-Cohn test: all roots strictly inside the unit circle,
    elementwise over rows of descending coefficients."""
    scale = np.max(np.abs(c), axis=-1, keepdims=True)
    cur = c / np.where(scale > 0, scale, 1.0)
    ok = np.ones(c.shape[:-1], dtype=bool)
    for _ in range(c.shape[-1] - 1):
        lead, trail = cur[..., 0], cur[..., -1]
        ok &= np.abs(lead) ** 2 - np.abs(trail) ** 2 > 0
        if cur.shape[-1] == 2:
            break
        # conj(lead) p(z) - trail p~(z) drops the constant term; shifting
        # out that zero reduces the degree by one
        reduced = (np.conj(lead)[..., None] * cur
                   - trail[..., None] * np.conj(cur[..., ::-1]))
        cur = reduced[..., :-1]
    return ok


def _on_circle_certificate(flat):
    """True where all roots are certified to lie on the unit circle.

    The scan polynomials are self-inversive, so by Cohn's theorem their
    roots all sit on the circle exactly when the derivative's roots stay
    in the closed unit disk.  A strict Schur-Cohn pass on the derivative
    certifies the generic stable case; boundary rows (multiple roots on
    the circle) simply fall through to the full solver.
    """
    n = flat.shape[-1] - 1
    deriv = flat[..., :-1] * np.arange(n, 0, -1)
    return _schur_strictly_inside(deriv)


def _max_modulus_grid(scheme, q, K, L, theta, gamma, chunk=2_000_000):
    """Max root modulus over a broadcast (q, L) grid at fixed K; NaN for
    degenerate or dispersion-failed entries. Returns (grid, counts)."""
    coeffs, is_cubic = _scan_coeffs(scheme, q, K, L, theta, gamma)
    flat = coeffs.reshape(-1, coeffs.shape[-1])
    disp_bad = np.any(np.isnan(flat), axis=-1)
    out = np.full(flat.shape[0], np.nan)
    degen = 0
    good = ~disp_bad
    certified = np.zeros(flat.shape[0], dtype=bool)
    certified[good] = _on_circle_certificate(flat[good])
    out[certified] = 1.0
    idx = np.flatnonzero(good & ~certified)
    for lo in range(0, idx.size, chunk):
        sel = idx[lo:lo + chunk]
        mods, dg = batch_max_modulus(flat[sel])
        out[sel] = mods
        degen += int(np.count_nonzero(dg))
    if is_cubic:
        # the full quartic carries the extra exact root -1
        out = np.maximum(out, 1.0)
    return out.reshape(coeffs.shape[:-1]), {
        "degenerate": degen, "dispersion_failures": int(np.count_nonzero(disp_bad))}


def scan_qL(scheme: str, K: float, q_grid, L_grid, theta: float = 1.0,
            gamma: float = 1.0, tol: float = SCAN_TOL) -> ScanResult:
    """Matrix of max root moduli over (q, L) at fixed K, continuous-space
    polynomials."""
    q = np.asarray(q_grid, dtype=float)
    L = np.asarray(L_grid, dtype=float)
    grid, counts = _max_modulus_grid(scheme, q[:, None], K, L[None, :], theta, gamma)
    meta = dict(counts)
    meta.update(scheme=scheme, K=K, theta=theta, gamma=gamma)
    return ScanResult(scheme, K, q, L, grid, tol, meta)


def scan_qK(scheme: str, q_grid, K_grid, L_spec=None, theta: float = 1.0,
            gamma: float = 1.0, tol: float = SCAN_TOL) -> RegionResult:
    """Boolean stability matrix over (q, K): a cell is stable iff the max
    root modulus stays <= 1 + tol over the scanned L range, with local
    refinement around near-critical interior maxima."""
    if L_spec is None:
        L_spec = (-10.0, 10.0, 2001)
    lmin, lmax, nl = L_spec
    q = np.asarray(q_grid, dtype=float)
    K_arr = np.asarray(K_grid, dtype=float)
    nl = int(nl)
    # modulus spectra are even in L, so a symmetric grid only needs its
    # nonnegative half
    halved = lmin == -lmax and nl % 2 == 1 and nl >= 3
    L = np.linspace(0.0, lmax, (nl + 1) // 2) if halved else np.linspace(
        lmin, lmax, nl)
    max_mod = np.empty((q.size, K_arr.size))
    counters = {"degenerate": 0, "dispersion_failures": 0}
    for jK, K in enumerate(K_arr):
        grid, counts = _max_modulus_grid(scheme, q[:, None], float(K), L[None, :],
                                         theta, gamma)
        for key in counters:
            counters[key] += counts[key]
        if halved:
            # mirror one column so L=0 stays an interior point for the
            # local-max refinement
            grid_r = np.concatenate([grid[:, 1:2], grid], axis=1)
            L_r = np.concatenate([[-L[1]], L])
        else:
            grid_r, L_r = grid, L
        col = np.nanmax(np.where(np.isnan(grid_r), -np.inf, grid_r), axis=1)
        col = _refine_column(scheme, float(K), q, L_r, grid_r, col, theta, gamma)
        max_mod[:, jK] = col
    stable = max_mod <= 1.0 + tol
    meta = dict(counters)
    meta.update(scheme=scheme, theta=theta, gamma=gamma, L_spec=tuple(L_spec))
    return RegionResult(scheme, q, K_arr, stable, max_mod, tuple(L_spec), tol, meta)


def _refine_column(scheme, K, q, L, grid, col, theta, gamma, npts=21):
    """Subdivide around interior local maxima of |z|max(L) that poke just
    above the unit circle, so instability peaks clipped by the coarse L
    sampling are measured accurately near onset."""
    filled = np.where(np.isnan(grid), -np.inf, grid)
    interior = filled[:, 1:-1]
    is_max = (interior >= filled[:, :-2]) & (interior >= filled[:, 2:])
    # stable cells evaluate to exactly 1.0, so anything strictly above
    # the circle is a genuine crossing; far above it needs no sharpening
    near = (interior > 1.0 + 1e-11) & (interior <= 1.0 + 1e-3)
    qi, lj = np.nonzero(is_max & near)
    if qi.size == 0:
        return col
    lj = lj + 1
    lo = L[np.maximum(lj - 1, 0)]
    hi = L[np.minimum(lj + 1, L.size - 1)]
    fine = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, npts)[None, :]
    sub, _ = _max_modulus_grid(scheme, q[qi][:, None], K, fine, theta, gamma)
    sub = np.where(np.isnan(sub), -np.inf, sub)
    best = sub.max(axis=1)
    np.maximum.at(col, qi, best)
    return col
