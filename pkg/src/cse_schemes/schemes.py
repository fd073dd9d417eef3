"""Time steppers: Fei, Besse relaxation, and the two-parameter variant.

All three integrate i u_t + u_xx = lambda |u|^2 u on the periodic grid
with the same 3-point Laplacian, so comparisons isolate the time
discretisation. Each step is one banded periodic linear solve; the
solve is verified a posteriori against the stencil operator (assembled
independently of the banded form) to a relative residual of 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import ComplexField, PeriodicGrid
from .linsolve import solve_banded_periodic

RESIDUAL_TOL = 1e-12


class SolverError(RuntimeError):
    """Linear solve failed or missed the residual contract."""

    def __init__(self, scheme, step_index, detail, theta=None, gamma=None):
        self.scheme = scheme
        self.step_index = step_index
        self.theta = theta
        self.gamma = gamma
        msg = f"{scheme} step {step_index}: {detail}"
        if theta is not None:
            msg += f" (theta={theta}, gamma={gamma})"
        super().__init__(msg)


class ReferenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SchemeParams:
    tau: float
    lam: float
    theta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")


@dataclass(frozen=True)
class TwoStepState:
    """Two-level history (U^{n-1}, U^n) for the leapfrog-in-time schemes."""

    prev: ComplexField
    curr: ComplexField
    step_index: int
    time: float

    def __post_init__(self):
        if self.prev.grid != self.curr.grid:
            raise ValueError("prev and curr must share one grid")


@dataclass(frozen=True)
class BesseState:
    """Solution level U^n together with the relaxation variable phi^{n-1/2}."""

    curr: ComplexField
    phi: np.ndarray = field(repr=False)
    step_index: int = 0

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.shape != (self.curr.grid.num_points,):
            raise ValueError("phi length must match the grid")
        phi = phi.copy()
        phi.flags.writeable = False
        object.__setattr__(self, "phi", phi)


def laplacian(values: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) / h**2


def _solve_tridiag_periodic(diag, off, rhs):
    """Constant off-diagonal tridiagonal + periodic corners."""
    n = diag.size
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = off
    ab[1, :] = diag
    ab[2, :-1] = off
    corners = [(0, n - 1, off), (n - 1, 0, off)]
    return solve_banded_periodic((1, 1), ab, corners, rhs)


def _check_residual(scheme, step_index, resid, rhs, **kw):
    scale = max(float(np.linalg.norm(rhs)), 1e-300)
    rel = float(np.linalg.norm(resid)) / scale
    if not rel <= RESIDUAL_TOL:
        raise SolverError(scheme, step_index, f"residual {rel:.3e} exceeds {RESIDUAL_TOL}", **kw)
    return rel


def fei_step(state: TwoStepState, p: SchemeParams, stats: dict | None = None) -> ComplexField:
    """Advance U^{n+1} from (U^{n-1}, U^n):

        i (V - P)/(2 tau) + Lap (V + P)/2 = lambda |C|^2 (V + P)/2
    """
    grid = state.curr.grid
    h = grid.spacing
    P, C = state.prev.values, state.curr.values
    w = 0.5 * p.lam * np.abs(C) ** 2
    alpha = 0.5j / p.tau
    off = 0.5 / h**2
    rhs = alpha * P - 0.5 * laplacian(P, h) + w * P
    try:
        V = _solve_tridiag_periodic(alpha - 2 * off - w, off, rhs)
    except np.linalg.LinAlgError as e:
        raise SolverError("fei", state.step_index, f"singular system: {e}") from e
    resid = alpha * V + 0.5 * laplacian(V, h) - w * V - rhs
    rel = _check_residual("fei", state.step_index, resid, rhs)
    if stats is not None:
        stats["max_rel_residual"] = max(stats.get("max_rel_residual", 0.0), rel)
    return ComplexField(grid, V)


def besse_step(state: BesseState, p: SchemeParams, stats: dict | None = None) -> BesseState:
    """Relaxation step: phi^{n+1/2} = 2|U^n|^2 - phi^{n-1/2} first, then

        i (V - C)/tau + Lap (V + C)/2 = lambda phi^{n+1/2} (V + C)/2
    """
    grid = state.curr.grid
    h = grid.spacing
    C = state.curr.values
    phi_plus = 2.0 * np.abs(C) ** 2 - state.phi
    w = 0.5 * p.lam * phi_plus
    alpha = 1j / p.tau
    off = 0.5 / h**2
    rhs = alpha * C - 0.5 * laplacian(C, h) + w * C
    try:
        V = _solve_tridiag_periodic(alpha - 2 * off - w, off, rhs)
    except np.linalg.LinAlgError as e:
        raise SolverError("besse", state.step_index, f"singular system: {e}") from e
    resid = alpha * V + 0.5 * laplacian(V, h) - w * V - rhs
    rel = _check_residual("besse", state.step_index, resid, rhs)
    if stats is not None:
        stats["max_rel_residual"] = max(stats.get("max_rel_residual", 0.0), rel)
    return BesseState(ComplexField(grid, V), phi_plus, state.step_index + 1)


def modified_step(state: TwoStepState, p: SchemeParams, stats: dict | None = None) -> ComplexField:
    """theta/gamma stepper:

        i (V - P)/(2 tau) + Lap(theta/2 V + (1-theta) C + theta/2 P)
            = (lambda gamma / 2) |C|^2 (V + P)
            + (lambda (1-gamma) / 2) C^2 (conj V + conj P)

    gamma = 1 is complex-linear and solved like fei_step; gamma != 1
    couples V and conj V, so the step is assembled as a real system in
    (Re V, Im V), interleaved, bandwidth 2, periodic corners.
    """
    grid = state.curr.grid
    h = grid.spacing
    th, ga = p.theta, p.gamma
    P, C = state.prev.values, state.curr.values
    alpha = 0.5j / p.tau
    beta = 0.5 * th
    D = -0.5 * p.lam * ga * np.abs(C) ** 2  # coefficient of V
    S = -0.5 * p.lam * (1 - ga) * C**2      # coefficient of conj(V)
    rhs = (alpha * P - beta * laplacian(P, h) - D * P - S * np.conj(P)
           - (1 - th) * laplacian(C, h))

    if ga == 1.0:
        off = beta / h**2
        try:
            V = _solve_tridiag_periodic(alpha - 2 * off + D, off, rhs)
        except np.linalg.LinAlgError as e:
            raise SolverError("modified", state.step_index, f"singular system: {e}",
                              theta=th, gamma=ga) from e
    else:
        V = _modified_real_solve(state, p, rhs)

    resid = alpha * V + beta * laplacian(V, h) + D * V + S * np.conj(V) - rhs
    rel = _check_residual("modified", state.step_index, resid, rhs, theta=th, gamma=ga)
    if stats is not None:
        stats["max_rel_residual"] = max(stats.get("max_rel_residual", 0.0), rel)
    return ComplexField(grid, V)


def _modified_real_solve(state: TwoStepState, p: SchemeParams, rhs: np.ndarray) -> np.ndarray:
    M = state.curr.grid.num_points
    h = state.curr.grid.spacing
    C = state.curr.values
    beta = 0.5 * p.theta
    D = -0.5 * p.lam * p.gamma * np.abs(C) ** 2
    S = -0.5 * p.lam * (1 - p.gamma) * C**2
    Sr, Si = S.real, S.imag
    half_inv_tau = 0.5 / p.tau
    lap_off = beta / h**2

    n = 2 * M
    ab = np.zeros((5, n))
    ab[0, 2:] = lap_off                       # A[i, i+2]: Laplacian, both components
    ab[1, 1::2] = -half_inv_tau + Si          # A[2m, 2m+1]: Re eq <- Im V
    ab[2, 0::2] = -2 * lap_off + D + Sr       # Re diagonal
    ab[2, 1::2] = -2 * lap_off + D - Sr       # Im diagonal
    ab[3, 0::2] = half_inv_tau + Si           # A[2m+1, 2m]: Im eq <- Re V
    ab[4, :-2] = lap_off
    corners = [(0, n - 2, lap_off), (1, n - 1, lap_off),
               (n - 2, 0, lap_off), (n - 1, 1, lap_off)]

    b = np.empty(n)
    b[0::2], b[1::2] = rhs.real, rhs.imag
    try:
        x = solve_banded_periodic((2, 2), ab, corners, b)
    except np.linalg.LinAlgError as e:
        raise SolverError("modified", state.step_index, f"singular system: {e}",
                          theta=p.theta, gamma=p.gamma) from e
    return x[0::2] + 1j * x[1::2]


def startup(u0: ComplexField, p: SchemeParams, scheme: str,
            method: str = "besse", omega: float | None = None):
    """Initial state for a scheme.

    Besse needs no auxiliary level: (U^0, phi^{-1/2}) = (u0, |u0|^2).
    The two-step schemes need U^1; by default it comes from one Besse
    step (second order, linearly implicit). method="exact" instead sets
    U^1 = e^{-i omega tau} u0 for a plane wave with known omega.
    """
    if scheme == "besse":
        return BesseState(u0, np.abs(u0.values) ** 2, 0)
    if scheme not in ("fei", "modified"):
        raise ValueError(f"unknown scheme {scheme!r}")
    if method == "besse":
        u1 = besse_step(BesseState(u0, np.abs(u0.values) ** 2, 0), p).curr
    elif method == "exact":
        if omega is None:
            raise ValueError("exact startup needs omega")
        u1 = ComplexField(u0.grid, u0.values * np.exp(-1j * omega * p.tau))
    else:
        raise ValueError(f"unknown startup method {method!r}")
    return TwoStepState(prev=u0, curr=u1, step_index=1, time=p.tau)


@dataclass
class Trajectory:
    scheme: str
    params: SchemeParams
    steps: list
    times: list
    fields: list
    tail: tuple          # final two consecutive levels (U^{N-1}, U^N)
    meta: dict


def run(u0: ComplexField, p: SchemeParams, scheme: str, t_end: float,
        callbacks=(), record_stride: int = 1,
        startup_method: str = "besse", startup_omega: float | None = None) -> Trajectory:
    """Advance floor(t_end/tau) steps, recording snapshots every
    record_stride steps (plus step 0 and the final step) and invoking
    callbacks as callback(step_index, time, old_state, new_state).
    """
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")
    exact = t_end / p.tau
    n_steps = int(math.floor(exact + 1e-9))
    meta = {"scheme": scheme, "startup": None, "warnings": [], "n_steps": n_steps}
    if abs(exact - n_steps) > 1e-9:
        meta["warnings"].append(
            f"t_end={t_end} is not an integer multiple of tau={p.tau}; truncated to {n_steps} steps")
    stats = {}

    steps, times, fields = [0], [0.0], [u0]
    prev_level = None   # U^{n-1} as a ComplexField, for the tail
    if scheme == "besse":
        state = BesseState(u0, np.abs(u0.values) ** 2, 0)
        meta["startup"] = "paper"
        stepper = lambda s: besse_step(s, p, stats)
    elif scheme in ("fei", "modified"):
        do_step = fei_step if scheme == "fei" else modified_step
        meta["startup"] = startup_method
        if n_steps == 0:
            state = None
        else:
            state = startup(u0, p, scheme, method=startup_method, omega=startup_omega)
            prev_level = u0
            if 1 % record_stride == 0 or n_steps == 1:
                placeholder = TwoStepState(prev=u0, curr=u0, step_index=0, time=0.0)
                for cb in callbacks:
                    cb(1, p.tau, placeholder, state)
                steps.append(1)
                times.append(p.tau)
                fields.append(state.curr)

        def stepper(s):
            new = do_step(s, p, stats)
            return TwoStepState(prev=s.curr, curr=new,
                                step_index=s.step_index + 1,
                                time=(s.step_index + 1) * p.tau)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    level = lambda s: s.curr
    while state is not None and state.step_index < n_steps:
        old = state
        state = stepper(state)
        n, t = state.step_index, state.step_index * p.tau
        prev_level = level(old)
        if n % record_stride == 0 or n == n_steps:
            for cb in callbacks:
                cb(n, t, old, state)
            if steps[-1] != n:
                steps.append(n)
                times.append(t)
                fields.append(level(state))

    if state is None or n_steps == 0:
        tail = (u0, u0)
    else:
        tail = (prev_level if prev_level is not None else u0, level(state))
    meta.update(stats)
    return Trajectory(scheme, p, steps, times, fields, tail, meta)


@dataclass
class ReferenceResult:
    field: ComplexField
    method: str
    tau: float
    n_steps: int
    error_estimate: float


def reference_run(u0: ComplexField, lam: float, t_end: float, accuracy: float,
                  max_doublings: int = 16) -> ReferenceResult:
    """High-accuracy solve by tau-halving a Besse run until successive
    answers differ by < accuracy/4 in sup norm.

    Spatial resolution is inherited from u0's grid; the result converges
    to the semi-discrete (exact-in-time) solution on that grid, which is
    what temporal convergence studies need.
    """
    if t_end == 0:
        return ReferenceResult(u0, "besse", 0.0, 0, 0.0)
    n = max(16, int(math.ceil(t_end / 0.01)))
    prev_final = None
    for _ in range(max_doublings):
        p = SchemeParams(tau=t_end / n, lam=lam)
        state = BesseState(u0, np.abs(u0.values) ** 2, 0)
        for _ in range(n):
            state = besse_step(state, p)
        final = state.curr
        if prev_final is not None:
            diff = float(np.max(np.abs(final.values - prev_final.values)))
            if diff < accuracy / 4:
                # second order in tau: remaining error about diff/3
                return ReferenceResult(final, "besse", p.tau, n, diff / 3)
        prev_final = final
        n *= 2
    raise ReferenceError(
        f"reference run did not reach accuracy {accuracy} within {max_doublings} halvings")
