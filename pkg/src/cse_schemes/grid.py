"""Periodic grid, complex field storage, and plane-wave sampling.

Everything downstream (steppers, invariants, diagnostics) works on a
uniform periodic 1-D grid of M points on [0, length). The default length
is 2*pi so integer wavenumbers are exactly periodic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid x_m = m*h, m = 0..M-1, h = length/M."""

    num_points: int
    length: float = TWO_PI

    def __post_init__(self):
        if self.num_points < 4:
            raise ValueError(f"need at least 4 grid points, got {self.num_points}")
        if not self.length > 0:
            raise ValueError(f"grid length must be positive, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / self.num_points

    @property
    def points(self) -> np.ndarray:
        return self.spacing * np.arange(self.num_points)


@dataclass(frozen=True)
class ComplexField:
    """One time level of the solution: M complex samples on a grid.

    Values are copied in and frozen, so fields can be shared freely.
    """

    grid: PeriodicGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.num_points,):
            raise ValueError(
                f"values shape {v.shape} does not match grid M={self.grid.num_points}"
            )
        if not np.all(np.isfinite(v.view(float))):
            raise ValueError("field contains non-finite entries")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class PlaneWaveContext:
    """Carrier-wave parameters and their dimensionless combinations.

    h = 0 encodes the continuous-space limit; rho is undefined there.
    The wavenumber is real-valued: the analysis layer sweeps arbitrary K,
    while grid-level sampling separately insists on integer k.
    """

    amp: float
    wavenumber: float
    lam: float
    tau: float
    h: float = 0.0

    def __post_init__(self):
        if self.amp < 0:
            raise ValueError("amplitude modulus must be nonnegative")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.h < 0:
            raise ValueError("h must be nonnegative (0 = continuous space)")

    @property
    def q(self) -> float:
        return self.lam * self.tau * self.amp**2

    @property
    def K(self) -> float:
        return self.wavenumber * math.sqrt(self.tau)

    @property
    def rho(self) -> float:
        if self.h == 0:
            raise ValueError("mesh ratio rho is undefined in the continuous-space limit")
        return self.tau / self.h**2


def sample_plane_wave(grid: PeriodicGrid, amp: complex, k: int, omega: float,
                      t: float) -> ComplexField:
    """Sample a*exp(i(k*x - omega*t)) on the grid.

    k must be an integer or the wave would break periodicity.
    """
    if k != int(k):
        raise ValueError(f"plane-wave wavenumber must be an integer, got {k}")
    x = grid.points
    return ComplexField(grid, amp * np.exp(1j * (int(k) * x - omega * t)))


def extract_mode(field: ComplexField, k: int) -> complex:
    """Discrete Fourier coefficient (1/M) sum_m U_m e^{-i k x_m}.

    Rejects |k| >= M/2 (aliased).
    """
    M = field.grid.num_points
    if abs(k) >= M / 2:
        raise ValueError(f"mode {k} is aliased on an M={M} grid")
    # fft computes sum U_m e^{-2*pi*i*m*j/M}; with x_m = m*length/M the
    # requested sum matches bin k only when length = 2*pi, so do it directly.
    x = field.grid.points
    return complex(np.sum(field.values * np.exp(-1j * k * x)) / M)


def norms(field: ComplexField) -> tuple[float, float]:
    """(sup norm, L2 norm sqrt(h*sum|U|^2))."""
    a = np.abs(field.values)
    return float(a.max()), float(math.sqrt(field.grid.spacing * np.sum(a**2)))
