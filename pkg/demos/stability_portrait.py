"""
Plane-wave stability portraits from polynomial root scans
=========================================================

A plane wave a e^{i(kx - wt)} stays a solution of each scheme, and a
sideband perturbation at offset ell evolves by a linear recurrence whose
characteristic polynomial is self-reciprocal: the mode is neutrally
stable exactly when every root sits on the unit circle. Scanning the
max root modulus over the dimensionless parameters q = lambda tau |a|^2
and L = ell sqrt(tau) draws the stability region of the scheme at a
glance; the exact equation is unstable precisely for 0 < L^2 < -2q.
"""

import math

import numpy as np

from cse_schemes.grid import PlaneWaveContext
from cse_schemes.polyroots import find_roots
from cse_schemes.stability import fei_polynomial, scan_qL

# ---------------------------------------------------------------------------
# Besse at K=0 reproduces the exact focusing instability wedge

q = np.linspace(-1.0, 0.4, 29)
L = np.linspace(0.0, 2.0, 41)
region = scan_qL("besse", 0.0, q, L)
unstable = region.max_modulus > 1 + 1e-6

print("Besse, K=0: '#' unstable, '.' stable, '|' the exact wedge L^2 = -2q")
print(f"{'q':>7}  L = 0 .. 2")
for i, qi in enumerate(q[::2]):
    row = unstable[2 * i]
    edge = math.sqrt(-2 * qi) if qi < 0 else None
    cells = []
    for j, Lj in enumerate(L):
        mark = "#" if row[j] else "."
        if edge is not None and abs(Lj - edge) < (L[1] - L[0]) / 2:
            mark = "|"
        cells.append(mark)
    print(f"{qi:>7.2f}  {''.join(cells)}")

# ---------------------------------------------------------------------------
# Fei is unstable even in the defocusing half-plane: bisect its onset

def fei_is_unstable(lam_a2):
    ctx = PlaneWaveContext(amp=1.0, wavenumber=0.0, lam=lam_a2, tau=1e-2)
    return find_roots(fei_polynomial(ctx, 1.0)).max_modulus > 1 + 1e-9

lo, hi = 0.1, 1.0
for _ in range(30):
    mid = 0.5 * (lo + hi)
    lo, hi = (lo, mid) if fei_is_unstable(mid) else (mid, hi)
print(f"\nFei onset for mode ell=1 at k=0: lambda|a|^2 = {0.5 * (lo + hi):.6f}")
print("so any defocusing wave with lambda|a|^2 above one half feeds the")
print("parasitic mode, which is what wrecks the run in the first demo.")
