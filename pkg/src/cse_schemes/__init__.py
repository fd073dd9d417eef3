"""Linearly implicit conservative schemes for the cubic Schrodinger
equation, with plane-wave stability analysis tooling."""

from .conservation import (InvariantRecorder, InvariantSample, besse_density,
                           besse_energy, fei_density, fei_energy, modified_energy)
from .grid import (ComplexField, PeriodicGrid, PlaneWaveContext, extract_mode,
                   norms, sample_plane_wave)
from .polyroots import (DegeneratePolynomialError, RootReport, batch_max_modulus,
                        batch_roots, find_roots, horner)
from .schemes import (BesseState, ReferenceError, ReferenceResult, SchemeParams,
                      SolverError, Trajectory, TwoStepState, besse_step, fei_step,
                      laplacian, modified_step, reference_run, run, startup)
from .stability import (DispersionError, ExactModeSpectrum, NormalizedCubic,
                        PerturbationMode, RegionResult, ScanResult,
                        StabilityPolynomial, besse_asymptote, besse_boundary,
                        besse_polynomial, exact_mode_eigenvalues,
                        fei_polynomial, fei_spurious_asymptote, growth_constant,
                        modified_polynomial, necessary_condition, omega_exact,
                        omega_scheme, one_step_matrix, recurrence_oracle,
                        scan_qK, scan_qL, spatial_symbol, sufficient_condition)

__version__ = "0.1.0"

__all__ = [
    "BesseState", "ComplexField", "DegeneratePolynomialError", "DispersionError",
    "ExactModeSpectrum", "InvariantRecorder", "InvariantSample", "NormalizedCubic",
    "PeriodicGrid", "PerturbationMode", "PlaneWaveContext", "ReferenceError",
    "ReferenceResult", "RegionResult", "RootReport", "ScanResult", "SchemeParams",
    "SolverError", "StabilityPolynomial", "Trajectory", "TwoStepState",
    "batch_max_modulus", "batch_roots", "besse_asymptote", "besse_boundary",
    "besse_density", "besse_energy", "besse_polynomial", "besse_step",
    "exact_mode_eigenvalues", "extract_mode", "fei_density", "fei_energy",
    "fei_polynomial", "fei_spurious_asymptote", "fei_step", "find_roots",
    "growth_constant", "horner", "laplacian", "modified_energy",
    "modified_polynomial", "modified_step", "necessary_condition", "norms",
    "omega_exact", "omega_scheme", "one_step_matrix", "recurrence_oracle",
    "reference_run", "run", "sample_plane_wave", "scan_qK", "scan_qL",
    "spatial_symbol", "startup", "sufficient_condition",
]
