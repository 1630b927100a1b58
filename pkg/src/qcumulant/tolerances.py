"""Numerical tolerances used throughout the package.

Every check that compares floating point values reads its threshold from
:data:`TOL`, so tests and the CLI share a single set of knobs.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    trace: float = 1e-12
    psd: float = 1e-10
    norm: float = 1e-12
    trace_preserving: float = 1e-10
    trace_match: float = 1e-10
    spectrum: float = 1e-9
    condition: float = 1e-9
    jacobi_offdiag: float = 1e-13


TOL = Tolerances()
