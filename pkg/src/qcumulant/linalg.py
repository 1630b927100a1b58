"""Cyclic Jacobi eigenvalue solver for complex Hermitian matrices."""

from __future__ import annotations

import numpy as np

from .tolerances import TOL

MAX_SWEEPS = 100


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0)))


def jacobi_eigvalsh(h: np.ndarray, rel_tol: float = TOL.jacobi_offdiag) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps over all ``(p, q)`` pairs until the off-diagonal Frobenius norm
    falls below ``rel_tol * ||h||_F``. Returns eigenvalues in descending order.
    """
    a = np.array(h, dtype=complex, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    if n == 1:
        return np.array([a[0, 0].real])
    a = 0.5 * (a + a.conj().T)
    scale = np.linalg.norm(a)
    threshold = rel_tol * scale
    # entries this small cannot affect convergence; rotating them risks underflow
    negligible = 1e-3 * threshold / n
    for _ in range(MAX_SWEEPS):
        if _offdiag_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= negligible:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / mag
                # real symmetric rotation on the phase-rotated 2x2 block
                tau = (aqq - app) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = np.copysign(1.0, tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = [[c, s*phase], [-s*conj(phase), c]] on (p, q); A <- J^H A J
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    w = np.real(np.diag(a))
    return np.sort(w)[::-1]
