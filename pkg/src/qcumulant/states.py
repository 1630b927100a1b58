"""Named multi-qubit states used in examples, tests and the CLI."""

from __future__ import annotations

import numpy as np

from .dense_state import DensityMatrix, PureState
from .errors import DomainError


def _basis(n: int, index: int) -> np.ndarray:
    v = np.zeros(2 ** n, dtype=complex)
    v[index] = 1.0
    return v


def ghz_state(n: int) -> PureState:
    if n < 2:
        raise DomainError("GHZ state needs at least 2 qubits")
    psi = (_basis(n, 0) + _basis(n, 2 ** n - 1)) / np.sqrt(2)
    return PureState(psi, (2,) * n)


def bell_state() -> PureState:
    return ghz_state(2)


def w_state(n: int = 3) -> PureState:
    if n < 2:
        raise DomainError("W state needs at least 2 qubits")
    psi = sum(_basis(n, 1 << k) for k in range(n)) / np.sqrt(n)
    return PureState(psi, (2,) * n)


def classical_ghz(n: int) -> DensityMatrix:
    """``(|0..0><0..0| + |1..1><1..1|) / 2``."""
    if n < 2:
        raise DomainError("need at least 2 qubits")
    rho = np.zeros((2 ** n, 2 ** n), dtype=complex)
    rho[0, 0] = rho[-1, -1] = 0.5
    return DensityMatrix(rho, (2,) * n)


def basis_state(bits: str) -> PureState:
    return PureState(_basis(len(bits), int(bits, 2)), (2,) * len(bits))


def maximally_mixed(dims: tuple[int, ...]) -> DensityMatrix:
    d = int(np.prod(dims))
    return DensityMatrix(np.eye(d) / d, dims)


def parity_mixture(n: int = 3) -> DensityMatrix:
    """Uniform mixture of the even-parity computational basis states."""
    d = 2 ** n
    diag = np.array([1.0 if bin(i).count("1") % 2 == 0 else 0.0 for i in range(d)])
    return DensityMatrix(np.diag(diag / diag.sum()), (2,) * n)
