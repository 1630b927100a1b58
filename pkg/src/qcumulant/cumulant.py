"""Pseudo-state, cumulant and the correlation measures built on them.

The pseudo-state of an ``N``-party state is the combination

    sum over partitions {S_1..S_M} with M >= 2 of (-1)**M (M-1)! rho_S1 (x) ... (x) rho_SM

of products of its marginals. It agrees with the state on every marginal
that misses at least one party, so the cumulant ``rho - pseudo`` is exactly
the part of the state that no proper subset of parties can see.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .dense_state import (
    DensityMatrix,
    PureState,
    as_density,
    kron_all,
    permute_parties_array,
    ptrace_array,
    trace_distance,
    von_neumann_entropy,
)
from .errors import DomainError, ResourceError
from .partitions import (
    enumerate_partitions,
    enumerate_proper_partitions,
    full_mask,
    indices_from_mask,
    pseudo_coefficient,
)

MAX_URSELL_PARTIES = 6

StateLike = DensityMatrix | PureState


class _Marginals:
    """Reduced-state cache keyed by subset mask."""

    def __init__(self, data: np.ndarray, dims: Sequence[int]):
        self.data = data
        self.dims = tuple(dims)
        self._cache: dict[int, np.ndarray] = {}

    def __call__(self, mask: int) -> np.ndarray:
        if mask not in self._cache:
            self._cache[mask] = ptrace_array(self.data, self.dims, indices_from_mask(mask))
        return self._cache[mask]


def _block_product(blocks: Sequence[int], factor, dims: Sequence[int]) -> np.ndarray:
    """Tensor product of per-block operators, returned in original party order."""
    order = [i for b in blocks for i in indices_from_mask(b)]
    prod = kron_all([factor(b) for b in blocks])
    inverse = list(np.argsort(order))
    return permute_parties_array(prod, [dims[i] for i in order], inverse)


def pseudo_state_array(data: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    n = len(dims)
    if n < 2:
        raise DomainError("pseudo-state needs at least two parties")
    marg = _Marginals(data, dims)
    acc = np.zeros_like(data, dtype=complex)
    for part in enumerate_proper_partitions(full_mask(n)):
        acc += pseudo_coefficient(len(part)) * _block_product(part.blocks, marg, dims)
    return acc


def cumulant_array(data: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    if len(dims) == 1:
        return data
    return data - pseudo_state_array(data, dims)


def pseudo_state(rho: StateLike) -> DensityMatrix:
    rho = as_density(rho)
    return DensityMatrix(pseudo_state_array(rho.data, rho.dims), rho.dims, role="operator")


def cumulant(rho: StateLike) -> DensityMatrix:
    """``rho - pseudo_state(rho)``; Hermitian, traceless, annihilated by every single-party trace."""
    rho = as_density(rho)
    if rho.n_parties < 2:
        raise DomainError("cumulant needs at least two parties")
    return DensityMatrix(cumulant_array(rho.data, rho.dims), rho.dims, role="operator")


def cumulant_of_subset(rho: StateLike, s: int) -> DensityMatrix:
    """Cumulant of the marginal on the parties in mask ``s``.

    For a single party this is the marginal itself.
    """
    rho = as_density(rho)
    if s == 0:
        raise DomainError("subset must be nonempty")
    if s & ~full_mask(rho.n_parties):
        raise DomainError("subset names parties the state does not have")
    idx = indices_from_mask(s)
    dims = tuple(rho.dims[i] for i in idx)
    reduced = ptrace_array(rho.data, rho.dims, idx)
    if len(idx) == 1:
        return DensityMatrix(reduced, dims)
    return DensityMatrix(cumulant_array(reduced, dims), dims, role="operator")


def ursell_reconstruct(rho: StateLike) -> DensityMatrix:
    """Sum over all partitions of the tensor product of block cumulants."""
    rho = as_density(rho)
    n = rho.n_parties
    if n > MAX_URSELL_PARTIES:
        raise ResourceError(
            f"Ursell reconstruction limited to {MAX_URSELL_PARTIES} parties", limit=MAX_URSELL_PARTIES
        )
    marg = _Marginals(rho.data, rho.dims)
    cache: dict[int, np.ndarray] = {}

    def block_cumulant(mask: int) -> np.ndarray:
        if mask not in cache:
            idx = indices_from_mask(mask)
            cache[mask] = cumulant_array(marg(mask), [rho.dims[i] for i in idx])
        return cache[mask]

    acc = np.zeros_like(rho.data)
    for part in enumerate_partitions(full_mask(n)):
        acc += _block_product(part.blocks, block_cumulant, rho.dims)
    return DensityMatrix(acc, rho.dims, role="operator")


def product_of_marginals(rho: StateLike) -> DensityMatrix:
    rho = as_density(rho)
    marg = _Marginals(rho.data, rho.dims)
    data = kron_all([marg(1 << i) for i in range(rho.n_parties)])
    return DensityMatrix(data, rho.dims)


# ----------------------------------------------------------------------------
# measures


def _cumulant_spectrum(rho: DensityMatrix) -> np.ndarray:
    c = cumulant_array(rho.data, rho.dims)
    return np.linalg.eigvalsh(0.5 * (c + c.conj().T))


def correlation_measure(rho: StateLike) -> float:
    """Half the trace norm of the cumulant (equivalently ``D(rho, pseudo)``)."""
    rho = as_density(rho)
    if rho.n_parties < 2:
        raise DomainError("correlation measure needs at least two parties")
    return 0.5 * float(np.sum(np.abs(_cumulant_spectrum(rho))))


def lui_mcf(rho: StateLike) -> float:
    """Squared-norm variant ``Tr C^2`` of the cumulant measure."""
    rho = as_density(rho)
    if rho.n_parties < 2:
        raise DomainError("cumulant needs at least two parties")
    return float(np.sum(_cumulant_spectrum(rho) ** 2))


def total_correlation(rho: StateLike) -> float:
    """Trace distance to the product of single-party marginals."""
    rho = as_density(rho)
    if rho.n_parties == 2:
        # the two-party pseudo-state is the product of marginals; share one code path
        return correlation_measure(rho)
    return trace_distance(rho, product_of_marginals(rho))


def _entropy_of(rho: DensityMatrix, mask: int) -> float:
    return von_neumann_entropy(ptrace_array(rho.data, rho.dims, indices_from_mask(mask)))


def mutual_entropy_3(rho: StateLike) -> float:
    """Three-party mutual entropy ``S(1:2:3)`` in bits; can be negative."""
    rho = as_density(rho)
    if rho.n_parties != 3:
        raise DomainError(f"three-party mutual entropy needs exactly 3 parties, got {rho.n_parties}")
    s = lambda m: _entropy_of(rho, m)  # noqa: E731
    return s(0b111) - s(0b011) - s(0b110) - s(0b101) + s(0b001) + s(0b010) + s(0b100)


def relative_entropy_total(rho: StateLike) -> float:
    """``sum_i S(rho_i) - S(rho)``, the relative entropy to the product of marginals."""
    rho = as_density(rho)
    singles = sum(_entropy_of(rho, 1 << i) for i in range(rho.n_parties))
    return max(singles - von_neumann_entropy(rho), 0.0)


@dataclass
class CorrelationReport:
    n_parties: int
    m_c: float
    m_tc: float | None = None
    lui_mcf: float | None = None
    mutual_entropy: float | None = None
    relative_entropy_total: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


ALL_MEASURES = ("mc", "mtc", "lui", "mutual", "relative")


def correlation_report(rho: StateLike, measures: Sequence[str] = ALL_MEASURES) -> CorrelationReport:
    """Evaluate the requested measures; ``"mutual"`` is skipped unless N == 3."""
    rho = as_density(rho)
    if rho.n_parties < 2:
        raise DomainError("correlation measures need at least two parties")
    unknown = set(measures) - set(ALL_MEASURES)
    if unknown:
        raise DomainError(f"unknown measures {sorted(unknown)}")
    w = _cumulant_spectrum(rho)
    report = CorrelationReport(n_parties=rho.n_parties, m_c=0.5 * float(np.sum(np.abs(w))))
    if "mtc" in measures:
        report.m_tc = total_correlation(rho)
    if "lui" in measures:
        report.lui_mcf = float(np.sum(w ** 2))
    if "mutual" in measures and rho.n_parties == 3:
        report.mutual_entropy = mutual_entropy_3(rho)
    if "relative" in measures:
        report.relative_entropy_total = relative_entropy_total(rho)
    return report
