"""Dense density matrices on multi-party systems.

A :class:`DensityMatrix` is a square complex array together with the ordered
list of local dimensions of its parties. Party ``i`` is the ``i``-th tensor
factor (most significant in the row index). The same container carries
Hermitian operators that are not states (pseudo-states, cumulants); those are
built with ``role="operator"`` and skip the positivity and unit-trace checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, ParseError, ResourceError
from .linalg import jacobi_eigvalsh
from .partitions import full_mask, indices_from_mask
from .tolerances import TOL

MAX_DIM = 4096

Role = Literal["state", "operator"]


@dataclass(frozen=True)
class SystemShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise DomainError("at least one party required")
        if any(d < 2 for d in dims):
            raise DomainError(f"local dimensions must be >= 2, got {list(dims)}")
        if self.total > MAX_DIM:
            raise ResourceError(
                f"total dimension {self.total} exceeds dense limit {MAX_DIM}", limit=MAX_DIM
            )

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_parties(self) -> int:
        return len(self.dims)


def _as_shape(shape: SystemShape | Sequence[int]) -> SystemShape:
    return shape if isinstance(shape, SystemShape) else SystemShape(tuple(shape))


@dataclass(frozen=True)
class DensityMatrix:
    data: np.ndarray
    dims: tuple[int, ...]
    role: Role = "state"
    trace: float = field(default=1.0)

    def __post_init__(self):
        shape = SystemShape(tuple(self.dims))
        object.__setattr__(self, "dims", shape.dims)
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (shape.total, shape.total):
            raise DomainError(
                f"matrix shape {data.shape} does not match dims {list(shape.dims)}"
            )
        if np.max(np.abs(data - data.conj().T), initial=0.0) > TOL.hermitian:
            raise DomainError("operator is not Hermitian")
        data = 0.5 * (data + data.conj().T)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        if self.role == "state":
            tr = np.trace(data).real
            if abs(tr - self.trace) > TOL.trace:
                raise DomainError(f"trace {tr!r} differs from declared {self.trace!r}")
            lo = np.linalg.eigvalsh(data)[0]
            if lo < -TOL.psd:
                raise DomainError(f"state has negative eigenvalue {lo:.3e}")
        elif self.role != "operator":
            raise DomainError(f"unknown role {self.role!r}")

    @property
    def shape(self) -> SystemShape:
        return SystemShape(self.dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def as_operator(self) -> DensityMatrix:
        return DensityMatrix(self.data, self.dims, role="operator")

    def __sub__(self, other: DensityMatrix) -> DensityMatrix:
        _same_dims(self, other)
        return DensityMatrix(self.data - other.data, self.dims, role="operator")

    def __add__(self, other: DensityMatrix) -> DensityMatrix:
        _same_dims(self, other)
        return DensityMatrix(self.data + other.data, self.dims, role="operator")


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        shape = SystemShape(tuple(self.dims))
        object.__setattr__(self, "dims", shape.dims)
        psi = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if psi.size != shape.total:
            raise DomainError(f"{psi.size} amplitudes do not match dims {list(shape.dims)}")
        if abs(np.linalg.norm(psi) - 1.0) > TOL.norm:
            raise DomainError(f"state vector has norm {np.linalg.norm(psi)!r}")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True)
class LocalChannel:
    """One list of Kraus operators per party."""

    kraus: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        parties = []
        for i, ops in enumerate(self.kraus):
            ops = tuple(np.asarray(k, dtype=complex) for k in ops)
            if not ops:
                raise DomainError(f"party {i} has no Kraus operators")
            d = ops[0].shape[1]
            acc = sum(k.conj().T @ k for k in ops)
            if np.max(np.abs(acc - np.eye(d))) > TOL.trace_preserving:
                raise DomainError(f"channel on party {i} is not trace preserving")
            parties.append(ops)
        object.__setattr__(self, "kraus", tuple(parties))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(ops[0].shape[1] for ops in self.kraus)


def _same_dims(a: DensityMatrix, b: DensityMatrix) -> None:
    if a.dims != b.dims:
        raise DomainError(f"party dimensions differ: {list(a.dims)} vs {list(b.dims)}")


def as_density(x: DensityMatrix | PureState) -> DensityMatrix:
    return x.density() if isinstance(x, PureState) else x


# ----------------------------------------------------------------------------
# array-level helpers; these skip validation and are used on hot paths


def ptrace_array(data: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced operator on the parties ``keep`` (kept in ascending order)."""
    n = len(dims)
    keep = sorted(keep)
    if len(keep) == n:
        return data
    traced = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced]))
    t = data.reshape(tuple(dims) * 2)
    perm = keep + traced
    t = t.transpose(perm + [n + i for i in perm]).reshape(dk, dt, dk, dt)
    return np.einsum("aibi->ab", t)


def permute_parties_array(data: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new party ``j`` is old party ``order[j]``."""
    n = len(dims)
    order = list(order)
    if order == list(range(n)):
        return data
    d = data.shape[0]
    t = data.reshape(tuple(dims) * 2)
    return t.transpose(order + [n + i for i in order]).reshape(d, d)


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def local_kraus_apply(data: np.ndarray, dims: Sequence[int], party: int, kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Apply ``sum_k K rho K^dag`` with ``K`` acting on one party."""
    n = len(dims)
    d = data.shape[0]
    t = data.reshape(tuple(dims) * 2)
    out = np.zeros_like(t)
    for k in kraus:
        # act on row index of `party` and column index of `party`
        x = np.tensordot(k, t, axes=([1], [party]))
        x = np.moveaxis(x, 0, party)
        x = np.tensordot(x, k.conj(), axes=([n + party], [1]))
        x = np.moveaxis(x, -1, n + party)
        out += x
    return out.reshape(d, d)


# ----------------------------------------------------------------------------
# public operations


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    dims = a.dims + b.dims
    SystemShape(dims)
    role: Role = "state" if a.role == b.role == "state" else "operator"
    return DensityMatrix(np.kron(a.data, b.data), dims, role=role)


def partial_trace(op: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduce ``op`` onto the parties in the bit mask ``keep``."""
    if keep == 0:
        raise DomainError("keep must be nonempty; use numpy.trace for the full trace")
    if keep & ~full_mask(op.n_parties):
        raise DomainError("keep mask names parties the operator does not have")
    idx = indices_from_mask(keep)
    data = ptrace_array(op.data, op.dims, idx)
    dims = tuple(op.dims[i] for i in idx)
    if op.role == "state":
        return DensityMatrix(data, dims)
    return DensityMatrix(data, dims, role="operator")


def permute_parties(op: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    if sorted(order) != list(range(op.n_parties)):
        raise DomainError(f"{list(order)} is not a permutation of the parties")
    data = permute_parties_array(op.data, op.dims, order)
    dims = tuple(op.dims[i] for i in order)
    return DensityMatrix(data, dims, role=op.role, trace=op.trace)


def fuse_parties(op: DensityMatrix, groups: Sequence[int]) -> DensityMatrix:
    """Reinterpret adjacent parties as one.

    ``groups[j]`` is the number of consecutive parties merged into new party
    ``j``; the data is reused as is.
    """
    if sum(groups) != op.n_parties or any(g < 1 for g in groups):
        raise DomainError("fusion groups must be positive and cover every party")
    dims = []
    pos = 0
    for g in groups:
        dims.append(int(np.prod(op.dims[pos:pos + g])))
        pos += g
    return DensityMatrix(op.data, tuple(dims), role=op.role, trace=op.trace)


def hermitian_spectrum(op: DensityMatrix | np.ndarray, method: str = "lapack") -> np.ndarray:
    """Real eigenvalues in descending order.

    ``method="lapack"`` uses :func:`numpy.linalg.eigvalsh`; ``"jacobi"`` runs
    the in-package cyclic Jacobi solver.
    """
    h = op.data if isinstance(op, DensityMatrix) else np.asarray(op, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError("square matrix required")
    if np.max(np.abs(h - h.conj().T), initial=0.0) > TOL.hermitian:
        raise DomainError("operator is not Hermitian")
    if method == "lapack":
        return np.linalg.eigvalsh(h)[::-1]
    if method == "jacobi":
        return jacobi_eigvalsh(h)
    raise DomainError(f"unknown eigenvalue method {method!r}")


def trace_norm(op: DensityMatrix | np.ndarray) -> float:
    return float(np.sum(np.abs(hermitian_spectrum(op))))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    _same_dims(a, b)
    if abs(np.trace(a.data) - np.trace(b.data)) > TOL.trace_match:
        raise DomainError("trace distance requires operators of equal trace")
    # fixed argument order makes the result exactly symmetric in floating point
    if a.data.tobytes() > b.data.tobytes():
        a, b = b, a
    return 0.5 * trace_norm(a.data - b.data)


def max_projector_overlap(a: DensityMatrix, b: DensityMatrix) -> float:
    """``max_P Tr(P (a - b))`` over projectors: the sum of positive eigenvalues."""
    _same_dims(a, b)
    w = hermitian_spectrum(a.data - b.data)
    return float(np.sum(w[w > 0]))


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    w = hermitian_spectrum(rho)
    if w[-1] < -TOL.psd:
        raise DomainError(f"negative eigenvalue {w[-1]:.3e} in entropy argument")
    w = w[w > 1e-15]
    return float(max(-np.sum(w * np.log2(w)), 0.0))


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.trace(rho.data @ rho.data)))


def apply_local_channel(rho: DensityMatrix, ch: LocalChannel) -> DensityMatrix:
    if ch.dims != rho.dims:
        raise DomainError(f"channel dims {list(ch.dims)} do not match state dims {list(rho.dims)}")
    data = rho.data
    for party, ops in enumerate(ch.kraus):
        data = local_kraus_apply(data, rho.dims, party, ops)
    return DensityMatrix(data, rho.dims, role=rho.role, trace=rho.trace)


def apply_local_unitary(rho: DensityMatrix, unitaries: Sequence[np.ndarray]) -> DensityMatrix:
    return apply_local_channel(rho, LocalChannel(tuple((u,) for u in unitaries)))


# ----------------------------------------------------------------------------
# random fixtures


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_unitary(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure_state(shape: SystemShape | Sequence[int], seed=None) -> PureState:
    shape = _as_shape(shape)
    rng = _rng(seed)
    psi = _ginibre(rng, shape.total, 1)[:, 0]
    return PureState(psi / np.linalg.norm(psi), shape.dims)


def random_density_matrix(shape: SystemShape | Sequence[int], seed=None, rank: int | None = None) -> DensityMatrix:
    """Induced-measure random state of the given rank (full rank by default)."""
    shape = _as_shape(shape)
    rng = _rng(seed)
    g = _ginibre(rng, shape.total, rank or shape.total)
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, shape.dims)


def random_local_unitary(shape: SystemShape | Sequence[int], seed=None) -> list[np.ndarray]:
    shape = _as_shape(shape)
    rng = _rng(seed)
    return [haar_unitary(d, rng) for d in shape.dims]


def random_kraus(d: int, kraus_count: int, seed=None) -> tuple[np.ndarray, ...]:
    """Kraus operators sliced from a random isometry ``C^d -> C^(k d)``."""
    rng = _rng(seed)
    q, _ = np.linalg.qr(_ginibre(rng, kraus_count * d, d))
    return tuple(q[i * d:(i + 1) * d, :] for i in range(kraus_count))


def random_local_channel(shape: SystemShape | Sequence[int], kraus_count: int = 2, seed=None) -> LocalChannel:
    shape = _as_shape(shape)
    rng = _rng(seed)
    return LocalChannel(tuple(random_kraus(d, kraus_count, rng) for d in shape.dims))


def depolarizing_kraus(d: int) -> tuple[np.ndarray, ...]:
    """Kraus set of the fully depolarizing channel ``rho -> Tr(rho) I/d``."""
    ops = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1.0 / np.sqrt(d)
            ops.append(k)
    return tuple(ops)


# ----------------------------------------------------------------------------
# state files


def _decode_complex(x, where: str) -> complex:
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x)):
        raise ParseError(f"expected [re, im] pair at {where}")
    return complex(x[0], x[1])


def state_from_json(obj: dict) -> DensityMatrix:
    """Decode ``{"dims": [...], "kind": "density"|"pure", "data": ...}``."""
    if not isinstance(obj, dict):
        raise ParseError("state file must hold a JSON object")
    for key in ("dims", "kind", "data"):
        if key not in obj:
            raise ParseError(f"state file missing key {key!r}")
    dims = obj["dims"]
    if not (isinstance(dims, list) and dims and all(isinstance(d, int) for d in dims)):
        raise ParseError("'dims' must be a nonempty list of integers")
    kind = obj["kind"]
    data = obj["data"]
    if not isinstance(data, list):
        raise ParseError("'data' must be a list")
    if kind == "pure":
        psi = np.array([_decode_complex(v, f"data[{i}]") for i, v in enumerate(data)])
        return PureState(psi, tuple(dims)).density()
    if kind == "density":
        rows = []
        for i, row in enumerate(data):
            if not isinstance(row, list):
                raise ParseError(f"'data[{i}]' must be a list of [re, im] pairs")
            rows.append([_decode_complex(v, f"data[{i}][{j}]") for j, v in enumerate(row)])
        if len({len(r) for r in rows}) > 1:
            raise ParseError("density matrix rows have unequal lengths")
        return DensityMatrix(np.array(rows, dtype=complex), tuple(dims))
    raise ParseError(f"'kind' must be 'density' or 'pure', got {kind!r}")


def state_to_json(state: DensityMatrix | PureState) -> dict:
    if isinstance(state, PureState):
        data = [[float(a.real), float(a.imag)] for a in state.amplitudes]
        return {"dims": list(state.dims), "kind": "pure", "data": data}
    data = [[[float(v.real), float(v.imag)] for v in row] for row in state.data]
    return {"dims": list(state.dims), "kind": "density", "data": data}


def load_state(path: str | Path) -> DensityMatrix:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", column=exc.colno - 1) from exc
    return state_from_json(obj)


def save_state(state: DensityMatrix | PureState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state)))


def subsystem_dims(op: DensityMatrix, mask: int) -> tuple[int, ...]:
    return tuple(op.dims[i] for i in indices_from_mask(mask))


__all__ = [
    "MAX_DIM", "SystemShape", "DensityMatrix", "PureState", "LocalChannel",
    "tensor_product", "partial_trace", "permute_parties", "fuse_parties",
    "hermitian_spectrum", "trace_norm", "trace_distance", "max_projector_overlap",
    "von_neumann_entropy", "purity", "apply_local_channel", "apply_local_unitary",
    "random_pure_state", "random_density_matrix", "random_local_unitary",
    "random_local_channel", "random_kraus", "haar_unitary", "depolarizing_kraus",
    "load_state", "save_state", "state_from_json", "state_to_json", "as_density",
    "subsystem_dims",
]
