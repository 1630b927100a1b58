"""Three-qubit pure states in the five-amplitude canonical form.

Any three-qubit pure state is locally equivalent to

    a0 e^{i phi} |000> + b1 |100> + b2 |010> + b3 |001> + a1 |111>

with real parameters. For this family two cumulant matrix elements have
closed forms, and a vanishing correlation measure forces the state to be a
product across some bipartition. The harness here samples the family and
checks that implication numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cumulant import cumulant_array
from .dense_state import PureState, ptrace_array
from .errors import DomainError

# computational-basis indices, party 1 is the most significant bit
I000, I001, I010, I100, I111 = 0, 1, 2, 4, 7
DIMS = (2, 2, 2)


@dataclass(frozen=True)
class CanonicalParams:
    a0: float
    a1: float
    b1: float
    b2: float
    b3: float
    phi: float = 0.0

    def __post_init__(self):
        norm = self.a0 ** 2 + self.a1 ** 2 + self.b1 ** 2 + self.b2 ** 2 + self.b3 ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"canonical parameters are not normalised (sum of squares {norm!r})")

    @classmethod
    def random(cls, rng: np.random.Generator) -> CanonicalParams:
        """Uniform on the unit 4-sphere with a uniform phase."""
        v = rng.standard_normal(5)
        v /= np.linalg.norm(v)
        return cls(*map(float, v), phi=float(rng.uniform(0.0, 2 * np.pi)))


GHZ_PARAMS = CanonicalParams(1 / np.sqrt(2), 1 / np.sqrt(2), 0.0, 0.0, 0.0, 0.0)


def _amplitudes(p: CanonicalParams) -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[I000] = p.a0 * np.exp(1j * p.phi)
    psi[I100] = p.b1
    psi[I010] = p.b2
    psi[I001] = p.b3
    psi[I111] = p.a1
    return psi


def canonical_state(p: CanonicalParams) -> PureState:
    return PureState(_amplitudes(p), DIMS)


def element_100_010(p: CanonicalParams) -> float:
    """Closed form of ``<100|C|010>``."""
    return p.b1 * p.b2 * (1 - 2 * p.a0 ** 2) * (p.a1 ** 2 + p.b3 ** 2)


def element_111_111(p: CanonicalParams) -> float:
    """Closed form of ``<111|C|111>``."""
    a0s, a1s = p.a0 ** 2, p.a1 ** 2
    b1s, b2s, b3s = p.b1 ** 2, p.b2 ** 2, p.b3 ** 2
    return (
        a1s * a0s * (1 - 2 * a1s)
        + 2 * b1s * b2s * b3s
        + 2 * a1s * (b1s * b2s + b2s * b3s + b1s * b3s)
    )


def _cumulant_of_vector(psi: np.ndarray) -> np.ndarray:
    return cumulant_array(np.outer(psi, psi.conj()), DIMS)


def dense_elements(p: CanonicalParams) -> tuple[float, float, complex]:
    """``(<100|C|010>, <111|C|111>, <000|C|111>)`` from the dense cumulant."""
    c = _cumulant_of_vector(_amplitudes(p))
    return c[I100, I010].real, c[I111, I111].real, c[I000, I111]


BIPARTITIONS = ((0b001, 0b110), (0b010, 0b101), (0b100, 0b011))


def is_product_pure(psi: PureState, tol: float = 1e-4) -> tuple[int, int] | None:
    """First bipartition ``(single, rest)`` (party masks) across which ``psi`` factorises.

    A pure state is a product across ``{i} | rest`` iff the marginal of
    party ``i`` is pure.
    """
    if psi.dims != DIMS:
        raise DomainError("three-qubit state required")
    return _product_bipartition(psi.amplitudes, tol)


def _product_bipartition(psi: np.ndarray, tol: float) -> tuple[int, int] | None:
    rho = np.outer(psi, psi.conj())
    if abs(np.real(np.trace(rho @ rho)) - 1.0) > 1e-10:
        raise DomainError("input is not a pure state")
    for single, rest in BIPARTITIONS:
        party = single.bit_length() - 1
        r = ptrace_array(rho, DIMS, [party])
        if np.real(np.trace(r @ r)) >= 1.0 - tol:
            return single, rest
    return None


def _measure(psi: np.ndarray) -> tuple[float, complex]:
    c = _cumulant_of_vector(psi)
    w = np.linalg.eigvalsh(c)
    return 0.5 * float(np.sum(np.abs(w))), c[I000, I111]


def _random_product(rng: np.random.Generator) -> np.ndarray:
    """Random single-qubit state times a random two-qubit state, in a random party slot."""
    a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    t = np.kron(a, b).reshape(2, 2, 2)
    slot = int(rng.integers(0, 3))
    order = {0: (0, 1, 2), 1: (1, 0, 2), 2: (1, 2, 0)}[slot]
    return np.transpose(t, order).reshape(8)


@dataclass
class Theorem3Report:
    trials: int
    violations: int
    min_mc_nonproduct: float
    max_corner_element: float
    planted: int = 0
    planted_failures: int = 0

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.planted_failures == 0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "min_mc_nonproduct": self.min_mc_nonproduct,
            "max_corner_element": self.max_corner_element,
        }


def theorem3_harness(
    seed: int = 0,
    trials: int = 10_000,
    eps: float = 1e-6,
    tol: float = 1e-4,
    planted: int | None = None,
) -> Theorem3Report:
    """Sample canonical states and look for a vanishing measure on a non-product state.

    Every sample with measure below ``eps`` must factorise to purity
    tolerance ``tol``. Planted product states (``trials // 10`` by default)
    must be detected and have measure below 1e-9.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    violations = 0
    min_mc = np.inf
    max_corner = 0.0
    for _ in range(trials):
        psi = _amplitudes(CanonicalParams.random(rng))
        mc, corner = _measure(psi)
        max_corner = max(max_corner, abs(corner))
        split = _product_bipartition(psi, tol)
        if split is None:
            min_mc = min(min_mc, mc)
            if mc < eps:
                violations += 1
    n_planted = max(1, trials // 10) if planted is None else planted
    failures = 0
    for _ in range(n_planted):
        psi = _random_product(rng)
        mc, _ = _measure(psi)
        if mc >= 1e-9 or _product_bipartition(psi, tol) is None:
            failures += 1
    return Theorem3Report(trials, violations, float(min_mc), float(max_corner), n_planted, failures)
