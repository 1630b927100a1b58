"""Pauli group algebra and cumulant measures of stabilizer states.

A Pauli operator ``phase * M_0 (x) ... (x) M_{n-1}`` with ``M_j`` in
``{I, X, Y, Z}`` is stored as two ``n``-bit integers and a phase exponent:
bit ``j`` of ``x`` / ``z`` says whether ``M_j`` has an X / Z component
(``Y`` has both) and ``phase = i**phase_exp``. Qubit ``j`` is the ``j``-th
tensor factor, the ``j``-th character of the text form.

The cumulant of a stabilizer state is a combination of group elements,
``C = 2**-N sum_M beta_M M``, with integer ``beta_M``. Its eigenvalues come
from assigning a sign to each generator; the sweep over all sign
assignments is a Walsh-Hadamard transform of ``beta`` indexed by generator
exponent vectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .cumulant import correlation_measure
from .dense_state import DensityMatrix, partial_trace
from .errors import DomainError, ParseError, ResourceError
from .partitions import (
    enumerate_proper_partitions,
    full_mask,
    indices_from_mask,
    lowest_bit,
    popcount,
    pseudo_coefficient,
)

MAX_ELEMENTS_LOG2 = 24
MAX_DENSE_QUBITS = 10
MAX_COEFF_QUBITS = 12

_LETTERS = "IXZY"  # index = x_bit + 2 * z_bit
_PREFIXES = {"+i": 1, "-i": 3, "+": 0, "-": 2, "i": 1}
_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int
    z: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("Pauli operator needs at least one qubit")
        if (self.x | self.z) >> self.n:
            raise DomainError("bit vectors exceed qubit count")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exp]

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def pattern(self) -> tuple[int, int]:
        return self.x, self.z

    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes(self, other: PauliOperator) -> bool:
        return symplectic_product(self, other) == 0

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return pauli_multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self)

    def restrict(self, mask: int) -> tuple[int, int]:
        return self.x & mask, self.z & mask

    def to_dense(self) -> np.ndarray:
        return pauli_dense(self)


def identity(n: int) -> PauliOperator:
    return PauliOperator(n, 0, 0, 0)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    return (popcount(p.x & q.z) + popcount(p.z & q.x)) & 1


def pauli_multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p * q`` including the phase.

    In the ``X^x Z^z`` form a letter-form operator carries an extra
    ``i**|x & z|`` (``Y = i X Z``), and moving ``Z^z1`` past ``X^x2``
    contributes ``(-1)**|z1 & x2|``.
    """
    if p.n != q.n:
        raise DomainError(f"qubit counts differ: {p.n} vs {q.n}")
    x = p.x ^ q.x
    z = p.z ^ q.z
    e = (
        p.phase_exp + q.phase_exp
        + popcount(p.x & p.z) + popcount(q.x & q.z)
        + 2 * popcount(p.z & q.x)
        - popcount(x & z)
    )
    return PauliOperator(p.n, x, z, e)


def parse_pauli(text: str) -> PauliOperator:
    """Parse ``[+|-|+i|-i]`` followed by letters from ``IXYZ``."""
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    phase = 0
    for prefix in ("+i", "-i", "+", "-"):
        if s.startswith(prefix):
            phase = _PREFIXES[prefix]
            s = s[len(prefix):]
            lead += len(prefix)
            break
    if not s:
        raise ParseError("empty Pauli string", column=lead)
    x = z = 0
    for j, ch in enumerate(s):
        if ch not in "IXYZ":
            raise ParseError(f"invalid Pauli letter {ch!r}", column=lead + j)
        k = _LETTERS.index(ch)
        x |= (k & 1) << j
        z |= (k >> 1) << j
    return PauliOperator(len(s), x, z, phase)


def format_pauli(p: PauliOperator) -> str:
    letters = "".join(_LETTERS[((p.x >> j) & 1) | (((p.z >> j) & 1) << 1)] for j in range(p.n))
    return _PHASE_TEXT[p.phase_exp] + letters


def pauli_dense(p: PauliOperator, qubits: Sequence[int] | None = None) -> np.ndarray:
    """Dense matrix of ``p`` on the listed qubits (all qubits by default).

    Qubits not listed must carry the identity.
    """
    qubits = list(range(p.n)) if qubits is None else list(qubits)
    mask = sum(1 << q for q in qubits)
    if p.support & ~mask:
        raise DomainError("operator acts outside the requested qubits")
    m = len(qubits)
    # local bit positions: qubit qubits[k] -> row-index bit (m-1-k)
    xs = zs = ys = 0
    for k, q in enumerate(qubits):
        b = 1 << (m - 1 - k)
        if (p.x >> q) & 1:
            xs |= b
        if (p.z >> q) & 1:
            zs |= b
        if (p.x >> q) & (p.z >> q) & 1:
            ys += 1
    d = 1 << m
    cols = np.arange(d)
    # X^x Z^z |b> = (-1)^{z.b} |b ^ x>, then letter-form phase i^{|x&z|}
    signs = 1 - 2 * (np.bitwise_count(cols & zs) & 1).astype(int)
    out = np.zeros((d, d), dtype=complex)
    out[cols ^ xs, cols] = signs * p.phase * (1j ** ys)
    return out


# ----------------------------------------------------------------------------
# stabilizer groups


class StabilizerError(DomainError):
    pass


class NonHermitianGeneratorError(StabilizerError):
    pass


class AnticommutingGeneratorsError(StabilizerError):
    pass


class DependentGeneratorsError(StabilizerError):
    pass


def _gf2_rank(rows: Sequence[int]) -> int:
    basis: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                rank += 1
                break
    return rank


@dataclass(frozen=True)
class StabilizerGroup:
    n: int
    generators: tuple[PauliOperator, ...]

    @property
    def k(self) -> int:
        return len(self.generators)

    def element(self, exponents: int) -> PauliOperator:
        """``prod_j G_j ** a_j`` with ``a_j`` the ``j``-th bit of ``exponents``."""
        out = identity(self.n)
        for j, g in enumerate(self.generators):
            if (exponents >> j) & 1:
                out = out * g
        return out

    def __len__(self) -> int:
        return 1 << self.k


def validate_stabilizer(gens: Sequence[PauliOperator]) -> StabilizerGroup:
    """Check generators and wrap them as a :class:`StabilizerGroup`.

    Generators must be Hermitian (phase +-1), pairwise commuting and
    independent over GF(2); together these exclude ``-I`` from the group.
    """
    gens = tuple(gens)
    if not gens:
        raise StabilizerError("at least one generator required")
    n = gens[0].n
    for i, g in enumerate(gens):
        if g.n != n:
            raise StabilizerError(f"generator {i} acts on {g.n} qubits, expected {n}")
        if not g.is_hermitian():
            raise NonHermitianGeneratorError(f"generator {i} ({format_pauli(g)}) has an imaginary phase")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not gens[i].commutes(gens[j]):
                raise AnticommutingGeneratorsError(
                    f"generators {i} ({format_pauli(gens[i])}) and {j} ({format_pauli(gens[j])}) anticommute"
                )
    rows = []
    for i, g in enumerate(gens):
        rows.append(g.x | (g.z << n))
        if _gf2_rank(rows) < len(rows):
            raise DependentGeneratorsError(
                f"generator {i} ({format_pauli(g)}) is a product of earlier generators"
            )
    return StabilizerGroup(n, gens)


def parse_stabilizer(text: str) -> StabilizerGroup:
    """One generator per line; ``#`` starts a comment line."""
    gens = []
    n = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            p = parse_pauli(stripped)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        if n is not None and p.n != n:
            raise ParseError(f"line {lineno}: generator has {p.n} qubits, expected {n}")
        n = p.n
        gens.append(p)
    if not gens:
        raise ParseError("no generators found")
    return validate_stabilizer(gens)


def load_stabilizer(path: str | Path) -> StabilizerGroup:
    return parse_stabilizer(Path(path).read_text())


def gray_code(k: int) -> Iterator[tuple[int, int]]:
    """Yield ``(code, flipped_bit)`` for the reflected Gray code; first bit is -1."""
    yield 0, -1
    prev = 0
    for i in range(1, 1 << k):
        code = i ^ (i >> 1)
        yield code, lowest_bit(code ^ prev)
        prev = code


def enumerate_elements(g: StabilizerGroup) -> list[tuple[int, PauliOperator]]:
    """All ``2**k`` elements as ``(exponent_mask, operator)`` in Gray-code order."""
    if g.k > MAX_ELEMENTS_LOG2:
        raise ResourceError(f"group enumeration limited to 2**{MAX_ELEMENTS_LOG2} elements",
                            limit=MAX_ELEMENTS_LOG2)
    out = []
    cur = identity(g.n)
    for code, bit in gray_code(g.k):
        if bit >= 0:
            # generators commute, so toggling G_bit is one multiplication
            cur = cur * g.generators[bit]
        out.append((code, cur))
    return out


def dense_from_elements(elements: Sequence[PauliOperator], qubits: Sequence[int]) -> np.ndarray:
    """``2**-|qubits| * sum(elements)`` as a dense matrix on ``qubits``."""
    d = 1 << len(qubits)
    acc = np.zeros((d, d), dtype=complex)
    for m in elements:
        acc += pauli_dense(m, qubits)
    return acc / d


def dense_from_stabilizer(g: StabilizerGroup) -> DensityMatrix:
    """Dense projector onto the stabilizer state of a full-rank group."""
    if g.k != g.n:
        raise DomainError(f"group has {g.k} generators on {g.n} qubits; not a pure stabilizer state")
    if g.n > MAX_DENSE_QUBITS:
        raise ResourceError(f"dense rendering limited to {MAX_DENSE_QUBITS} qubits", limit=MAX_DENSE_QUBITS)
    data = dense_from_elements([m for _, m in enumerate_elements(g)], range(g.n))
    return DensityMatrix(data, (2,) * g.n)


def restricted_subgroup(g: StabilizerGroup, s: int) -> tuple[PauliOperator, ...]:
    """Independent generators of ``{M in S : supp(M) subset of s}``.

    Gaussian elimination on the bits outside ``s``; combinations whose outer
    part cancels span the subgroup. Phases come from actual multiplication.
    """
    outside = full_mask(g.n) & ~s
    pivots: dict[int, tuple[int, PauliOperator]] = {}
    kernel: list[PauliOperator] = []
    for gen in g.generators:
        p = gen
        row = (p.x & outside) | ((p.z & outside) << g.n)
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = (row, p)
                break
            prow, pp = pivots[top]
            row ^= prow
            p = p * pp
        else:
            kernel.append(p)
    return tuple(kernel)


def reduced_stabilizer(g: StabilizerGroup, s: int) -> list[PauliOperator]:
    """Elements of the group supported inside the qubit mask ``s``."""
    if s & ~full_mask(g.n):
        raise DomainError("subset names qubits outside the group")
    sub = StabilizerGroup(g.n, restricted_subgroup(g, s))
    return [m for _, m in enumerate_elements(sub)]


# ----------------------------------------------------------------------------
# cumulant coefficients


@dataclass(frozen=True)
class CumulantExpansion:
    """``C = 2**-n_qubits * sum_a beta[a] * prod_j G_j**a_j`` on the qubits in ``qubits``.

    ``multiplicity`` is the dimension ``2**(|qubits| - k)`` of each joint
    eigenspace of the generators.
    """

    group: StabilizerGroup
    qubits: int
    beta: tuple[int, ...]

    @property
    def n_qubits(self) -> int:
        return popcount(self.qubits)

    @property
    def multiplicity(self) -> int:
        return 1 << (self.n_qubits - self.group.k)

    def nonzero(self) -> dict[int, int]:
        return {a: b for a, b in enumerate(self.beta) if b}


def _beta_by_partitions(x: int, z: int, ground: int, patterns: set[tuple[int, int]]) -> int:
    """``1 - sum over compatible proper partitions of (-1)**B (B-1)!``.

    A partition is compatible when the restriction of ``(x, z)`` to each
    block is the bit pattern of a group element. The product of those
    elements then has the pattern of ``M`` and lies in the group; since
    ``-I`` is not in the group, distinct elements have distinct patterns,
    so the product is ``M`` itself with its phase. Phases never need to be
    checked.
    """
    memo: dict[int, bool] = {}

    def ok(block: int) -> bool:
        if block not in memo:
            memo[block] = (x & block, z & block) in patterns
        return memo[block]

    total = 0
    for part in enumerate_proper_partitions(ground):
        if all(ok(b) for b in part.blocks):
            total += pseudo_coefficient(len(part))
    return 1 - total


def _beta_by_connected_sum(x: int, z: int, ground: int, patterns: set[tuple[int, int]]) -> int:
    """Same value as :func:`_beta_by_partitions` via the connected-part recursion.

    With ``f(T) = [restriction to T is a group pattern]`` and
    ``f(T) = sum_{A containing min T} h(A) f(T \\ A)``, the quantity
    ``sum over all partitions of (-1)**(B-1) (B-1)! prod f(block)`` equals
    ``h(ground)``, and that sum is exactly ``beta``.
    """
    f: dict[int, int] = {0: 1}
    h: dict[int, int] = {}

    def fval(t: int) -> int:
        if t not in f:
            f[t] = int((x & t, z & t) in patterns)
        return f[t]

    # process subsets of ground in increasing popcount order
    subsets = _submasks(ground)
    subsets.sort(key=popcount)
    for t in subsets:
        if t == 0:
            continue
        low = t & -t
        rest = t ^ low
        acc = 0
        sub = rest
        # A = low | a for a proper submask a of rest (A != t)
        while True:
            a_mask = low | sub
            if a_mask != t:
                acc += h[a_mask] * fval(t ^ a_mask)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        h[t] = fval(t) - acc
    return h[ground]


def _submasks(mask: int) -> list[int]:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return out


def cumulant_coefficients(
    g: StabilizerGroup,
    qubits: int | None = None,
    method: str = "connected",
    skip_partial_support: bool = True,
) -> CumulantExpansion:
    """Integer coefficients ``beta_M`` of the cumulant on the qubit mask ``qubits``.

    ``g`` must be the (independent) generating set of a group whose elements
    are all supported inside ``qubits``; by default ``qubits`` is every
    qubit and ``g`` must be full rank.

    ``beta_M`` vanishes unless ``supp(M) == qubits``: a block's compatibility
    only depends on its intersection with ``supp(M)``, and the identity
    pattern is always compatible, so the Moebius sum factorises over
    ``supp(M)`` and its complement and the mixed term is zero. With
    ``skip_partial_support=False`` every element is evaluated explicitly.
    """
    if qubits is None:
        qubits = full_mask(g.n)
        if g.k != g.n:
            raise DomainError("full-state cumulant requires n independent generators")
    if popcount(qubits) > MAX_COEFF_QUBITS:
        raise ResourceError(f"coefficient computation limited to {MAX_COEFF_QUBITS} qubits",
                            limit=MAX_COEFF_QUBITS)
    if popcount(qubits) < 2:
        raise DomainError("cumulant coefficients need at least two qubits")
    if method == "connected":
        beta_fn = _beta_by_connected_sum
    elif method == "partitions":
        beta_fn = _beta_by_partitions
    else:
        raise DomainError(f"unknown method {method!r}")
    elements = enumerate_elements(g)
    for _, m in elements:
        if m.support & ~qubits:
            raise DomainError(f"element {format_pauli(m)} acts outside the qubit subset")
    patterns = {m.pattern for _, m in elements}
    beta = [0] * len(elements)
    for a, m in elements:
        if skip_partial_support and m.support != qubits:
            continue
        beta[a] = beta_fn(m.x, m.z, qubits, patterns)
    return CumulantExpansion(g, qubits, tuple(beta))


def _walsh_hadamard(values: Sequence[int]) -> list[int]:
    """``out[s] = sum_a values[a] * (-1)**popcount(a & s)``, exact integers."""
    out = np.array(values, dtype=object)
    h = 1
    n = len(out)
    while h < n:
        for i in range(0, n, 2 * h):
            a = out[i:i + h].copy()
            b = out[i + h:i + 2 * h].copy()
            out[i:i + h] = a + b
            out[i + h:i + 2 * h] = a - b
        h *= 2
    return [int(v) for v in out]


def spectrum_numerators(ce: CumulantExpansion) -> list[int]:
    """Eigenvalue numerators over ``2**n_qubits``, one per sign assignment.

    Bit ``j`` of the index set means ``G_j -> -1``; each value has
    multiplicity ``ce.multiplicity``.
    """
    if ce.group.k > MAX_ELEMENTS_LOG2:
        raise ResourceError(f"sign sweep limited to 2**{MAX_ELEMENTS_LOG2}", limit=MAX_ELEMENTS_LOG2)
    return _walsh_hadamard(ce.beta)


def stabilizer_spectrum(ce: CumulantExpansion) -> list[Fraction]:
    """Cumulant eigenvalues, one per generator sign assignment.

    For a full-rank group this is the complete spectrum; otherwise each
    value occurs ``ce.multiplicity`` times.
    """
    denom = 1 << ce.n_qubits
    return [Fraction(v, denom) for v in spectrum_numerators(ce)]


def expansion_measure_exact(ce: CumulantExpansion) -> Fraction:
    nums = spectrum_numerators(ce)
    return Fraction(ce.multiplicity * sum(abs(v) for v in nums), 2 << ce.n_qubits)


def stabilizer_measure_exact(g: StabilizerGroup) -> Fraction:
    return expansion_measure_exact(cumulant_coefficients(g))


def stabilizer_measure(g: StabilizerGroup) -> float:
    """Correlation measure of the stabilizer state of a full-rank group."""
    return float(stabilizer_measure_exact(g))


class SinglePartyWarning(UserWarning):
    """Raised when a correlation measure is requested for a single party."""


def reduced_expansion(g: StabilizerGroup, s: int) -> CumulantExpansion:
    sub = StabilizerGroup(g.n, restricted_subgroup(g, s))
    return cumulant_coefficients(sub, qubits=s)


def reduced_measure_exact(g: StabilizerGroup, s: int) -> Fraction:
    """Measure of the marginal on the qubit mask ``s``.

    A single qubit has no multi-party correlation; by convention the result
    is 0 and a :class:`SinglePartyWarning` is issued.
    """
    if s == 0:
        raise DomainError("subset must be nonempty")
    if s & ~full_mask(g.n):
        raise DomainError("subset names qubits outside the group")
    if popcount(s) == 1:
        warnings.warn("single-party marginal: measure defined as 0", SinglePartyWarning, stacklevel=2)
        return Fraction(0)
    return expansion_measure_exact(reduced_expansion(g, s))


def reduced_measure(g: StabilizerGroup, s: int) -> float:
    return float(reduced_measure_exact(g, s))


def expansion_dense(ce: CumulantExpansion) -> np.ndarray:
    """Dense cumulant ``2**-n sum beta_M M`` on the expansion's qubits."""
    qubits = indices_from_mask(ce.qubits)
    d = 1 << len(qubits)
    acc = np.zeros((d, d), dtype=complex)
    for a, m in enumerate_elements(ce.group):
        if ce.beta[a]:
            acc += ce.beta[a] * pauli_dense(m, qubits)
    return acc / d


MAX_CHECK_QUBITS = 8


def dense_measure(g: StabilizerGroup, s: int | None = None) -> float:
    """Correlation measure of the stabilizer state (or its marginal on ``s``) via the dense backend."""
    if g.n > MAX_CHECK_QUBITS:
        raise ResourceError(f"dense cross-check limited to {MAX_CHECK_QUBITS} qubits", limit=MAX_CHECK_QUBITS)
    rho = dense_from_stabilizer(g)
    if s is not None and s != full_mask(g.n):
        if popcount(s) == 1:
            return 0.0
        rho = partial_trace(rho, s)
    return correlation_measure(rho)


# ----------------------------------------------------------------------------
# random groups


def random_stabilizer_group(n: int, seed=None, k: int | None = None) -> StabilizerGroup:
    """Random independent commuting Hermitian generators with random signs."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    k = n if k is None else k
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    gens: list[PauliOperator] = []
    rows: list[int] = []
    while len(gens) < k:
        x = int(rng.integers(0, 1 << n))
        z = int(rng.integers(0, 1 << n))
        if x == 0 and z == 0:
            continue
        # Hermitian letter-form operator: phase +-1
        p = PauliOperator(n, x, z, 2 * int(rng.integers(0, 2)))
        if not all(p.commutes(q) for q in gens):
            continue
        if _gf2_rank(rows + [x | (z << n)]) < len(rows) + 1:
            continue
        gens.append(p)
        rows.append(x | (z << n))
    return validate_stabilizer(gens)


# linear three-qubit cluster generators, locally equivalent to GHZ3
CLUSTER3_GENERATORS = ("XZI", "ZXZ", "IZX")
GHZ3_CANONICAL_GENERATORS = ("XXX", "ZZI", "IZZ")


def group_from_strings(strings: Sequence[str]) -> StabilizerGroup:
    return validate_stabilizer([parse_pauli(s) for s in strings])
