import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import pauli_string_dense, stabilizer_projector
from qcumulant.cumulant import correlation_measure, cumulant
from qcumulant.dense_state import DensityMatrix, partial_trace
from qcumulant.errors import DomainError, ParseError, ResourceError
from qcumulant.partitions import full_mask, mask_from_indices
from qcumulant.stabilizer import (
    CLUSTER3_GENERATORS,
    GHZ3_CANONICAL_GENERATORS,
    AnticommutingGeneratorsError,
    DependentGeneratorsError,
    NonHermitianGeneratorError,
    PauliOperator,
    SinglePartyWarning,
    StabilizerGroup,
    cumulant_coefficients,
    dense_from_stabilizer,
    dense_measure,
    enumerate_elements,
    expansion_dense,
    format_pauli,
    gray_code,
    group_from_strings,
    parse_pauli,
    parse_stabilizer,
    pauli_dense,
    random_stabilizer_group,
    reduced_expansion,
    reduced_measure,
    reduced_stabilizer,
    stabilizer_measure,
    stabilizer_measure_exact,
    stabilizer_spectrum,
    validate_stabilizer,
)
from qcumulant.states import bell_state

paulis = st.integers(1, 4).flatmap(
    lambda n: st.builds(
        PauliOperator, st.just(n), st.integers(0, 2 ** n - 1), st.integers(0, 2 ** n - 1), st.integers(0, 3)
    )
)
seeds = st.integers(0, 2 ** 32 - 1)


def cluster3():
    return group_from_strings(CLUSTER3_GENERATORS)


# ---------------------------------------------------------------- Pauli algebra


def test_single_qubit_products():
    x, y, z = parse_pauli("X"), parse_pauli("Y"), parse_pauli("Z")
    assert format_pauli(x * x) == "+I"
    assert format_pauli(x * z) == "-iY"
    assert format_pauli(z * x) == "+iY"
    assert format_pauli(x * y) == "+iZ"
    assert format_pauli(y * y) == "+I"


def test_multiply_size_mismatch():
    with pytest.raises(DomainError):
        parse_pauli("X") * parse_pauli("XX")


def test_associativity_against_dense():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        p, q, r = (PauliOperator(n, int(rng.integers(0, 2 ** n)), int(rng.integers(0, 2 ** n)),
                                 int(rng.integers(0, 4))) for _ in range(3))
        left, right = (p * q) * r, p * (q * r)
        assert left == right
        assert np.allclose(left.to_dense(), p.to_dense() @ q.to_dense() @ r.to_dense())


@given(paulis, paulis)
def test_product_matches_dense(p, q):
    if p.n != q.n:
        return
    assert np.allclose((p * q).to_dense(), p.to_dense() @ q.to_dense())
    assert p.commutes(q) == np.allclose(p.to_dense() @ q.to_dense(), q.to_dense() @ p.to_dense())


@given(paulis)
def test_hermiticity_predicate(p):
    d = p.to_dense()
    assert p.is_hermitian() == np.allclose(d, d.conj().T)


@given(paulis)
def test_format_parse_roundtrip(p):
    assert parse_pauli(format_pauli(p)) == p


def test_parse_examples():
    p = parse_pauli("+XZI")
    assert (p.x, p.z, p.phase_exp) == (0b001, 0b010, 0)
    q = parse_pauli("-ZZ")
    assert (q.x, q.z, q.phase) == (0, 0b11, -1)
    assert parse_pauli("-iY").phase == -1j
    assert np.allclose(pauli_dense(parse_pauli("XZ")), pauli_string_dense("XZ"))


@pytest.mark.parametrize("text,column", [("XQZ", 1), ("+", 1), ("-iXa", 3), ("", 0)])
def test_parse_errors_report_column(text, column):
    with pytest.raises(ParseError) as info:
        parse_pauli(text)
    assert info.value.column == column


def test_pauli_dense_on_subset():
    p = parse_pauli("XIZ")
    assert np.allclose(pauli_dense(p, [0, 2]), pauli_string_dense("XZ"))
    with pytest.raises(DomainError):
        pauli_dense(p, [0, 1])


# ---------------------------------------------------------------- validation and enumeration


def test_validation():
    g = cluster3()
    assert g.k == 3 and g.n == 3
    with pytest.raises(AnticommutingGeneratorsError):
        group_from_strings(["X", "Z"])
    with pytest.raises(DependentGeneratorsError):
        group_from_strings(["XX", "XX"])
    with pytest.raises(DependentGeneratorsError):
        group_from_strings(["XX", "ZZ", "-YY"])
    with pytest.raises(NonHermitianGeneratorError):
        validate_stabilizer([parse_pauli("+iZ")])
    with pytest.raises(DomainError):
        validate_stabilizer([])


def test_parse_stabilizer_file_format():
    g = parse_stabilizer("# comment\nXX\n\n-ZZ\n")
    assert [format_pauli(p) for p in g.generators] == ["+XX", "-ZZ"]
    with pytest.raises(ParseError):
        parse_stabilizer("XX\nZZZ\n")
    with pytest.raises(ParseError):
        parse_stabilizer("# nothing\n")


def test_gray_code_visits_all_once():
    codes = [c for c, _ in gray_code(5)]
    assert sorted(codes) == list(range(32))
    assert all(bin(a ^ b).count("1") == 1 for a, b in zip(codes, codes[1:]))


def test_enumeration():
    els = enumerate_elements(group_from_strings(["Z"]))
    assert sorted(format_pauli(m) for _, m in els) == ["+I", "+Z"]
    g = cluster3()
    els = enumerate_elements(g)
    assert len(els) == 8
    for a, m in els:
        assert m == g.element(a)
        assert m.phase_exp in (0, 2)


@given(seeds, st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_random_group_elements_are_hermitian_and_distinct(seed, n):
    g = random_stabilizer_group(n, seed)
    els = enumerate_elements(g)
    assert all(m.is_hermitian() for _, m in els)
    assert len({m.pattern for _, m in els}) == 2 ** n


# ---------------------------------------------------------------- dense rendering


def test_dense_examples():
    z = dense_from_stabilizer(group_from_strings(["Z"]))
    assert np.allclose(z.data, np.diag([1, 0]))
    bell = dense_from_stabilizer(group_from_strings(["XX", "ZZ"]))
    assert np.max(np.abs(bell.data - bell_state().density().data)) <= 1e-12
    assert correlation_measure(dense_from_stabilizer(cluster3())) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(DomainError):
        dense_from_stabilizer(group_from_strings(["ZZ"]))


@given(seeds, st.integers(1, 5))
@settings(max_examples=30, deadline=None)
def test_dense_is_rank_one_projector(seed, n):
    g = random_stabilizer_group(n, seed)
    rho = dense_from_stabilizer(g).data
    assert abs(np.trace(rho) - 1) <= 1e-9
    assert np.max(np.abs(rho @ rho - rho)) <= 1e-9
    ref = stabilizer_projector([format_pauli(p) for p in g.generators])
    assert np.allclose(rho, ref, atol=1e-12)


def test_reduced_stabilizer_examples():
    g = cluster3()
    red12 = reduced_stabilizer(g, 0b011)
    assert sorted(format_pauli(m) for m in red12) == ["+III", "+XZI"]
    assert [format_pauli(m) for m in reduced_stabilizer(g, 0b001)] == ["+III"]
    rho = dense_from_stabilizer(g)
    ref = (np.eye(4) + pauli_string_dense("XZ")) / 4
    assert np.allclose(partial_trace(rho, 0b011).data, ref, atol=1e-12)
    assert np.allclose(partial_trace(rho, 0b001).data, np.eye(2) / 2, atol=1e-12)


def test_reduced_stabilizer_dense_crosscheck():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = random_stabilizer_group(5, rng)
        s = int(rng.integers(1, 32))
        qubits = [i for i in range(5) if s >> i & 1]
        els = reduced_stabilizer(g, s)
        assert all(not (m.support & ~s) for m in els)
        render = sum(pauli_dense(m, qubits) for m in els) / 2 ** len(qubits)
        assert np.max(np.abs(render - partial_trace(dense_from_stabilizer(g), s).data)) <= 1e-10


# ---------------------------------------------------------------- cumulant coefficients


def test_cluster3_beta():
    g = cluster3()
    ce = cumulant_coefficients(g)
    # exponent bit j selects generator j+1
    expected = {0b010: 1, 0b011: 1, 0b110: 1, 0b111: 1}
    assert ce.nonzero() == expected
    assert stabilizer_measure_exact(g) == Fraction(1, 2)


def test_bell_expansion_matches_dense():
    g = group_from_strings(["XX", "ZZ"])
    ce = cumulant_coefficients(g)
    assert np.max(np.abs(expansion_dense(ce) - cumulant(bell_state()).data)) <= 1e-10
    assert stabilizer_measure(g) == pytest.approx(0.75, abs=1e-15)
    assert stabilizer_measure(group_from_strings(GHZ3_CANONICAL_GENERATORS)) == pytest.approx(0.5, abs=1e-15)


@given(seeds, st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_beta_routes_agree(seed, n):
    g = random_stabilizer_group(n, seed)
    fast = cumulant_coefficients(g)
    slow = cumulant_coefficients(g, method="partitions", skip_partial_support=False)
    conn_full = cumulant_coefficients(g, skip_partial_support=False)
    assert fast.beta == slow.beta == conn_full.beta
    assert fast.beta[0] == 0


@given(seeds, st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_expansion_matches_dense_cumulant(seed, n):
    g = random_stabilizer_group(n, seed)
    ce = cumulant_coefficients(g)
    dense_c = cumulant(dense_from_stabilizer(g)).data
    assert np.max(np.abs(expansion_dense(ce) - dense_c)) <= 1e-10
    spec = stabilizer_spectrum(ce)
    assert sum(spec) == 0
    ref = np.sort(np.linalg.eigvalsh(dense_c))
    assert np.allclose(np.sort([float(v) for v in spec]), ref, atol=1e-9)


def test_zero_expansion_spectrum():
    # a product state has a zero cumulant, hence a zero spectrum
    ce = cumulant_coefficients(group_from_strings(["ZI", "IZ"]))
    assert all(v == 0 for v in stabilizer_spectrum(ce))


def test_dense_equivalence_on_random_groups():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        g = random_stabilizer_group(int(rng.integers(2, 7)), rng)
        assert abs(stabilizer_measure(g) - dense_measure(g)) <= 1e-9


def test_coefficient_guards():
    with pytest.raises(ResourceError):
        cumulant_coefficients(random_stabilizer_group(13, 0))
    with pytest.raises(DomainError):
        cumulant_coefficients(cluster3(), method="magic")
    with pytest.raises(ResourceError):
        dense_measure(random_stabilizer_group(9, 0))


# ---------------------------------------------------------------- reduced measure


def test_reduced_measure_examples():
    g = cluster3()
    rho12 = (np.eye(4) + pauli_string_dense("XZ")) / 4
    assert reduced_measure(g, 0b011) == pytest.approx(correlation_measure(DensityMatrix(rho12, (2, 2))), abs=1e-12)
    assert reduced_measure(g, 0b111) == stabilizer_measure(g)
    with pytest.warns(SinglePartyWarning):
        assert reduced_measure(g, 0b100) == 0
    with pytest.raises(DomainError):
        reduced_measure(g, 0)


def test_reduced_measure_matches_dense():
    rng = np.random.default_rng(77)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        g = random_stabilizer_group(n, rng)
        s = int(rng.integers(1, 2 ** n))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SinglePartyWarning)
            exact = reduced_measure(g, s)
        assert abs(exact - dense_measure(g, s)) <= 1e-9
        ce = reduced_expansion(g, s) if bin(s).count("1") > 1 else None
        if ce is not None:
            assert ce.multiplicity == 2 ** (ce.n_qubits - ce.group.k)


def test_mixed_group_expansion():
    # the subgroup of a pure group restricted to s is a valid k < |s| group
    g = cluster3()
    sub = StabilizerGroup(3, tuple(m for m in reduced_stabilizer(g, 0b101) if not m.is_identity()))
    assert sub.k == 1
    ce = cumulant_coefficients(sub, qubits=0b101)
    assert ce.multiplicity == 2
    assert mask_from_indices([0, 2]) == ce.qubits == 0b101
    assert full_mask(3) != ce.qubits
