from math import factorial

import pytest
from hypothesis import given, strategies as st

from oracles import bell, set_partitions
from qcumulant.errors import DomainError, ResourceError
from qcumulant.partitions import (
    SetPartition,
    bell_number,
    enumerate_partitions,
    enumerate_proper_partitions,
    full_mask,
    indices_from_mask,
    mask_from_indices,
    mobius_weight,
    pseudo_coefficient,
    restricted_growth_strings,
)


@pytest.mark.parametrize("n", range(1, 11))
def test_partition_count_is_bell_number(n):
    assert sum(1 for _ in enumerate_partitions(full_mask(n))) == bell(n) == bell_number(n)


def test_bell_values():
    assert [bell_number(n) for n in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("n", range(1, 8))
def test_matches_recursive_oracle(n):
    ours = {tuple(sorted(p.blocks)) for p in enumerate_partitions(full_mask(n))}
    ref = {tuple(sorted(mask_from_indices(b) for b in p)) for p in set_partitions(range(n))}
    assert ours == ref


def test_sparse_ground_set():
    parts = list(enumerate_partitions(0b10100))
    assert {p.blocks for p in parts} == {(0b10100,), (0b00100, 0b10000)}


def test_proper_partitions_drop_trivial():
    n = 4
    props = list(enumerate_proper_partitions(full_mask(n)))
    assert len(props) == bell(n) - 1
    assert all(len(p.blocks) >= 2 for p in props)


def test_rgs_order_is_deterministic():
    assert list(restricted_growth_strings(3)) == [
        (0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)
    ]


def test_blocks_cover_and_are_disjoint():
    for p in enumerate_partitions(full_mask(5)):
        acc = 0
        for b in p.blocks:
            assert b and not acc & b
            acc |= b
        assert acc == full_mask(5)


def test_coefficients():
    assert [pseudo_coefficient(m) for m in (2, 3, 4)] == [1, -2, 6]
    assert [mobius_weight(m) for m in (1, 2, 3)] == [1, -1, 2]
    with pytest.raises(DomainError):
        pseudo_coefficient(1)


@pytest.mark.parametrize("n", range(1, 11))
def test_mobius_identity(n):
    # sum over all partitions of (-1)^(M-1)(M-1)! is 1 for n = 1 and 0 beyond
    total = sum(mobius_weight(len(p.blocks)) for p in enumerate_partitions(full_mask(n)))
    assert total == (1 if n == 1 else 0)


def test_guards():
    with pytest.raises(DomainError):
        list(enumerate_partitions(0))
    with pytest.raises(ResourceError):
        list(enumerate_partitions(full_mask(15)))


def test_setpartition_validation():
    with pytest.raises(DomainError):
        SetPartition((0b011, 0b110), 0b111)
    with pytest.raises(DomainError):
        SetPartition((0b001,), 0b011)


@given(st.sets(st.integers(0, 31), max_size=12))
def test_mask_roundtrip(idx):
    assert set(indices_from_mask(mask_from_indices(idx))) == idx


@given(st.integers(1, 7))
def test_stirling_sum_matches_enumeration(n):
    counts = {}
    for p in enumerate_partitions(full_mask(n)):
        counts[len(p.blocks)] = counts.get(len(p.blocks), 0) + 1
    # Stirling numbers of the second kind from the explicit formula
    for k, c in counts.items():
        assert c == sum((-1) ** j * factorial(k) // (factorial(j) * factorial(k - j)) * (k - j) ** n
                        for j in range(k + 1)) // factorial(k)
