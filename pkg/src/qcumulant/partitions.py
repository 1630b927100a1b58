"""Set partitions of party index sets.

Parties are 0-based indices and subsets are plain ``int`` bit masks, bit ``i``
standing for party ``i``. Partitions are generated from restricted growth
strings, which yields blocks already sorted by their smallest element.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator

from .errors import DomainError, ResourceError

MAX_PARTIES = 32
MAX_PARTITION_SIZE = 14


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if not 0 <= i < MAX_PARTIES:
            raise DomainError(f"party index {i} outside 0..{MAX_PARTIES - 1}")
        mask |= 1 << i
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class SetPartition:
    """A split of ``ground_set`` into disjoint nonempty blocks.

    Blocks are stored in canonical order, ascending by smallest element.
    """

    blocks: tuple[int, ...]
    ground_set: int

    def __post_init__(self):
        seen = 0
        prev_low = -1
        for b in self.blocks:
            if b == 0:
                raise DomainError("empty block in partition")
            if b & seen:
                raise DomainError("partition blocks overlap")
            low = lowest_bit(b)
            if low <= prev_low:
                raise DomainError("blocks are not in canonical order")
            prev_low = low
            seen |= b
        if seen != self.ground_set:
            raise DomainError("blocks do not cover the ground set")

    def __len__(self) -> int:
        return len(self.blocks)

    def as_index_sets(self) -> list[tuple[int, ...]]:
        return [indices_from_mask(b) for b in self.blocks]


def _check_ground_set(ground_set: int) -> tuple[int, ...]:
    if ground_set <= 0:
        raise DomainError("ground set must be a nonempty subset mask")
    if ground_set >> MAX_PARTIES:
        raise DomainError(f"ground set uses parties beyond index {MAX_PARTIES - 1}")
    elems = indices_from_mask(ground_set)
    if len(elems) > MAX_PARTITION_SIZE:
        raise ResourceError(
            f"partition enumeration limited to {MAX_PARTITION_SIZE} elements, "
            f"got {len(elems)}",
            limit=MAX_PARTITION_SIZE,
        )
    return elems


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Yield restricted growth strings of length ``n`` in lexicographic order.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``.
    """
    if n <= 0:
        return
    a = [0] * n
    # m[i] = max(a[:i+1])
    m = [0] * n
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_partitions(ground_set: int) -> Iterator[SetPartition]:
    """Yield every set partition of ``ground_set`` exactly once.

    The count equals the Bell number of ``popcount(ground_set)``.
    """
    elems = _check_ground_set(ground_set)
    for rgs in restricted_growth_strings(len(elems)):
        blocks = [0] * (max(rgs) + 1)
        for e, b in zip(elems, rgs):
            blocks[b] |= 1 << e
        yield SetPartition(tuple(blocks), ground_set)


def enumerate_proper_partitions(ground_set: int) -> Iterator[SetPartition]:
    """Partitions with at least two blocks."""
    for p in enumerate_partitions(ground_set):
        if len(p.blocks) >= 2:
            yield p


def pseudo_coefficient(block_count: int) -> int:
    """Weight ``(-1)**M * (M-1)!`` of an ``M``-block term in the pseudo-state."""
    if block_count < 2:
        raise DomainError(f"block_count must be >= 2, got {block_count}")
    return (-1) ** block_count * factorial(block_count - 1)


def mobius_weight(block_count: int) -> int:
    """``(-1)**(M-1) * (M-1)!``, the partition-lattice Moebius function to the top."""
    if block_count < 1:
        raise DomainError(f"block_count must be >= 1, got {block_count}")
    return (-1) ** (block_count - 1) * factorial(block_count - 1)


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
