"""Integer-backed bitsets representing sets of dense state indices."""

from __future__ import annotations

from typing import Iterable, Iterator


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit indices of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    """Bitset with exactly the given indices set."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def is_subset(a: int, b: int) -> bool:
    return a | b == b


def subsets(mask: int) -> Iterator[int]:
    """Yield every nonempty subset of ``mask`` in increasing numeric order."""
    s = 0
    while True:
        s = (s - mask) & mask
        if s == 0:
            return
        yield s
