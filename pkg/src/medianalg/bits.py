"""Bitmask helpers; carrier subsets are plain ints with bit i = element i."""

from typing import Iterable, Iterator

# An ElementSet is a bitmask over {0..n-1}.
ElementSet = int


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def ids_of(mask: int) -> list[int]:
    return list(iter_bits(mask))


def full_mask(n: int) -> int:
    return (1 << n) - 1


def lowest_bit(mask: int) -> int:
    """Smallest element id in a nonempty mask."""
    return (mask & -mask).bit_length() - 1
