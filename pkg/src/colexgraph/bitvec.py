"""Bit sequences with rank/select and fixed-width packed integer arrays.

Backing storage is 64-bit words; the rank directory is one cumulative count per
word. ``payload_bits`` reports only the raw encoded bits, so space accounting
can separate content from the auxiliary directories.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np


class BitVector:
    """Immutable bit sequence supporting rank1/select1."""

    __slots__ = ("_length", "_words", "_ranks", "_ones")

    def __init__(self, bits: Iterable[int]):
        bits = list(bits)
        n = len(bits)
        words = np.zeros(n // 64 + 1, dtype=np.uint64)
        for i, b in enumerate(bits):
            if b:
                words[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        ranks = np.zeros(len(words) + 1, dtype=np.int64)
        total = 0
        for w in range(len(words)):
            ranks[w] = total
            total += int(words[w]).bit_count()
        ranks[len(words)] = total
        self._length = n
        self._words = words
        self._ranks = ranks
        self._ones = total

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self._length:
            raise IndexError(i)
        return (int(self._words[i >> 6]) >> (i & 63)) & 1

    @property
    def ones(self) -> int:
        return self._ones

    @property
    def payload_bits(self) -> int:
        return self._length

    @property
    def aux_bits(self) -> int:
        return int(self._ranks.size) * 64

    def rank1(self, i: int) -> int:
        """Number of set bits strictly before position i."""
        if not 0 <= i <= self._length:
            raise IndexError(i)
        w = i >> 6
        partial = int(self._words[w]) & ((1 << (i & 63)) - 1)
        return int(self._ranks[w]) + partial.bit_count()

    def select1(self, k: int) -> int:
        """Position of the k-th set bit (0-based)."""
        if not 0 <= k < self._ones:
            raise IndexError(k)
        lo, hi = 0, len(self._words)
        while lo < hi:
            mid = (lo + hi) // 2
            if int(self._ranks[mid + 1]) <= k:
                lo = mid + 1
            else:
                hi = mid
        word = int(self._words[lo])
        need = k - int(self._ranks[lo])
        pos = lo << 6
        while True:
            if word & 1:
                if need == 0:
                    return pos
                need -= 1
            word >>= 1
            pos += 1

    def to_list(self) -> list[int]:
        return [self[i] for i in range(self._length)]


class PackedArray:
    """Immutable array of unsigned integers stored at a fixed bit width."""

    __slots__ = ("_width", "_length", "_words")

    def __init__(self, width: int, values: Iterable[int]):
        if width < 1 or width > 64:
            raise ValueError("width must be in 1..64")
        values = list(values)
        limit = 1 << width
        total_bits = width * len(values)
        words = np.zeros(total_bits // 64 + 2, dtype=np.uint64)
        for i, v in enumerate(values):
            if not 0 <= v < limit:
                raise ValueError(f"value {v} does not fit in {width} bits")
            bitpos = i * width
            w, off = divmod(bitpos, 64)
            words[w] |= np.uint64((v << off) & 0xFFFFFFFFFFFFFFFF)
            if off + width > 64:
                words[w + 1] |= np.uint64(v >> (64 - off))
        self._width = width
        self._length = len(values)
        self._words = words

    @classmethod
    def from_words(cls, width: int, length: int, raw: bytes) -> "PackedArray":
        pa = cls.__new__(cls)
        pa._width = width
        pa._length = length
        need = width * length // 64 + 2
        words = np.frombuffer(raw, dtype="<u8").copy()
        if words.size < need:
            words = np.concatenate([words, np.zeros(need - words.size, dtype=np.uint64)])
        pa._words = words
        return pa

    @property
    def width(self) -> int:
        return self._width

    def __len__(self) -> int:
        return self._length

    def get(self, i: int) -> int:
        if not 0 <= i < self._length:
            raise IndexError(i)
        bitpos = i * self._width
        w, off = divmod(bitpos, 64)
        value = int(self._words[w]) >> off
        if off + self._width > 64:
            value |= int(self._words[w + 1]) << (64 - off)
        return value & ((1 << self._width) - 1)

    def __iter__(self) -> Iterator[int]:
        return (self.get(i) for i in range(self._length))

    @property
    def payload_bits(self) -> int:
        return self._width * self._length

    def to_bytes(self) -> bytes:
        used_words = (self._width * self._length + 63) // 64
        return self._words[:used_words].astype("<u8").tobytes()


def bisect_left_packed(pa: PackedArray, x: int, lo: int, hi: int) -> int:
    """First index in [lo, hi) whose value is >= x (values non-decreasing)."""
    while lo < hi:
        mid = (lo + hi) // 2
        if pa.get(mid) < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def width_for(max_value: int) -> int:
    """Bit width needed to store values in 0..max_value (at least 1)."""
    return max(1, int(max_value).bit_length())
