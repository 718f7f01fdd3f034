"""Immutable fixed-length bit strings and Hamming arithmetic.

Positions are 1-based in every public interface, matching the usual [1..n]
convention for search points; storage is a 0-indexed numpy array internally.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np


class BitString:
    """An immutable vector over {0, 1} of fixed length >= 1."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = np.array(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("bit string must be one-dimensional")
        if arr.size == 0:
            raise ValueError("bit string length must be at least 1")
        if arr.max(initial=0) > 1:
            raise ValueError("bit string entries must be 0 or 1")
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitString":
        # Fast path for internal callers that hand over a fresh uint8 array.
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        obj._bits = arr
        return obj

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls._wrap(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls._wrap(np.ones(n, dtype=np.uint8))

    @classmethod
    def from01(cls, text: str) -> "BitString":
        """Parse "0110"-style text; position 1 is the leftmost character."""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a 01-string: {text!r}")
        return cls._wrap(np.frombuffer(text.encode(), dtype=np.uint8) - ord("0"))

    def to01(self) -> str:
        return "".join("01"[b] for b in self._bits)

    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the underlying array (0-indexed)."""
        return self._bits

    def xor(self, other: "BitString") -> "BitString":
        _check_same_length(self, other)
        return BitString._wrap(self._bits ^ other._bits)

    def popcount(self) -> int:
        return int(np.count_nonzero(self._bits))

    def __len__(self) -> int:
        return self._bits.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._bits.size == other._bits.size and bool(
            np.array_equal(self._bits, other._bits)
        )

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __repr__(self) -> str:
        return f"BitString({self.to01()!r})"


def _check_same_length(a: BitString, b: BitString) -> None:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")


def hamming_distance(a: BitString, b: BitString) -> int:
    _check_same_length(a, b)
    return int(np.count_nonzero(a.bits() != b.bits()))


def match_count(a: BitString, b: BitString) -> int:
    """Number of positions where a and b agree."""
    _check_same_length(a, b)
    return len(a) - hamming_distance(a, b)


def flip_at(a: BitString, positions: Iterable[int]) -> BitString:
    """Flip the given 1-based positions; duplicates and out-of-range error."""
    pos = list(positions)
    if len(set(pos)) != len(pos):
        raise ValueError("duplicate flip positions")
    out = a.bits().copy()
    for p in pos:
        if not 1 <= p <= out.size:
            raise ValueError(f"position {p} outside [1..{out.size}]")
        out[p - 1] ^= 1
    return BitString._wrap(out)


def random_bitstring(n: int, rng) -> BitString:
    """Uniform random string of length n >= 1 drawn from rng."""
    if n < 1:
        raise ValueError("length must be at least 1")
    return BitString._wrap(rng.generator.integers(0, 2, size=n, dtype=np.uint8))


def packed_value(a: BitString) -> int:
    """Pack into an int, position 1 as the least significant bit (n <= 63)."""
    if len(a) > 63:
        raise ValueError("packed form supports length <= 63")
    return int.from_bytes(np.packbits(a.bits(), bitorder="little").tobytes(), "little")


def from_packed(value: int, n: int) -> BitString:
    if not 0 <= value < (1 << n):
        raise ValueError(f"value {value} does not fit in {n} bits")
    raw = np.frombuffer(value.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return BitString._wrap(np.unpackbits(raw, count=n, bitorder="little"))
