"""Canonical k-ary unbiased variation operators.

Every unbiased operator of arity k factors through one canonical recipe:
partition the positions [1..n] into 2^(k-1) groups by which of the arguments
2..k disagree with argument 1 there, pick how many positions to flip in each
group as a function of the group sizes only, then flip a uniformly chosen
subset of that size inside each group. All operators in this module are
expressed as such size-to-count mappings plus the shared applicator, which is
what makes their unbiasedness checkable once and for all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bitstrings import BitString
from .onemax import EvaluatedPoint
from .rng import RandomSource

SizeMapping = Callable[[tuple[int, ...], RandomSource], tuple[int, ...]]


class OperatorContractError(ValueError):
    """A size-to-count mapping asked for an impossible flip count."""


@dataclass(frozen=True)
class OperatorSpec:
    """An unbiased operator in canonical form.

    mapping receives the group sizes (n_0, ..., n_{2^(k-1)-1}) and must return
    flip counts (d_0, ...) with 0 <= d_j <= n_j. randomized marks mappings
    that consume randomness, e.g. binomial flip counts.
    """

    name: str
    arity: int
    mapping: SizeMapping = field(repr=False)
    randomized: bool = False


class GroupPartition:
    """Positions of [0..n) grouped by their disagreement pattern.

    Group index j encodes, bit (t-2) of j, whether argument t disagrees with
    argument 1 at the position. Group 0 is where all arguments agree.
    """

    __slots__ = ("arity", "n", "group_ids", "sizes", "_order", "_starts")

    def __init__(self, arity: int, group_ids: np.ndarray):
        self.arity = arity
        self.n = group_ids.size
        self.group_ids = group_ids
        n_groups = 1 << (arity - 1)
        self.sizes = np.bincount(group_ids, minlength=n_groups)
        self._order = np.argsort(group_ids, kind="stable")
        self._starts = np.searchsorted(group_ids[self._order], np.arange(n_groups + 1))

    def positions(self, j: int) -> np.ndarray:
        """0-indexed positions that fall in group j."""
        return self._order[self._starts[j] : self._starts[j + 1]]

    def singleton_groups(self) -> list[int]:
        """Nonzero group indices that contain exactly one position."""
        return [j for j in range(1, self.sizes.size) if self.sizes[j] == 1]


def _bits_of(arg: EvaluatedPoint | BitString) -> np.ndarray:
    if isinstance(arg, EvaluatedPoint):
        return arg._bits.bits()
    return arg.bits()


def partition_groups(args: Sequence[EvaluatedPoint | BitString]) -> GroupPartition:
    k = len(args)
    if k < 1:
        raise ValueError("need at least one argument")
    base = _bits_of(args[0])
    ids = np.zeros(base.size, dtype=np.int16)
    for t in range(1, k):
        other = _bits_of(args[t])
        if other.size != base.size:
            raise ValueError("argument length mismatch")
        ids |= (base != other).astype(np.int16) << (t - 1)
    return GroupPartition(k, ids)


def _uniform_subset(rng: RandomSource, pool: np.ndarray, d: int) -> np.ndarray:
    """Uniform d-subset of pool via a partial Fisher-Yates pass."""
    m = pool.size
    if d == m:
        return pool
    picked = pool.copy()
    gen = rng.generator
    for i in range(d):
        j = int(gen.integers(i, m))
        picked[i], picked[j] = picked[j], picked[i]
    return picked[:d]


def apply_operator(
    spec: OperatorSpec,
    args: Sequence[EvaluatedPoint | BitString],
    rng: RandomSource,
) -> BitString:
    """Run spec on args: map group sizes to flip counts, flip a random subset.

    Returns the resulting bit string; querying it is the caller's business.
    """
    if len(args) != spec.arity:
        raise ValueError(f"{spec.name} has arity {spec.arity}, got {len(args)} args")
    part = partition_groups(args)
    counts = spec.mapping(tuple(int(s) for s in part.sizes), rng)
    if len(counts) != part.sizes.size:
        raise OperatorContractError(
            f"{spec.name}: mapping returned {len(counts)} counts "
            f"for {part.sizes.size} groups"
        )
    out = _bits_of(args[0]).copy()
    for j, d in enumerate(counts):
        nj = int(part.sizes[j])
        if not 0 <= d <= nj:
            raise OperatorContractError(
                f"{spec.name}: d_{j}={d} outside [0..{nj}]"
            )
        if d == 0:
            continue
        out[_uniform_subset(rng, part.positions(j), d)] ^= 1
    return BitString._wrap(out)


# Catalog. Mappings are tiny closures over their parameters; names describe
# behavior. Group index reminders for arity 3: 1 = only argument 2 differs,
# 2 = only argument 3 differs, 3 = both differ.


def _constant_counts(template: Sequence[int | None]) -> SizeMapping:
    # None entries mean "the full group size".
    def mapping(sizes: tuple[int, ...], rng: RandomSource) -> tuple[int, ...]:
        return tuple(
            sizes[j] if want is None else want for j, want in enumerate(template)
        )

    return mapping


single_bit_mutation = OperatorSpec(
    "single_bit_mutation", 1, _constant_counts([1])
)

inversion = OperatorSpec("inversion", 1, _constant_counts([None]))


def _standard_mutation_mapping(sizes: tuple[int, ...], rng: RandomSource):
    n = sizes[0]
    return (int(rng.generator.binomial(n, 1.0 / n)),)


standard_bit_mutation = OperatorSpec(
    "standard_bit_mutation", 1, _standard_mutation_mapping, randomized=True
)


def _uniform_crossover_mapping(sizes: tuple[int, ...], rng: RandomSource):
    gen = rng.generator
    return (int(gen.binomial(sizes[0], 0.5)), int(gen.binomial(sizes[1], 0.5)))


uniform_crossover = OperatorSpec(
    "uniform_crossover", 2, _uniform_crossover_mapping, randomized=True
)

flip_one_differing = OperatorSpec("flip_one_differing", 2, _constant_counts([0, 1]))


def flip_where_same(count: int) -> OperatorSpec:
    """Flip exactly `count` positions where both arguments agree (strict)."""

    def mapping(sizes: tuple[int, ...], rng: RandomSource) -> tuple[int, ...]:
        return (count, 0)

    return OperatorSpec(f"flip_{count}_where_same", 2, mapping)


def flip_same_capped(limit: int) -> OperatorSpec:
    """Flip min(limit, n_0) positions where both arguments agree."""

    def mapping(sizes: tuple[int, ...], rng: RandomSource) -> tuple[int, ...]:
        return (min(limit, sizes[0]), 0)

    return OperatorSpec(f"flip_same_capped_{limit}", 2, mapping)


def flip_upper_half(arity: int) -> OperatorSpec:
    """Flip ceil(n_j / 2) positions in every nonzero group, none in group 0."""

    def mapping(sizes: tuple[int, ...], rng: RandomSource) -> tuple[int, ...]:
        return (0,) + tuple((s + 1) // 2 for s in sizes[1:])

    return OperatorSpec(f"flip_upper_half_{arity}ary", arity, mapping)


one_where_equal = OperatorSpec("one_where_equal", 3, _constant_counts([1, 0, 0, 0]))

one_where_second_differs = OperatorSpec(
    "one_where_second_differs", 3, _constant_counts([0, 1, 0, 0])
)

one_where_third_differs = OperatorSpec(
    "one_where_third_differs", 3, _constant_counts([0, 0, 1, 0])
)

two_where_third_differs = OperatorSpec(
    "two_where_third_differs", 3, _constant_counts([0, 0, 2, 0])
)

# Flips everything only-the-second-argument touches plus one position where
# both others differ; the repair step of the arity-3 block solver.
complicated = OperatorSpec("complicated", 3, _constant_counts([0, None, 0, 1]))

# Bitwise xor of all three arguments: flip where exactly one of the other two
# differs from the first.
xor3 = OperatorSpec("xor3", 3, _constant_counts([0, None, None, 0]))


def catalog() -> dict[str, OperatorSpec]:
    """Named ready-to-verify operators, parameterized ones at small sizes."""
    specs = [
        single_bit_mutation,
        inversion,
        standard_bit_mutation,
        uniform_crossover,
        flip_one_differing,
        flip_where_same(1),
        flip_where_same(2),
        flip_where_same(3),
        flip_same_capped(3),
        flip_upper_half(2),
        flip_upper_half(4),
        one_where_equal,
        one_where_second_differs,
        one_where_third_differs,
        two_where_third_differs,
        complicated,
        xor3,
    ]
    return {spec.name: spec for spec in specs}
