"""Virtual coordinate systems over an undecided block of positions.

A block of l agreeing positions of (x, y) is first flipped wholesale to mark
it (y0), then k-1 auxiliary points are built by halving every nonzero
disagreement group. Relative to (x, y1, ..., y_{k-1}) each block position
lands alone in its own nonzero group, so a k-ary operator can address block
positions individually through length-l coordinate words while staying
unbiased. Fitness differences caused by bits outside the block collapse into
one additive offset, so each probe reveals the match count within the block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstrings import BitString
from .onemax import EvaluatedPoint, OneMaxInstance
from .operators import (
    OperatorSpec,
    apply_operator,
    flip_upper_half,
    flip_where_same,
    partition_groups,
)
from .rng import RandomSource


def choose_block(
    inst: OneMaxInstance,
    x: EvaluatedPoint,
    y: EvaluatedPoint,
    block_size: int,
    rng: RandomSource,
) -> EvaluatedPoint:
    """Flip block_size agreeing positions of (x, y); the flipped set is the block."""
    agreeing = int(partition_groups([x, y]).sizes[0])
    if block_size < 1 or block_size > agreeing:
        raise ValueError(
            f"block size {block_size} not in [1..{agreeing}] agreeing positions"
        )
    bits = apply_operator(flip_where_same(block_size), [x, y], rng)
    return inst.query(bits)


def build_coordinates(
    inst: OneMaxInstance,
    x: EvaluatedPoint,
    y0: EvaluatedPoint,
    arity: int,
    rng: RandomSource,
) -> tuple[EvaluatedPoint, ...]:
    """Query y_1..y_{arity-1}, each halving the groups of (x, y0, ..., y_{i-1}).

    Stops early if a query hits the optimum; the caller must check
    inst.solved before using the result.
    """
    coords: list[EvaluatedPoint] = []
    for i in range(1, arity):
        args = [x, y0, *coords]
        bits = apply_operator(flip_upper_half(i + 1), args, rng)
        point = inst.query(bits)
        if inst.solved:
            return tuple(coords)
        coords.append(point)
    return tuple(coords)


@dataclass
class CoordinateFrame:
    """A built coordinate system for one block.

    coord_to_group[t] is the nonzero singleton group index (relative to
    (x, y1, ..., y_{k-1})) holding block coordinate t; group_to_coord inverts
    it with -1 for non-singleton groups. delta is the count of matches the
    frame's probes score outside the block, so fitness - delta is the match
    count within the block.
    """

    inst: OneMaxInstance
    x: EvaluatedPoint
    y0: EvaluatedPoint
    coords: tuple[EvaluatedPoint, ...]
    block_size: int
    arity: int
    coord_to_group: tuple[int, ...]
    group_to_coord: tuple[int, ...]
    delta: int

    def query_virtual(self, w: BitString, rng: RandomSource) -> EvaluatedPoint:
        """Query the block point addressed by coordinate word w."""
        if len(w) != self.block_size:
            raise ValueError(f"coordinate word length {len(w)} != {self.block_size}")
        op = _virtual_query_operator(w, self.block_size, self.arity)
        bits = apply_operator(op, [self.x, *self.coords], rng)
        return self.inst.query(bits)

    def effective_fitness(self, point: EvaluatedPoint) -> int:
        """Match count within the block for a point this frame produced."""
        eff = point.fitness - self.delta
        if not 0 <= eff <= self.block_size:
            raise ValueError(
                f"effective fitness {eff} outside [0..{self.block_size}]; "
                "point does not belong to this frame"
            )
        return eff

    def seed_constraints(self) -> list[tuple[BitString, int]]:
        """Free (word, in-block matches) pairs for every already queried point."""
        l = self.block_size
        seeds = [
            (BitString.zeros(l), self.effective_fitness(self.x)),
            (BitString.ones(l), self.effective_fitness(self.y0)),
        ]
        groups = np.array(self.coord_to_group)
        for i, point in enumerate(self.coords, start=1):
            word = ((groups >> (i - 1)) & 1).astype(np.uint8)
            seeds.append((BitString(word), self.effective_fitness(point)))
        return seeds

    def known_block_optimum(self) -> BitString | None:
        """The optimal word, if x or y0 already determines it."""
        if self.effective_fitness(self.x) == self.block_size:
            return BitString.zeros(self.block_size)
        if self.effective_fitness(self.y0) == self.block_size:
            return BitString.ones(self.block_size)
        return None


def _virtual_query_operator(w: BitString, block_size: int, arity: int) -> OperatorSpec:
    word = tuple(int(b) for b in w.bits())

    def mapping(sizes: tuple[int, ...], rng: RandomSource) -> tuple[int, ...]:
        counts = [0] * len(sizes)
        t = 0
        for j in range(1, len(sizes)):
            if sizes[j] == 1:
                if t == len(word):
                    raise ValueError("more singleton groups than coordinates")
                counts[j] = word[t]
                t += 1
        if t != len(word):
            raise ValueError(f"found {t} singleton groups for {len(word)} coordinates")
        return tuple(counts)

    return OperatorSpec(f"virtual_query_{arity}ary", arity, mapping)


def build_frame(
    inst: OneMaxInstance,
    x: EvaluatedPoint,
    y: EvaluatedPoint,
    block_size: int,
    arity: int,
    rng: RandomSource,
) -> CoordinateFrame | None:
    """Choose a block and build its coordinate system, k queries in total.

    Returns None if a query hit the optimum along the way.
    """
    if arity < 2:
        raise ValueError("arity must be at least 2")
    if block_size < 2:
        raise ValueError("coordinate frames need block size >= 2")
    if not (1 << (arity - 2)) <= block_size <= (1 << (arity - 1)) - 1:
        raise ValueError(
            f"block size {block_size} needs arity "
            f"{1 + max(1, (block_size).bit_length())}, got {arity}"
        )
    y0 = choose_block(inst, x, y, block_size, rng)
    if inst.solved:
        return None
    coords = build_coordinates(inst, x, y0, arity, rng)
    if inst.solved:
        return None

    part = partition_groups([x, *coords])
    singles = part.singleton_groups()
    if len(singles) != block_size:
        raise AssertionError(
            f"coordinate build left {len(singles)} singleton groups, "
            f"wanted {block_size}"
        )
    occupied = part.sizes[1:].sum()
    if occupied != block_size:
        raise AssertionError("nonzero groups hold positions outside the block")
    group_to_coord = [-1] * (1 << (arity - 1))
    for t, j in enumerate(singles):
        group_to_coord[j] = t
    total = x.fitness + y0.fitness - block_size
    if total % 2:
        raise AssertionError("parity violation in out-of-block match count")
    return CoordinateFrame(
        inst=inst,
        x=x,
        y0=y0,
        coords=coords,
        block_size=block_size,
        arity=arity,
        coord_to_group=tuple(singles),
        group_to_coord=tuple(group_to_coord),
        delta=total // 2,
    )
