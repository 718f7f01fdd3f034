"""Black-box match-count oracle over a hidden target string.

The fitness of a query x is the number of positions where x agrees with the
hidden target z, so the unique optimum is z itself with fitness n. Algorithms
receive EvaluatedPoint handles that expose the fitness but not the bits; the
bit arrays are reachable only through the module-private attribute that the
variation-operator machinery uses. That type boundary, not runtime policing,
is what keeps search code honest.
"""

from __future__ import annotations

from .bitstrings import BitString, match_count, random_bitstring
from .rng import RandomSource


class QueryAfterSolvedError(RuntimeError):
    """Raised when an instance is queried after the optimum was found."""


class PeekDisabledError(RuntimeError):
    """Raised when peek_target is called on a non-test instance."""


class QueryLedger:
    """Counts queries and records whether the optimum has been evaluated."""

    __slots__ = ("query_count", "solved", "best_fitness")

    def __init__(self) -> None:
        self.query_count = 0
        self.solved = False
        self.best_fitness = -1


class EvaluatedPoint:
    """Opaque handle to one evaluated search point.

    fitness and point_id are public; the bits stay private to the package.
    """

    __slots__ = ("point_id", "fitness", "_bits")

    def __init__(self, point_id: int, fitness: int, bits: BitString):
        self.point_id = point_id
        self.fitness = fitness
        self._bits = bits

    def __repr__(self) -> str:
        return f"EvaluatedPoint(id={self.point_id}, fitness={self.fitness})"


class OneMaxInstance:
    """One hidden-target instance plus its query ledger."""

    def __init__(
        self,
        n: int | None = None,
        *,
        target: BitString | None = None,
        rng: RandomSource | None = None,
        allow_peek: bool = False,
    ):
        if target is not None:
            if n is not None and n != len(target):
                raise ValueError("n disagrees with target length")
            self._target = target
        else:
            if n is None or rng is None:
                raise ValueError("need either an explicit target or n plus rng")
            if n < 1:
                raise ValueError("n must be at least 1")
            self._target = random_bitstring(n, rng)
        self._allow_peek = allow_peek
        self._ledger = QueryLedger()
        self._next_id = 0

    @property
    def n(self) -> int:
        return len(self._target)

    @property
    def query_count(self) -> int:
        return self._ledger.query_count

    @property
    def solved(self) -> bool:
        return self._ledger.solved

    @property
    def best_fitness(self) -> int:
        return self._ledger.best_fitness

    def query(self, x: BitString) -> EvaluatedPoint:
        if self._ledger.solved:
            raise QueryAfterSolvedError("instance already solved")
        if len(x) != self.n:
            raise ValueError(f"query length {len(x)} != instance length {self.n}")
        f = match_count(x, self._target)
        ledger = self._ledger
        ledger.query_count += 1
        if f > ledger.best_fitness:
            ledger.best_fitness = f
        if f == self.n:
            ledger.solved = True
        point = EvaluatedPoint(self._next_id, f, x)
        self._next_id += 1
        return point

    def peek_target(self) -> BitString:
        """Test-only access to the hidden target; disabled by default."""
        if not self._allow_peek:
            raise PeekDisabledError("peek_target is disabled on this instance")
        return self._target


def new_instance(
    n: int | None = None,
    *,
    target: BitString | None = None,
    rng: RandomSource | None = None,
    allow_peek: bool = False,
) -> OneMaxInstance:
    return OneMaxInstance(n, target=target, rng=rng, allow_peek=allow_peek)


def fitness(point: EvaluatedPoint) -> int:
    return point.fitness
