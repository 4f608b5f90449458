"""The pair-identification game: specification, strategies and exact evaluation.

Values are 1-based (x_1 .. x_d) and pair sets are indexed 1-based in
lexicographic order, so for d = 3 the sets are {1,2}, {1,3}, {2,3}. Bob is
told j and knows the true value is one of the two members of S_j; a round is
won when he names it.

Classical cells are kept as :class:`fractions.Fraction` so that averages such
as 5/6 come out exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import DimensionMismatch, DomainError
from .qubit import EPS_ALG, EPS_NUM, QubitState, helstrom_success

Cell = tuple[int, int]


@dataclass(frozen=True)
class GameSpec:
    d: int
    pair_sets: tuple[tuple[int, int], ...]
    set_distribution: tuple = field(default=())

    def __post_init__(self):
        if self.d < 3:
            raise DomainError(f"d must be at least 3, got {self.d}")
        n_sets = self.d * (self.d - 1) // 2
        sets = tuple(tuple(s) for s in self.pair_sets)
        if len(sets) != n_sets or len(set(sets)) != n_sets:
            raise DomainError(f"expected {n_sets} distinct pair sets")
        for s in sets:
            if len(s) != 2 or s[0] == s[1] or not all(1 <= v <= self.d for v in s):
                raise DomainError(f"bad pair set {s}")
        object.__setattr__(self, "pair_sets", sets)
        dist = tuple(self.set_distribution) or (Fraction(1, n_sets),) * n_sets
        if len(dist) != n_sets or any(w < 0 for w in dist):
            raise DomainError("set_distribution needs one non-negative weight per set")
        if abs(float(sum(dist)) - 1.0) > EPS_NUM:
            raise DomainError("set_distribution must sum to 1")
        object.__setattr__(self, "set_distribution", dist)

    @property
    def n_sets(self) -> int:
        return len(self.pair_sets)

    def pair(self, j: int) -> tuple[int, int]:
        if not 1 <= j <= self.n_sets:
            raise DomainError(f"set index must be in 1..{self.n_sets}, got {j}")
        return self.pair_sets[j - 1]

    def weight(self, j: int):
        return self.set_distribution[j - 1]

    def cells(self) -> list[Cell]:
        """All valid (i, j) cells, ordered by j and then by i."""
        return [(i, j) for j, s in enumerate(self.pair_sets, start=1) for i in s]

    def cell_probability(self, i: int, j: int):
        """Probability that the Manager hands out exactly (x_i, j)."""
        return self.weight(j) / 2


def canonical_spec(d: int) -> GameSpec:
    """Lexicographically ordered pair sets with a uniform choice of j."""
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    return GameSpec(d, tuple(itertools.combinations(range(1, d + 1), 2)))


def allowed_sets(spec: GameSpec, i: int) -> list[int]:
    """Indices j whose set contains value i; there are always d - 1 of them."""
    if not 1 <= i <= spec.d:
        raise DomainError(f"value index must be in 1..{spec.d}, got {i}")
    return [j for j, s in enumerate(spec.pair_sets, start=1) if i in s]


@dataclass(frozen=True)
class ClassicalStrategy:
    """Alice sends ``encoding[i - 1]`` (a level in 0..levels-1) for value x_i.

    Bob's decoder is induced: if the two members of S_j map to different
    levels he names the one that matches, otherwise he guesses.
    """

    encoding: tuple[int, ...]
    levels: int | None = None

    def __post_init__(self):
        enc = tuple(int(e) for e in self.encoding)
        levels = self.levels if self.levels is not None else max(enc, default=-1) + 1
        if levels < 1:
            raise DomainError("a classical strategy needs at least one level")
        if any(not 0 <= e < levels for e in enc):
            raise DomainError(f"encoding {enc} uses levels outside 0..{levels - 1}")
        object.__setattr__(self, "encoding", enc)
        object.__setattr__(self, "levels", levels)

    @property
    def d(self) -> int:
        return len(self.encoding)

    def message(self, i: int) -> int:
        return self.encoding[i - 1]


@dataclass(frozen=True)
class QuantumStrategy:
    """Alice sends ``states[i - 1]``; Bob applies the Helstrom measurement for S_j."""

    states: tuple[QubitState, ...]
    noise: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if not 0.0 <= self.noise <= 1.0:
            raise DomainError(f"noise must lie in [0, 1], got {self.noise}")

    @property
    def d(self) -> int:
        return len(self.states)

    def state(self, i: int) -> QubitState:
        return self.states[i - 1]


Strategy = Union[ClassicalStrategy, QuantumStrategy]


@dataclass(frozen=True)
class SuccessMatrix:
    """Exact probabilities p(i | x_i, j) that Bob names x_i, keyed by (i, j)."""

    cells: dict

    def __getitem__(self, cell: Cell):
        return self.cells[cell]

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def items(self):
        return self.cells.items()


def check_dimension(strategy: Strategy, spec: GameSpec) -> None:
    if strategy.d != spec.d:
        raise DimensionMismatch(f"strategy has d={strategy.d}, game has d={spec.d}")


def success_matrix(strategy: Strategy, spec: GameSpec) -> SuccessMatrix:
    check_dimension(strategy, spec)
    cells = {}
    for j, (a, b) in enumerate(spec.pair_sets, start=1):
        if isinstance(strategy, ClassicalStrategy):
            p = Fraction(1) if strategy.message(a) != strategy.message(b) else Fraction(1, 2)
        else:
            p = helstrom_success(strategy.state(a), strategy.state(b), strategy.noise)
        # Helstrom and the induced decoder are symmetric in the pair.
        cells[(a, j)] = p
        cells[(b, j)] = p
    return SuccessMatrix(cells)


def average_success(matrix: SuccessMatrix, spec: GameSpec):
    """Weighted average over j of the mean success of the two members of S_j."""
    total = 0
    for j, (a, b) in enumerate(spec.pair_sets, start=1):
        total += spec.weight(j) * (matrix[(a, j)] + matrix[(b, j)]) / 2
    return total


def min_cell(matrix: SuccessMatrix):
    return min(matrix.cells.values())


def wins(matrix: SuccessMatrix) -> bool:
    """The game is won when every cell beats a random guess."""
    return min_cell(matrix) > 0.5 + EPS_ALG


def relabel(strategy: Strategy, perm: Sequence[int]) -> Strategy:
    """Strategy for the game with values renamed i -> perm[i - 1].

    The new strategy sends for value perm[i - 1] what the old one sent for i.
    """
    d = strategy.d
    if sorted(perm) != list(range(1, d + 1)):
        raise DomainError(f"{perm} is not a permutation of 1..{d}")
    inverse = [0] * d
    for old, new in enumerate(perm, start=1):
        inverse[new - 1] = old
    if isinstance(strategy, ClassicalStrategy):
        return ClassicalStrategy(
            tuple(strategy.message(inverse[k]) for k in range(d)), strategy.levels
        )
    return QuantumStrategy(
        tuple(strategy.state(inverse[k]) for k in range(d)), strategy.noise
    )
