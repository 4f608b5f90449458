"""Optimal classical strategies.

With the induced decoder a pair S_j = {a, b} scores 1 when the encoding
separates a and b and 1/2 otherwise, so under the uniform choice of j an
encoding is worth (P + separated) / (2P) with P = d(d-1)/2.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceLimit
from .game import ClassicalStrategy

MAX_ENCODINGS = 10**8
CHUNK = 1 << 18


@dataclass(frozen=True)
class ClassicalOptimum:
    best_encoding: tuple[int, ...]
    best_average: Fraction
    can_win: bool
    levels: int

    @property
    def strategy(self) -> ClassicalStrategy:
        return ClassicalStrategy(self.best_encoding, self.levels)

    def __iter__(self):
        # allows ``enc, avg, can_win = brute_force_optimum(...)``
        return iter((self.best_encoding, self.best_average, self.can_win))


def _scan(d: int, levels: int, start: int, stop: int) -> tuple[int, int]:
    """Best separated-pair count in [start, stop) and the first index reaching it."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((d, idx.size), dtype=np.int64)
    rest = idx
    for pos in range(d - 1, -1, -1):
        rest, digits[pos] = np.divmod(rest, levels)
    separated = np.zeros(idx.size, dtype=np.int64)
    for a in range(d):
        for b in range(a + 1, d):
            separated += digits[a] != digits[b]
    k = int(np.argmax(separated))
    return int(separated[k]), start + k


def _decode(index: int, d: int, levels: int) -> tuple[int, ...]:
    digits = []
    for _ in range(d):
        index, r = divmod(index, levels)
        digits.append(r)
    return tuple(reversed(digits))


def brute_force_optimum(d: int, levels: int, threads: int = 1) -> ClassicalOptimum:
    """Scan every encoding of d values into ``levels`` messages.

    Encodings are enumerated as base-``levels`` numerals whose leading digit
    is the message for x_1; the first maximizer (lexicographically smallest)
    is kept. Parallel and serial scans return the same result.
    """
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    if levels < 1:
        raise DomainError(f"levels must be at least 1, got {levels}")
    total = levels**d
    if total > MAX_ENCODINGS:
        raise ResourceLimit(f"{levels}^{d} = {total} encodings exceeds {MAX_ENCODINGS}")

    bounds = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _scan(d, levels, *b), bounds))
    else:
        results = [_scan(d, levels, *b) for b in bounds]
    # max on separated count, ties go to the smaller index
    best_sep, best_idx = max(results, key=lambda r: (r[0], -r[1]))

    pairs = d * (d - 1) // 2
    return ClassicalOptimum(
        best_encoding=_decode(best_idx, d, levels),
        best_average=Fraction(pairs + best_sep, 2 * pairs),
        can_win=best_sep == pairs,
        levels=levels,
    )


def balanced_partition_optimum(d: int, levels: int) -> Fraction:
    """Closed-form classical optimum.

    The number of unseparated pairs sum_k C(n_k, 2) is smallest when the d
    values are spread as evenly as possible over the levels.
    """
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    if levels < 1:
        raise DomainError(f"levels must be at least 1, got {levels}")
    pairs = d * (d - 1) // 2
    q, r = divmod(d, levels)
    unseparated = r * math.comb(q + 1, 2) + (levels - r) * math.comb(q, 2)
    return Fraction(2 * pairs - unseparated, 2 * pairs)


def balanced_encoding(d: int, levels: int) -> ClassicalStrategy:
    """An encoding attaining :func:`balanced_partition_optimum` (values split into contiguous blocks)."""
    levels = min(levels, d)
    return ClassicalStrategy(tuple(k * levels // d for k in range(d)), levels)


def min_levels_to_win(d: int) -> int:
    """Smallest message alphabet with which a classical strategy wins.

    Winning needs every pair separated, i.e. an injective encoding, hence d
    levels. For d <= 6 this is re-checked by exhaustive search.
    """
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    if d <= 6:
        if brute_force_optimum(d, d - 1).can_win or not brute_force_optimum(d, d).can_win:
            raise AssertionError(f"exhaustive search disagrees with injectivity for d={d}")
    return d


def classical_strategy_for(d: int, levels: int) -> ClassicalStrategy:
    """Optimal strategy for (d, levels): exhaustive when affordable, balanced otherwise."""
    if levels**d <= MAX_ENCODINGS:
        return brute_force_optimum(d, levels).strategy
    return balanced_encoding(d, levels)


__all__ = [
    "ClassicalOptimum",
    "balanced_encoding",
    "balanced_partition_optimum",
    "brute_force_optimum",
    "classical_strategy_for",
    "min_levels_to_win",
]
