"""Seeded Monte Carlo simulation of game rounds.

Randomness comes from the counter-based Philox4x64 generator keyed by the
seed. Round r (0-based) uses the single counter block r, whose first three
64-bit words become three uniforms in [0, 1) via the top 53 bits:

    u_j      chooses the pair set (inverse CDF of the set distribution)
    u_x      picks the first member of S_j when < 1/2, else the second
    u_guess  Bob names the first member when < P(first | x, j)

Because every round owns its block, records do not depend on how the run is
split into chunks or threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from itertools import accumulate
from typing import Iterable, Iterator

import numpy as np
from numpy.random import Philox

from .errors import DomainError, InsufficientData
from .game import ClassicalStrategy, GameSpec, Strategy, check_dimension
from .qubit import born_probability, helstrom_measurement
from .records import RoundRecord

GENERATOR = "philox4x64"
CHUNK = 1 << 16


def round_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms for rounds start .. start+count-1, shape (count, 3)."""
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    raw = Philox(key=seed, counter=start).random_raw(4 * count)
    raw = raw.reshape(count, 4)[:, :3]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


class _Tables:
    """Per-set lookup arrays shared by every chunk of a run."""

    def __init__(self, strategy: Strategy, spec: GameSpec):
        check_dimension(strategy, spec)
        self.first = np.array([a for a, _ in spec.pair_sets])
        self.second = np.array([b for _, b in spec.pair_sets])
        # accumulate before converting so Fraction weights give an exact CDF
        self.cdf = np.array([float(c) for c in accumulate(spec.set_distribution)])
        # probability that Bob names the first member, given x = first / second
        self.p_if_first = np.empty(spec.n_sets)
        self.p_if_second = np.empty(spec.n_sets)
        for k, (a, b) in enumerate(spec.pair_sets):
            if isinstance(strategy, ClassicalStrategy):
                if strategy.message(a) != strategy.message(b):
                    self.p_if_first[k], self.p_if_second[k] = 1.0, 0.0
                else:
                    self.p_if_first[k] = self.p_if_second[k] = 0.5
            else:
                meas = helstrom_measurement(strategy.state(a), strategy.state(b))
                self.p_if_first[k] = born_probability(strategy.state(a), meas, 0, strategy.noise)
                self.p_if_second[k] = born_probability(strategy.state(b), meas, 0, strategy.noise)

    def play(self, u: np.ndarray):
        k = np.searchsorted(self.cdf, u[:, 0], side="right")
        np.minimum(k, len(self.cdf) - 1, out=k)
        is_first = u[:, 1] < 0.5
        a, b = self.first[k], self.second[k]
        x = np.where(is_first, a, b)
        p_first = np.where(is_first, self.p_if_first[k], self.p_if_second[k])
        guess = np.where(u[:, 2] < p_first, a, b)
        return x, k + 1, guess


def simulate_arrays(
    strategy: Strategy,
    spec: GameSpec,
    rounds: int,
    seed: int,
    threads: int = 1,
) -> dict[str, np.ndarray]:
    """Columnar version of :func:`simulate`: arrays ``round``, ``x``, ``j``, ``guess``."""
    if rounds < 0:
        raise DomainError(f"rounds must be non-negative, got {rounds}")
    tables = _Tables(strategy, spec)
    starts = range(0, rounds, CHUNK)

    def chunk(start):
        return tables.play(round_uniforms(seed, start, min(CHUNK, rounds - start)))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk, starts))
    else:
        parts = [chunk(s) for s in starts]
    if not parts:
        empty = np.zeros(0, dtype=np.int64)
        return {"round": empty, "x": empty, "j": empty, "guess": empty}
    x, j, guess = (np.concatenate(cols) for cols in zip(*parts))
    return {"round": np.arange(rounds), "x": x, "j": j, "guess": guess}


def simulate(
    strategy: Strategy,
    spec: GameSpec,
    rounds: int,
    seed: int,
) -> Iterator[RoundRecord]:
    """Stream ``rounds`` records, generated chunk by chunk in constant memory."""
    if rounds < 0:
        raise DomainError(f"rounds must be non-negative, got {rounds}")
    tables = _Tables(strategy, spec)
    for start in range(0, rounds, CHUNK):
        count = min(CHUNK, rounds - start)
        x, j, guess = tables.play(round_uniforms(seed, start, count))
        for r, xi, ji, gi in zip(range(start, start + count), x.tolist(), j.tolist(), guess.tolist()):
            yield RoundRecord(r, xi, ji, gi)


def empirical_average(records: Iterable[RoundRecord]) -> float:
    """Fraction of rounds in which Bob named the value Alice received."""
    n = hits = 0
    for rec in records:
        n += 1
        hits += rec.guess == rec.x
    if n == 0:
        raise InsufficientData("no rounds to average")
    return hits / n
