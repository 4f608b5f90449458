"""Semi-device-independent certification from round records.

Only inputs (x, j) and Bob's announced guess are used. Two claims can be
certified:

* quantumness: the pooled success rate beats every one-cbit classical
  strategy (5/6 for d = 3);
* universal coherence of Alice's pure-state encoding: every cell beats 1/2.

Both use Hoeffding bounds and therefore assume i.i.d. rounds drawn from the
design distribution. The design assumption is checked and flagged in the
report, but the flag does not change the verdicts.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Iterable, Union

import numpy as np

from . import __version__
from .classical import balanced_partition_optimum
from .errors import DomainError, InsufficientData, InvalidRecord
from .game import GameSpec, canonical_spec
from .records import RoundRecord

BOUND_NAME = "hoeffding"
DESIGN_SIGMAS = 5.0


class Verdict(str, Enum):
    QUANTUM = "QUANTUM"
    COHERENT = "COHERENT"
    NOT_CERTIFIED = "NOT_CERTIFIED"


class CellCounts:
    """Rounds n(i, j) and successes s(i, j) per cell.

    Counts from disjoint shards can be combined with ``+``.
    """

    def __init__(self, spec: GameSpec):
        self.spec = spec
        self.n = np.zeros((spec.d, spec.n_sets), dtype=np.int64)
        self.s = np.zeros((spec.d, spec.n_sets), dtype=np.int64)

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def total(self) -> int:
        return int(self.n.sum())

    def __add__(self, other: CellCounts) -> CellCounts:
        if other.spec != self.spec:
            raise DomainError("cannot merge counts from different games")
        out = CellCounts(self.spec)
        out.n = self.n + other.n
        out.s = self.s + other.s
        return out

    def cell(self, i: int, j: int) -> tuple[int, int]:
        return int(self.n[i - 1, j - 1]), int(self.s[i - 1, j - 1])

    def frequency(self, i: int, j: int) -> float:
        n, s = self.cell(i, j)
        return s / n if n else float("nan")

    def empty_cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in self.spec.cells() if self.n[i - 1, j - 1] == 0]

    def as_dict(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {c: self.cell(*c) for c in self.spec.cells()}


def _validate(spec: GameSpec, x: int, j: int, guess: int, where: int) -> None:
    d = spec.d
    if not 1 <= j <= spec.n_sets:
        raise InvalidRecord(f"j={j} outside 1..{spec.n_sets}", where)
    if not 1 <= x <= d:
        raise InvalidRecord(f"x={x} outside 1..{d}", where)
    if not 1 <= guess <= d:
        raise InvalidRecord(f"guess={guess} outside 1..{d}", where)
    if x not in spec.pair_sets[j - 1]:
        raise InvalidRecord(f"x={x} is not in S_{j}={set(spec.pair_sets[j - 1])}", where)


def empirical_matrix(records: Iterable[RoundRecord], d: int) -> CellCounts:
    """Fold records into per-cell counts; errors name the 1-based record number."""
    spec = canonical_spec(d)
    counts = CellCounts(spec)
    for k, rec in enumerate(records, start=1):
        _validate(spec, rec.x, rec.j, rec.guess, k)
        counts.n[rec.x - 1, rec.j - 1] += 1
        counts.s[rec.x - 1, rec.j - 1] += rec.guess == rec.x
    return counts


def counts_from_arrays(x, j, guess, d: int) -> CellCounts:
    """Vectorized :func:`empirical_matrix` for columnar data."""
    spec = canonical_spec(d)
    x, j, guess = (np.asarray(a, dtype=np.int64) for a in (x, j, guess))
    first = np.array([a for a, _ in spec.pair_sets])
    second = np.array([b for _, b in spec.pair_sets])
    ok = (
        (j >= 1) & (j <= spec.n_sets)
        & (x >= 1) & (x <= d)
        & (guess >= 1) & (guess <= d)
    )
    jj = np.clip(j, 1, spec.n_sets) - 1
    ok &= (x == first[jj]) | (x == second[jj])
    if not ok.all():
        k = int(np.argmin(ok))
        _validate(spec, int(x[k]), int(j[k]), int(guess[k]), k + 1)
    counts = CellCounts(spec)
    np.add.at(counts.n, (x - 1, j - 1), 1)
    np.add.at(counts.s, (x - 1, j - 1), (guess == x).astype(np.int64))
    return counts


Records = Union[Iterable[RoundRecord], CellCounts]


def _as_counts(records: Records, d: int) -> CellCounts:
    if isinstance(records, CellCounts):
        if records.d != d:
            raise DomainError(f"counts are for d={records.d}, not d={d}")
        return records
    return empirical_matrix(records, d)


def witness_value(counts: CellCounts, spec: GameSpec | None = None) -> float:
    """Design-weighted average of the per-cell success frequencies."""
    spec = spec or counts.spec
    empty = counts.empty_cells()
    if empty:
        raise InsufficientData(f"no rounds for cells {empty}", empty)
    total = 0.0
    for j, (a, b) in enumerate(spec.pair_sets, start=1):
        total += float(spec.weight(j)) * 0.5 * (counts.frequency(a, j) + counts.frequency(b, j))
    return total


def hoeffding_radius(n: int, alpha: float, sides: int = 2) -> float:
    """Deviation t with P(|mean - p| >= t) <= alpha (one-sided when ``sides=1``)."""
    return math.sqrt(math.log(sides / alpha) / (2 * n))


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"alpha must lie in (0, 0.5), got {alpha}")
    return alpha


def design_check(counts: CellCounts) -> tuple[bool, float]:
    """Compare input frequencies with the design distribution.

    Returns ``(ok, worst)`` where ``worst`` is the largest deviation of a
    cell count from its expectation, in binomial standard deviations.
    """
    spec, N = counts.spec, counts.total
    worst = 0.0
    for i, j in spec.cells():
        q = float(spec.cell_probability(i, j))
        n = counts.cell(i, j)[0]
        sd = math.sqrt(N * q * (1 - q))
        if sd > 0:
            worst = max(worst, abs(n - N * q) / sd)
        elif n != N * q:
            worst = math.inf
    return worst <= DESIGN_SIGMAS, worst


def _coherence(counts: CellCounts, alpha: float) -> tuple[Verdict, dict]:
    empty = counts.empty_cells()
    if empty:
        raise InsufficientData(f"no rounds for cells {empty}", empty)
    cells = counts.spec.cells()
    per_cell_alpha = alpha / len(cells)
    lower = {}
    for i, j in cells:
        n, _ = counts.cell(i, j)
        lower[(i, j)] = counts.frequency(i, j) - hoeffding_radius(n, per_cell_alpha, sides=1)
    verdict = Verdict.COHERENT if all(v > 0.5 for v in lower.values()) else Verdict.NOT_CERTIFIED
    return verdict, lower


def certify_coherence(records: Records, d: int, alpha: float) -> Verdict:
    """COHERENT when every cell's Bonferroni-corrected lower bound exceeds 1/2."""
    alpha = _check_alpha(alpha)
    return _coherence(_as_counts(records, d), alpha)[0]


@dataclass
class WitnessReport:
    d: int
    total_rounds: int
    cells: list = field(repr=False)
    witness_value: float
    classical_bound: float
    classical_bound_exact: str
    confidence_radius: float
    quantumness_verdict: Verdict
    coherence_verdict: Verdict
    alpha: float
    bound: str = BOUND_NAME
    design_check: str = "OK"
    design_max_deviation_sigmas: float = 0.0
    tool_version: str = __version__

    def to_dict(self) -> dict:
        out = asdict(self)
        out["quantumness_verdict"] = self.quantumness_verdict.value
        out["coherence_verdict"] = self.coherence_verdict.value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [
            f"pairguess {self.tool_version} certification report",
            f"d = {self.d}, rounds = {self.total_rounds}, alpha = {self.alpha}, bound = {self.bound}",
            "",
            "   i    j        n        s   frequency   lower bound",
        ]
        for c in self.cells:
            lines.append(
                f"{c['i']:>4} {c['j']:>4} {c['n']:>8} {c['s']:>8}   {c['frequency']:.7f}"
                f"     {c['lower_bound']:.7f}"
            )
        lines += [
            "",
            f"witness value      {self.witness_value:.7f}",
            f"confidence radius  {self.confidence_radius:.7f}",
            f"classical bound    {self.classical_bound:.7f} ({self.classical_bound_exact})",
            f"design check       {self.design_check} "
            f"(max deviation {self.design_max_deviation_sigmas:.2f} sigma)",
            f"quantumness        {self.quantumness_verdict.value}",
            f"coherence          {self.coherence_verdict.value}",
        ]
        return "\n".join(lines)


def certify_quantumness(records: Records, d: int, alpha: float) -> WitnessReport:
    """Test whether the records beat every one-cbit strategy.

    The verdict is QUANTUM when the witness minus the pooled Hoeffding radius
    sqrt(ln(2/alpha) / 2N) still exceeds the classical optimum. The report
    also carries the coherence verdict and the design check.
    """
    alpha = _check_alpha(alpha)
    counts = _as_counts(records, d)
    spec = counts.spec
    if counts.total == 0:
        raise InsufficientData("no rounds", spec.cells())
    witness = witness_value(counts, spec)
    bound = balanced_partition_optimum(d, 2)
    radius = hoeffding_radius(counts.total, alpha)
    quantum = Verdict.QUANTUM if witness - radius > bound else Verdict.NOT_CERTIFIED
    coherence, lower = _coherence(counts, alpha)
    ok, worst = design_check(counts)
    cells = [
        {
            "i": i,
            "j": j,
            "n": counts.cell(i, j)[0],
            "s": counts.cell(i, j)[1],
            "frequency": counts.frequency(i, j),
            "lower_bound": lower[(i, j)],
        }
        for i, j in spec.cells()
    ]
    return WitnessReport(
        d=d,
        total_rounds=counts.total,
        cells=cells,
        witness_value=witness,
        classical_bound=float(bound),
        classical_bound_exact=f"{bound.numerator}/{bound.denominator}",
        confidence_radius=radius,
        quantumness_verdict=quantum,
        coherence_verdict=coherence,
        alpha=alpha,
        design_check="OK" if ok else "MISMATCHED_DESIGN",
        design_max_deviation_sigmas=worst,
    )
