import math

import numpy as np
import pytest
from numpy.random import Philox

import pairguess.sim as sim
from pairguess.classical import classical_strategy_for
from pairguess.errors import DimensionMismatch, InsufficientData
from pairguess.game import average_success, canonical_spec, success_matrix
from pairguess.quantum import polygon, tetrad, trine
from pairguess.records import RoundRecord, dumps
from pairguess.sim import empirical_average, round_uniforms, simulate, simulate_arrays

N = 10**5


def exact(strategy):
    spec = canonical_spec(strategy.d)
    return float(average_success(success_matrix(strategy, spec), spec))


def band(p, n=N, sigmas=4):
    return sigmas * math.sqrt(p * (1 - p) / n)


STRATEGIES = {
    "trine": trine().strategy(),
    "tetrad": tetrad().strategy(),
    "polygon5": polygon(5).strategy(),
    **{f"classical{d}": classical_strategy_for(d, 2) for d in range(3, 7)},
    **{f"polygon{d}_noisy": polygon(d).strategy(0.25) for d in (3, 6)},
}


def test_zero_rounds():
    assert list(simulate(trine().strategy(), canonical_spec(3), 0, 1)) == []
    assert simulate_arrays(trine().strategy(), canonical_spec(3), 0, 1)["x"].size == 0


def test_deterministic():
    spec = canonical_spec(3)
    a = dumps(simulate(trine().strategy(), spec, 5000, 42))
    b = dumps(simulate(trine().strategy(), spec, 5000, 42))
    assert a == b
    assert a != dumps(simulate(trine().strategy(), spec, 5000, 43))


def test_uniforms_are_per_round_blocks():
    u = round_uniforms(9, 5, 3)
    for k in range(3):
        raw = Philox(key=9, counter=5 + k).random_raw(4)[:3]
        np.testing.assert_array_equal(u[k], (raw >> np.uint64(11)) * 2.0**-53)
    assert ((u >= 0) & (u < 1)).all()


def test_chunking_and_threads_do_not_change_records(monkeypatch):
    spec = canonical_spec(4)
    strat = tetrad().strategy(0.1)
    reference = list(simulate(strat, spec, 3000, 5))
    monkeypatch.setattr(sim, "CHUNK", 257)
    assert list(simulate(strat, spec, 3000, 5)) == reference
    cols = simulate_arrays(strat, spec, 3000, 5, threads=4)
    rebuilt = [RoundRecord(*map(int, t)) for t in zip(cols["round"], cols["x"], cols["j"], cols["guess"])]
    assert rebuilt == reference


def test_records_are_consistent():
    spec = canonical_spec(5)
    for rec in simulate(polygon(5).strategy(), spec, 2000, 3):
        assert rec.x in spec.pair(rec.j)
        assert rec.guess in spec.pair(rec.j)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        list(simulate(trine().strategy(), canonical_spec(4), 10, 0))


@pytest.mark.parametrize("name", sorted(STRATEGIES))
def test_converges_to_exact_average(name):
    strat = STRATEGIES[name]
    cols = simulate_arrays(strat, canonical_spec(strat.d), N, 2024)
    empirical = float(np.mean(cols["guess"] == cols["x"]))
    p = exact(strat)
    assert abs(empirical - p) < band(p)


def test_trine_within_stated_band():
    p = empirical_average(simulate(trine().strategy(), canonical_spec(3), N, 1))
    assert abs(p - 0.9330127) < 0.006


def test_classical_and_tetrad_bands():
    spec3, spec4 = canonical_spec(3), canonical_spec(4)
    assert abs(empirical_average(simulate(classical_strategy_for(3, 2), spec3, N, 2)) - 5 / 6) < 0.006
    assert abs(empirical_average(simulate(tetrad().strategy(), spec4, N, 2)) - 0.9082483) < 0.006


def test_input_histogram_matches_design():
    spec = canonical_spec(4)
    cols = simulate_arrays(tetrad().strategy(), spec, N, 77)
    q = 1 / (2 * spec.n_sets)
    for i, j in spec.cells():
        n = int(np.sum((cols["x"] == i) & (cols["j"] == j)))
        assert abs(n - N * q) < 4 * math.sqrt(N * q * (1 - q))


def test_weighted_design_is_respected():
    from fractions import Fraction
    from pairguess.game import GameSpec

    spec = GameSpec(3, ((1, 2), (1, 3), (2, 3)), (Fraction(1, 2), Fraction(1, 2), Fraction(0)))
    cols = simulate_arrays(trine().strategy(), spec, 20000, 1)
    assert not np.any(cols["j"] == 3)
    assert abs(np.mean(cols["j"] == 1) - 0.5) < 0.02


def test_noise_monotonicity():
    spec = canonical_spec(3)
    values = [
        float(np.mean(np.equal(*(lambda c: (c["guess"], c["x"]))(simulate_arrays(trine().strategy(lam), spec, N, 8)))))
        for lam in (0.0, 0.2, 0.5)
    ]
    for hi, lo in zip(values, values[1:]):
        assert hi - lo > 2 * band(0.75)


def test_tetrad_noise_scaling():
    lam = 0.3
    expected = 0.5 + (1 - lam) / math.sqrt(6)
    assert expected == pytest.approx(0.7857, abs=1e-4)
    p = empirical_average(simulate(tetrad().strategy(lam), canonical_spec(4), N, 4))
    assert abs(p - expected) < band(expected)


def test_empirical_average():
    recs = [RoundRecord(k, 1, 1, 1) for k in range(5)]
    assert empirical_average(recs) == 1
    with pytest.raises(InsufficientData):
        empirical_average([])
