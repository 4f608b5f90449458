"""Qubit encodings for the pair game.

Besides the fixed ensembles this module holds a numerical search over
ensembles and the two triangle-inequality bounds used to argue that the trine
(d = 3) and the tetrad (d = 4) are optimal. The bounds are upper bounds on the
summed distinguishability, never success probabilities in their own right.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError
from .game import (
    GameSpec,
    QuantumStrategy,
    average_success,
    canonical_spec,
    success_matrix,
)
from .qubit import EPS_ALG, QubitState, make_state, overlap


@dataclass(frozen=True)
class Ensemble:
    states: tuple[QubitState, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) < 3:
            raise DomainError(f"an ensemble needs at least 3 states, got {len(self.states)}")

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, k):
        return self.states[k]

    @property
    def d(self) -> int:
        return len(self.states)

    def strategy(self, noise: float = 0.0) -> QuantumStrategy:
        return QuantumStrategy(self.states, noise)


def trine() -> Ensemble:
    r3 = math.sqrt(3)
    return Ensemble((
        make_state(1, 0),
        make_state(0.5, -r3 / 2),
        make_state(0.5, r3 / 2),
    ))


def tetrad() -> Ensemble:
    c = 1 / math.sqrt(3)
    s = math.sqrt(2) / math.sqrt(3)
    w = cmath.exp(2j * math.pi / 3)
    return Ensemble((
        make_state(1, 0),
        make_state(c, -s),
        make_state(c, -s * w),
        make_state(c, -s * w.conjugate()),
    ))


def polygon(d: int) -> Ensemble:
    """Real states at Hilbert-space angles k*pi/d, k = 0..d-1."""
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    return Ensemble(
        tuple(make_state(math.cos(k * math.pi / d), math.sin(k * math.pi / d)) for k in range(d))
    )


def pairwise_linearly_independent(e: Ensemble) -> bool:
    return all(
        abs(overlap(e[i], e[k])) < 1 - EPS_ALG
        for i in range(len(e))
        for k in range(i + 1, len(e))
    )


def has_universal_coherence(e: Sequence[QubitState]) -> bool:
    """True when no single basis makes every state in the ensemble diagonal.

    For pure qubit states that happens exactly when the distinct rays are
    one state, or two orthogonal states.
    """
    rays: list[QubitState] = []
    for s in e:
        if not any(abs(overlap(r, s)) > 1 - EPS_ALG for r in rays):
            rays.append(s)
    if len(rays) > 2:
        return True
    return len(rays) == 2 and abs(overlap(rays[0], rays[1])) >= EPS_ALG


# --- numerical search -----------------------------------------------------


def _amplitudes(params: np.ndarray, d: int) -> np.ndarray:
    """States from gauge-fixed Bloch angles.

    State 1 sits at the north pole, state 2 has zero azimuth, the rest carry
    (polar, azimuth) pairs: params = [t2, t3, p3, t4, p4, ...].
    """
    theta = np.zeros(d)
    phi = np.zeros(d)
    theta[1] = params[0]
    theta[2:] = params[1::2]
    phi[2:] = params[2::2]
    amps = np.empty((d, 2), dtype=complex)
    amps[:, 0] = np.cos(theta / 2)
    amps[:, 1] = np.exp(1j * phi) * np.sin(theta / 2)
    return amps


def _fast_average(amps: np.ndarray, rows: np.ndarray, cols: np.ndarray, weights: np.ndarray) -> float:
    gram = amps.conj() @ amps.T
    ov2 = np.minimum(np.abs(gram[rows, cols]) ** 2, 1.0)
    return float(weights @ (0.5 + 0.5 * np.sqrt(1.0 - ov2)))


def _to_ensemble(amps: np.ndarray) -> Ensemble:
    states = []
    for a0, a1 in amps:
        norm = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        states.append(make_state(a0 / norm, a1 / norm))
    return Ensemble(tuple(states))


def _one_restart(d: int, seed: int, restart: int, spec: GameSpec):
    rng = np.random.default_rng([seed, restart])
    n_free = d - 2
    # uniform on the sphere: cos(theta) uniform in [-1, 1]
    thetas = np.arccos(1 - 2 * rng.random(n_free + 1))
    phis = rng.uniform(0, 2 * np.pi, n_free)
    x0 = np.empty(1 + 2 * n_free)
    x0[0] = thetas[0]
    x0[1::2] = thetas[1:]
    x0[2::2] = phis

    rows = np.array([a - 1 for a, _ in spec.pair_sets])
    cols = np.array([b - 1 for _, b in spec.pair_sets])
    weights = np.array([float(w) for w in spec.set_distribution])

    def objective(x):
        return -_fast_average(_amplitudes(x, d), rows, cols, weights)

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000 * len(x0), "adaptive": d > 4},
    )
    # one restart of the simplex from the optimum guards against early collapse
    res = minimize(
        objective,
        res.x,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000 * len(x0), "adaptive": d > 4},
    )
    return _to_ensemble(_amplitudes(res.x, d))


def optimize_ensemble(d: int, restarts: int = 16, seed: int = 0, threads: int = 1):
    """Search d-state qubit encodings for the best average success.

    Every restart starts from uniformly random Bloch directions drawn from its
    own stream ``default_rng([seed, restart])`` and runs a Nelder-Mead search.
    The winner is re-scored with the exact evaluator; ties go to the lowest
    restart index. Returns ``(ensemble, average_success)``.
    """
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    if restarts < 1:
        raise DomainError(f"restarts must be at least 1, got {restarts}")
    spec = canonical_spec(d)

    def run(k):
        ens = _one_restart(d, seed, k, spec)
        return ens, float(average_success(success_matrix(ens.strategy(), spec), spec))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(k) for k in range(restarts)]
    best = max(range(restarts), key=lambda k: (results[k][1], -k))
    return results[best]


# --- triangle-inequality bounds --------------------------------------------


def _magnitudes(*values: float) -> list[float]:
    out = []
    for v in values:
        v = float(v)
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"magnitude must lie in [0, 1], got {v!r}")
        out.append(v)
    return out


def delta_bound_d3(a_mag: float, c_mag: float) -> float:
    """Upper bound on |b| + |cb - da| + |d| for three states (d = 3)."""
    a, c = _magnitudes(a_mag, c_mag)
    return (1 + c) * math.sqrt(1 - a * a) + (1 + a) * math.sqrt(1 - c * c)


def delta_bound_d4(a_mag: float, c_mag: float, e_mag: float) -> float:
    """Upper bound on the summed pair distinguishability for four states (d = 4)."""
    a, c, e = _magnitudes(a_mag, c_mag, e_mag)
    return (
        (1 + c + e) * math.sqrt(1 - a * a)
        + (1 + a + e) * math.sqrt(1 - c * c)
        + (1 + a + c) * math.sqrt(1 - e * e)
    )


def _delta_grid_d3(g: np.ndarray) -> np.ndarray:
    a, c = np.meshgrid(g, g, indexing="ij")
    return (1 + c) * np.sqrt(1 - a**2) + (1 + a) * np.sqrt(1 - c**2)


def _delta_slice_d4(a: float, g: np.ndarray) -> np.ndarray:
    c, e = np.meshgrid(g, g, indexing="ij")
    ra = math.sqrt(1 - a * a)
    return (
        (1 + c + e) * ra
        + (1 + a + e) * np.sqrt(1 - c**2)
        + (1 + a + c) * np.sqrt(1 - e**2)
    )


def maximize_delta(which: str, grid_step: float = 0.005):
    """Maximize a triangle-inequality bound over magnitudes in [0, 1].

    A full grid at ``grid_step`` locates the best cell, then a bounded
    quasi-Newton polish refines it. Returns ``(argmax, value)``.
    """
    if not 0 < grid_step <= 0.01:
        raise DomainError(f"grid_step must lie in (0, 0.01], got {grid_step}")
    n = int(round(1 / grid_step))
    g = np.linspace(0.0, 1.0, n + 1)

    if which == "d3":
        vals = _delta_grid_d3(g)
        ia, ic = np.unravel_index(int(np.argmax(vals)), vals.shape)
        x0 = np.array([g[ia], g[ic]])
        fn = delta_bound_d3
    elif which == "d4":
        best, x0 = -np.inf, None
        for ia, a in enumerate(g):
            vals = _delta_slice_d4(a, g)
            k = int(np.argmax(vals))
            if vals.flat[k] > best:
                ic, ie = np.unravel_index(k, vals.shape)
                best, x0 = vals.flat[k], np.array([a, g[ic], g[ie]])
        fn = delta_bound_d4
    else:
        raise DomainError(f"which must be 'd3' or 'd4', got {which!r}")

    res = minimize(
        lambda x: -fn(*np.clip(x, 0.0, 1.0)),
        x0,
        method="L-BFGS-B",
        bounds=[(0.0, 1.0)] * len(x0),
        options={"ftol": 1e-15, "gtol": 1e-12},
    )
    x = np.clip(res.x, 0.0, 1.0)
    if fn(*x) < fn(*x0):
        x = x0
    return tuple(float(v) for v in x), float(fn(*x))


def qrac_reference() -> float:
    """Optimal 2 -> 1 quantum random access code success, cos^2(pi/8) ~ 0.854.

    Often quoted as 0.85.
    """
    return math.cos(math.pi / 8) ** 2


def best_known_ensemble(d: int) -> tuple[str, Ensemble]:
    """Reference encoding used to report optimizer gaps."""
    if d == 3:
        return "trine", trine()
    if d == 4:
        return "tetrad", tetrad()
    return "polygon", polygon(d)
