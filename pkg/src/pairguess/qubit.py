"""Pure qubit states, two-outcome measurements and minimum-error discrimination.

Amplitudes are always given in a fixed reference basis {|0>, |1>}. Noise is a
depolarizing channel with strength ``noise`` acting on the qubit before it is
measured::

    rho -> (1 - noise) * rho + noise * I / 2
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NormalizationError

# Tolerance for logical decisions (equality up to phase, winning margin, ...).
EPS_ALG = 1e-9
# Tolerance for algebraic identities (normalization, completeness, ...).
EPS_NUM = 1e-12


@dataclass(frozen=True)
class QubitState:
    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm2 = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm2 - 1.0) > EPS_ALG:
            raise NormalizationError(
                f"|amp0|^2 + |amp1|^2 = {norm2!r}, expected 1"
            )

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)

    def projector(self) -> np.ndarray:
        v = self.vector
        return np.outer(v, v.conj())

    def bloch(self) -> np.ndarray:
        """Bloch vector (x, y, z) of the state."""
        a, b = complex(self.amp0), complex(self.amp1)
        ab = a.conjugate() * b
        return np.array([2 * ab.real, 2 * ab.imag, abs(a) ** 2 - abs(b) ** 2])

    def __repr__(self):
        return f"QubitState({complex(self.amp0):.6g}, {complex(self.amp1):.6g})"


def make_state(amp0: complex, amp1: complex) -> QubitState:
    """Build a state from amplitudes, without renormalizing them.

    >>> make_state(1, 0)
    QubitState(1+0j, 0+0j)
    """
    return QubitState(complex(amp0), complex(amp1))


ZERO = make_state(1, 0)
ONE = make_state(0, 1)


@dataclass(frozen=True)
class TwoOutcomeMeasurement:
    effect0: np.ndarray
    effect1: np.ndarray

    def __post_init__(self):
        for name in ("effect0", "effect1"):
            e = np.asarray(getattr(self, name), dtype=complex)
            if e.shape != (2, 2):
                raise DomainError(f"{name} must be 2x2, got shape {e.shape}")
            if np.max(np.abs(e - e.conj().T)) > EPS_NUM:
                raise DomainError(f"{name} is not Hermitian")
            if np.min(np.linalg.eigvalsh(e)) < -EPS_NUM:
                raise DomainError(f"{name} is not positive semidefinite")
            e.setflags(write=False)
            object.__setattr__(self, name, e)
        if np.max(np.abs(self.effect0 + self.effect1 - np.eye(2))) > EPS_NUM:
            raise DomainError("effects do not sum to the identity")

    def effect(self, outcome: int) -> np.ndarray:
        if outcome == 0:
            return self.effect0
        if outcome == 1:
            return self.effect1
        raise DomainError(f"outcome must be 0 or 1, got {outcome!r}")


def _check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def overlap(s1: QubitState, s2: QubitState) -> complex:
    """Inner product <s1|s2>."""
    return (
        complex(s1.amp0).conjugate() * complex(s2.amp0)
        + complex(s1.amp1).conjugate() * complex(s2.amp1)
    )


def same_ray(s1: QubitState, s2: QubitState) -> bool:
    """True when the two states are equal up to a global phase."""
    return abs(overlap(s1, s2)) > 1.0 - EPS_ALG


def distinguishability(s1: QubitState, s2: QubitState) -> float:
    """sqrt(1 - |<s1|s2>|^2), evaluated without cancellation.

    For unit vectors 1 - |<s1|s2>|^2 equals |amp0 amp1' - amp1 amp0'|^2.
    """
    det = complex(s1.amp0) * complex(s2.amp1) - complex(s1.amp1) * complex(s2.amp0)
    return min(1.0, abs(det))


def helstrom_success(s1: QubitState, s2: QubitState, noise: float = 0.0) -> float:
    """Optimal probability of telling two equiprobable pure states apart.

    With depolarizing noise the advantage over a random guess shrinks by the
    factor (1 - noise).
    """
    noise = _check_unit_interval(noise, "noise")
    return 0.5 * (1.0 + (1.0 - noise) * distinguishability(s1, s2))


def helstrom_measurement(s1: QubitState, s2: QubitState) -> TwoOutcomeMeasurement:
    """Projective measurement that attains :func:`helstrom_success`.

    Outcome 0 means "s1", outcome 1 means "s2". The effects project onto the
    non-negative and negative eigenspaces of |s1><s1| - |s2><s2|. If the
    states coincide up to phase the difference operator vanishes and the
    uniform guess (both effects I/2) is returned.

    The eigenvalues are +-distinguishability(s1, s2), so the uniform fallback
    is used only when they are at rounding level (EPS_NUM). A coarser cutoff
    would make this measurement fall short of :func:`helstrom_success` by up
    to half the cutoff for nearly identical states.
    """
    diff = s1.projector() - s2.projector()
    evals, evecs = np.linalg.eigh(diff)
    if np.max(np.abs(evals)) <= EPS_NUM:
        half = np.eye(2, dtype=complex) / 2
        return TwoOutcomeMeasurement(half, half.copy())
    # eigh sorts ascending; the operator is traceless so exactly one
    # eigenvalue is positive.
    pos = evecs[:, 1]
    neg = evecs[:, 0]
    return TwoOutcomeMeasurement(np.outer(pos, pos.conj()), np.outer(neg, neg.conj()))


def born_probability(
    state: QubitState,
    meas: TwoOutcomeMeasurement,
    outcome: int,
    noise: float = 0.0,
) -> float:
    """Probability of ``outcome`` when ``state`` passes the noisy channel and is measured."""
    noise = _check_unit_interval(noise, "noise")
    effect = meas.effect(outcome)
    v = state.vector
    clean = float(np.real(v.conj() @ effect @ v))
    mixed = float(np.real(np.trace(effect))) / 2
    return (1.0 - noise) * clean + noise * mixed


def sample_outcome(rng: np.random.Generator, p0: float) -> int:
    """Draw 0 with probability ``p0`` and 1 otherwise, consuming one uniform."""
    p0 = _check_unit_interval(p0, "p0")
    return 0 if rng.random() < p0 else 1
