"""Entanglement measures: subsystem linear entropy, the singlet-projection
Bell measurement on the leaked fields, and two-qubit concurrence (closed form
and spin-flip eigenvalue route)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalInput, RangeError, ZeroNorm

ZERO_NORM_EPS = 1e-30

# Basis order for all 4x4 matrices: |ee>, |eg>, |ge>, |gg>.
_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_SYSY = np.kron(_SIGMA_Y, _SIGMA_Y)


def _check_abs_e(E: complex):
    if abs(E) > 1 + 1e-9:
        raise RangeError(f"|E| = {abs(E)} exceeds 1")


@dataclass(frozen=True)
class BlochAngles:
    """Polar/azimuthal angles of a qubit's initial pure state on the Bloch
    sphere; theta=0 is the excited state."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0 <= self.theta <= math.pi):
            raise RangeError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", self.phi % (2 * math.pi))


def linear_entropy(theta: float, E: complex) -> float:
    """Linear entropy of one qubit-cavity subsystem.

    Depends on the initial state only through theta (the azimuthal phase drops
    out) and on the dynamics only through the survival probability |E|^2.
    """
    if not (0 <= theta <= math.pi):
        raise RangeError(f"theta must lie in [0, pi], got {theta}")
    _check_abs_e(E)
    p = min(abs(E) ** 2, 1.0)  # |E| may exceed 1 by round-off
    return 2 * (1 - p) * p * math.cos(theta / 2) ** 4


def average_linear_entropy(E: complex) -> float:
    """Haar average of the linear entropy over initial qubit states; maximum
    1/6, attained when the survival probability is 1/2."""
    _check_abs_e(E)
    p = min(abs(E) ** 2, 1.0)
    return (2.0 / 3.0) * (1 - p) * p


def _half_cos_sin(theta: float) -> tuple[float, float]:
    # cos(pi/2) rounds to 6e-17, but a ground-state qubit must contribute an
    # exactly vanishing singlet amplitude.
    if theta == math.pi:
        return 0.0, 1.0
    return math.cos(theta / 2), math.sin(theta / 2)


@dataclass(frozen=True)
class PostBsmState:
    """Amplitude triple of the two-qubit state after the singlet Bell
    measurement: X multiplies (|eg> - |ge>), Y multiplies |gg>, N is the
    (unnormalized) success weight 2|X|^2 + |Y|^2."""

    X: complex
    Y: complex

    @property
    def N(self) -> float:
        return 2 * abs(self.X) ** 2 + abs(self.Y) ** 2


def post_bsm_projection(q1: BlochAngles, q2: BlochAngles, E: complex) -> PostBsmState:
    """Project the joint qubit-field state onto the singlet field Bell state.

    Both subsystems share the same survival amplitude E (identical cavities
    and equal velocities); the result is independent of the leaked photons'
    pulse shape by construction.
    """
    _check_abs_e(E)
    c1, s1 = _half_cos_sin(q1.theta)
    c2, s2 = _half_cos_sin(q2.theta)
    x = c1 * c2 * E
    y = s1 * c2 * np.exp(1j * q1.phi) - s2 * c1 * np.exp(1j * q2.phi)
    return PostBsmState(X=complex(x), Y=complex(y))


def concurrence_closed(s: PostBsmState) -> float:
    """Concurrence of the post-measurement pure state: 2|X|^2 / (2|X|^2 + |Y|^2)."""
    n = s.N
    if n < ZERO_NORM_EPS:
        raise ZeroNorm("projection has vanishing success probability")
    return 2 * abs(s.X) ** 2 / n


@dataclass(frozen=True)
class DensityMatrix4:
    """Validated 4x4 two-qubit density matrix in the (ee, eg, ge, gg) basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise NonPhysicalInput(f"expected 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise NonPhysicalInput("matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1) > 1e-12 or abs(np.trace(m).imag) > 1e-12:
            raise NonPhysicalInput("trace differs from 1 beyond 1e-12")
        if np.min(np.linalg.eigvalsh(m)) < -1e-10:
            raise NonPhysicalInput("matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", m)


def density_matrix(s: PostBsmState) -> DensityMatrix4:
    """Outer product of the normalized post-measurement amplitude vector
    (0, X, -X, Y)/sqrt(N)."""
    n = s.N
    if n < ZERO_NORM_EPS:
        raise ZeroNorm("projection has vanishing success probability")
    vec = np.array([0, s.X, -s.X, s.Y], dtype=complex) / math.sqrt(n)
    return DensityMatrix4(np.outer(vec, vec.conj()))


def concurrence_wootters(rho: DensityMatrix4) -> float:
    """Concurrence from the spin-flip spectrum of rho.

    Eigenvalues of rho (sy x sy) rho* (sy x sy) in decreasing order;
    round-off on rank-deficient states can push them slightly negative, so
    they are clamped at -1e-10 before the square roots.
    """
    m = rho.matrix
    spin_flipped = m @ _SYSY @ m.conj() @ _SYSY
    evals = np.linalg.eigvals(spin_flipped).real
    if np.min(evals) < -1e-10:
        raise NonPhysicalInput("spin-flip spectrum has a large negative eigenvalue")
    evals = np.sqrt(np.maximum(evals, 0.0))
    evals[::-1].sort()
    return float(max(0.0, evals[0] - evals[1] - evals[2] - evals[3]))


class InitialStateClass(enum.Enum):
    MAXIMALLY_ENTANGLED = "maximally-entangled"
    ALWAYS_ZERO = "always-zero"
    GENERIC = "generic"


def classify_initial_state(q1: BlochAngles, q2: BlochAngles) -> InitialStateClass:
    """Sort an initial angle pair into the analytic regimes of the swapped
    concurrence: |Y| = 0 gives a time-independent singlet (concurrence 1 for
    all times with E != 0); either qubit starting in the ground state gives
    concurrence identically zero."""
    c1c2 = math.cos(q1.theta / 2) * math.cos(q2.theta / 2)
    if c1c2 < 1e-12:
        return InitialStateClass.ALWAYS_ZERO
    y_sq = 0.5 * (
        1
        - math.cos(q1.theta) * math.cos(q2.theta)
        - math.sin(q1.theta) * math.sin(q2.theta) * math.cos(q1.phi - q2.phi)
    )
    if y_sq < 1e-12:
        return InitialStateClass.MAXIMALLY_ENTANGLED
    return InitialStateClass.GENERIC
