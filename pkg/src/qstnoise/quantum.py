"""Qubit states, the tetrahedral SIC-POVM, Born probabilities and fidelity.

Everything here is 2x2 and closed form; numpy is used only as a container.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DegenerateParameters

TOL = 1e-12
DEGENERATE_NORM = 1e-24
# |det| below this is round-off of a rank-1 matrix; sqrt would inflate it to ~1e-8
DET_FLOOR = 1e-15

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# Bloch directions of the SIC-POVM: (+-1, +-1, +-1)/sqrt(3), even number of minus signs.
TETRAHEDRON = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / math.sqrt(3.0)


def _as_matrix2(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated qubit density matrix.

    Construction checks hermiticity, unit trace and positivity, each to
    ``TOL``. The wrapped array is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix2(self.matrix)
        object.__setattr__(self, "matrix", m)
        if np.max(np.abs(m - m.conj().T)) > TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TOL:
            raise ValueError(f"density matrix trace is {np.trace(m).real!r}, not 1")
        if np.linalg.eigvalsh(m).min() < -TOL:
            raise ValueError("density matrix is not positive semidefinite")

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(IDENTITY / 2)

    @classmethod
    def from_bloch(cls, s) -> "DensityMatrix":
        sx, sy, sz = (float(v) for v in s)
        return cls(0.5 * (IDENTITY + sx * PAULI_X + sy * PAULI_Y + sz * PAULI_Z))

    def bloch_vector(self) -> np.ndarray:
        m = self.matrix
        return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def determinant(self) -> float:
        m = self.matrix
        return float((m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real)

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())


@dataclass(frozen=True)
class PureStateAngles:
    """Polar angle ``theta`` in [0, pi] and azimuth ``phi`` in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi={self.phi!r} outside [0, 2*pi)")


@dataclass(frozen=True)
class CholeskyParams:
    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("Cholesky parameters must be finite")
        if sum(v * v for v in vals) <= DEGENERATE_NORM:
            raise DegenerateParameters("Cholesky parameters at the origin")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (float(self.t1), float(self.t2), float(self.t3), float(self.t4))

    @classmethod
    def from_sequence(cls, t) -> "CholeskyParams":
        t1, t2, t3, t4 = (float(v) for v in t)
        return cls(t1, t2, t3, t4)


@dataclass(frozen=True, eq=False)
class SicPovm:
    """Four qubit effects ``M_j = (I + r_j . sigma) / 4``.

    ``directions`` holds the unit Bloch vectors r_j, one per row.
    """

    operators: Tuple[np.ndarray, ...]
    directions: np.ndarray

    def pauli_coefficients(self) -> np.ndarray:
        """Rows ``(c, vx, vy, vz)`` with ``M_j = c I + v . sigma``.

        Then ``Tr(M_j rho) = c + v . s`` for a state with Bloch vector s.
        """
        rows = []
        for m in self.operators:
            rows.append([np.trace(m).real / 2] + [np.trace(m @ p).real / 2 for p in PAULIS])
        return np.array(rows, dtype=float)

    def permuted(self, order) -> "SicPovm":
        order = list(order)
        return SicPovm(tuple(self.operators[i] for i in order), self.directions[order])


def pure_state_density(angles: PureStateAngles) -> DensityMatrix:
    """Return ``|psi><psi|`` for ``|psi> = (cos(theta/2), e^{i phi} sin(theta/2))``."""
    c = math.cos(angles.theta / 2)
    s = math.sin(angles.theta / 2)
    psi = np.array([c, complex(math.cos(angles.phi), math.sin(angles.phi)) * s])
    rho = np.outer(psi, psi.conj())
    # exact Hermitian symmetry and real diagonal
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)


def cholesky_factor(t: CholeskyParams) -> np.ndarray:
    t1, t2, t3, t4 = t.as_tuple()
    return np.array([[t1, 0.0], [complex(t3, t4), t2]], dtype=complex)


def density_from_cholesky(t: CholeskyParams) -> DensityMatrix:
    """Map four real parameters onto a physical state, ``T^dag T / Tr(T^dag T)``."""
    T = cholesky_factor(t)
    gram = T.conj().T @ T
    norm = np.trace(gram).real
    if not norm > DEGENERATE_NORM:
        raise DegenerateParameters(f"Tr(T^dag T) = {norm!r} is degenerate")
    rho = gram / norm
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)


def sic_povm() -> SicPovm:
    ops = []
    for r in TETRAHEDRON:
        m = 0.25 * (IDENTITY + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z)
        m.setflags(write=False)
        ops.append(m)
    directions = TETRAHEDRON.copy()
    directions.setflags(write=False)
    return SicPovm(tuple(ops), directions)


def born_probabilities(rho: DensityMatrix, povm: SicPovm) -> np.ndarray:
    """``p_j = Tr(M_j rho)`` for each effect of ``povm``."""
    return np.array([np.trace(m @ rho.matrix).real for m in povm.operators])


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Squared Uhlmann fidelity of two qubit states.

    Uses the 2x2 identity ``F = Tr(rho sigma) + 2 sqrt(det rho det sigma)``.
    Determinants that are negative or below ``DET_FLOOR`` are round-off and
    count as zero.
    """
    overlap = float(np.trace(rho.matrix @ sigma.matrix).real)
    da, db = rho.determinant(), sigma.determinant()
    da = da if da > DET_FLOOR else 0.0
    db = db if db > DET_FLOOR else 0.0
    det_prod = da * db
    f = overlap + 2.0 * math.sqrt(det_prod)
    return min(max(f, 0.0), 1.0)
