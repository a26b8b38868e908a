"""Immutable value types for multipartite pure states and local unitaries.

Basis index convention: index(l_1, ..., l_n) = sum_k l_k * d**(n - k), i.e. the
first subsystem is the most significant digit, matching the ket string
|l_1 ... l_n>.
"""
from dataclasses import dataclass, field
from functools import reduce
from typing import Tuple

import numpy as np

from ...core.exceptions import DimensionMismatchException, MalformedStateException

NORM_TOL = 1e-10
RENORMALIZE_TOL = 1e-6
UNITARY_TOL = 1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PureState:
    n: int
    d: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or self.d < 2:
            raise DimensionMismatchException(f"Invalid shape n={self.n}, d={self.d}")
        amps = _frozen(np.ravel(self.amps))
        if amps.shape[0] != self.d ** self.n:
            raise DimensionMismatchException(
                f"Expected {self.d ** self.n} amplitudes for (n={self.n}, d={self.d}), got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise MalformedStateException("State has non-finite amplitudes")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise MalformedStateException(f"State is not normalized (norm={norm:.3e})")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amplitudes(cls, n: int, d: int, amps, tol: float = RENORMALIZE_TOL) -> "PureState":
        """Build a state from user-supplied amplitudes, renormalizing norms within `tol` of 1."""
        amps = np.asarray(amps, dtype=complex).ravel()
        if amps.shape[0] != d ** n:
            raise DimensionMismatchException(f"Expected {d ** n} amplitudes, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise MalformedStateException("State has non-finite amplitudes")
        norm = float(np.linalg.norm(amps))
        if norm == 0.0:
            raise MalformedStateException("Zero vector is not a state")
        if abs(norm - 1.0) >= tol:
            raise MalformedStateException(f"Norm deviates from 1 by {abs(norm - 1.0):.3e}")
        return cls(n, d, amps / norm)

    @property
    def dim(self) -> int:
        return self.d ** self.n

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n, self.d

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.amps.imag)) <= tol)


@dataclass(frozen=True)
class LocalUnitary:
    d: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        matrix = _frozen(self.matrix)
        if matrix.shape != (self.d, self.d):
            raise DimensionMismatchException(f"Expected a {self.d}x{self.d} matrix, got {matrix.shape}")
        residual = unitarity_residual(matrix)
        if residual > UNITARY_TOL:
            raise MalformedStateException(f"Matrix is not unitary (residual={residual:.3e})")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, d: int) -> "LocalUnitary":
        return cls(d, np.eye(d))

    def dagger(self) -> "LocalUnitary":
        return LocalUnitary(self.d, self.matrix.conj().T)

    def __matmul__(self, other: "LocalUnitary") -> "LocalUnitary":
        if other.d != self.d:
            raise DimensionMismatchException("Cannot multiply unitaries of different dimension")
        return LocalUnitary(self.d, self.matrix @ other.matrix)


@dataclass(frozen=True)
class LocalUnitaryString:
    factors: Tuple[LocalUnitary, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise DimensionMismatchException("A local unitary string needs at least one factor")
        if len({u.d for u in factors}) != 1:
            raise DimensionMismatchException("All factors of a string must share one dimension")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_matrices(cls, *matrices: np.ndarray) -> "LocalUnitaryString":
        return cls(tuple(LocalUnitary(np.shape(m)[0], m) for m in matrices))

    @classmethod
    def identity(cls, n: int, d: int) -> "LocalUnitaryString":
        return cls(tuple(LocalUnitary.identity(d) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def d(self) -> int:
        return self.factors[0].d

    def matrices(self) -> np.ndarray:
        return np.stack([u.matrix for u in self.factors])

    def dagger(self) -> "LocalUnitaryString":
        return LocalUnitaryString(tuple(u.dagger() for u in self.factors))

    def __matmul__(self, other: "LocalUnitaryString") -> "LocalUnitaryString":
        if (other.n, other.d) != (self.n, self.d):
            raise DimensionMismatchException("Cannot multiply strings of different shape")
        return LocalUnitaryString(tuple(a @ b for a, b in zip(self.factors, other.factors)))

    def global_matrix(self) -> np.ndarray:
        """Dense d^n x d^n Kronecker product; only for small systems and checks."""
        return reduce(np.kron, (u.matrix for u in self.factors))


@dataclass(frozen=True)
class CandidateBasis:
    state: PureState
    strings: Tuple[LocalUnitaryString, ...]
    derived_states: Tuple[PureState, ...]
    gram: np.ndarray = field(repr=False)
    f_value: float = 0.0

    @property
    def m(self) -> int:
        return len(self.strings)

    def max_off_diagonal(self) -> float:
        off = np.abs(self.gram - np.diag(np.diag(self.gram)))
        return float(off.max()) if off.size else 0.0

    def is_orthonormal(self, tol: float = 1e-10) -> bool:
        return self.f_value <= tol


@dataclass(frozen=True)
class SchmidtForm:
    coeffs: np.ndarray = field(repr=False)
    rot_a: LocalUnitary = field(repr=False)
    rot_b: LocalUnitary = field(repr=False)

    @property
    def rank(self) -> int:
        return int(np.sum(self.coeffs > 1e-12))


def unitarity_residual(matrix: np.ndarray) -> float:
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))))


@dataclass(frozen=True)
class UnitaryParams:
    """Chart coordinates of U(d): d(d-1)/2 Givens (angle, phase) pairs, then d phases."""

    d: int
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        theta = np.array(np.ravel(self.theta), dtype=float)
        if theta.shape[0] != self.d * self.d:
            raise DimensionMismatchException(
                f"Expected {self.d * self.d} parameters for d={self.d}, got {theta.shape[0]}"
            )
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def zeros(cls, d: int) -> "UnitaryParams":
        return cls(d, np.zeros(d * d))
