"""State arithmetic: local unitary application, overlaps, the objective f,
Schmidt forms and seeded sampling.

Every function here is pure and operates on immutable values.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import (
    DimensionMismatchException,
    InvalidInputException,
    MalformedStateException,
)
from ..models.domain.quantum import (
    CandidateBasis,
    LocalUnitary,
    LocalUnitaryString,
    PureState,
    SchmidtForm,
)

logger = logging.getLogger(__name__)

BLOCH_TOL = 1e-12


def make_state(n: int, d: int, amps: Sequence[complex]) -> PureState:
    return PureState.from_amplitudes(n, d, amps)


def basis_state(n: int, d: int, index: int) -> PureState:
    amps = np.zeros(d ** n, dtype=complex)
    amps[index] = 1.0
    return PureState(n, d, amps)


def apply_on_leg(batch: np.ndarray, unitaries: np.ndarray, leg: int, n: int, d: int) -> np.ndarray:
    """Apply one d x d matrix (or one per row of `batch`) to tensor leg `leg`.

    `batch` has shape (m, d**n); `unitaries` is (d, d) or (m, d, d).
    """
    m = batch.shape[0]
    view = batch.reshape(m, d ** leg, d, d ** (n - leg - 1))
    if unitaries.ndim == 2:
        out = np.einsum("ab,jlbr->jlar", unitaries, view)
    else:
        out = np.einsum("jab,jlbr->jlar", unitaries, view)
    return out.reshape(m, -1)


def apply_factors(batch: np.ndarray, factors: np.ndarray, n: int, d: int) -> np.ndarray:
    """Apply per-row strings: `factors` has shape (m, n, d, d) or (n, d, d)."""
    out = batch
    for k in range(n):
        out = apply_on_leg(out, factors[..., k, :, :], k, n, d)
    return out


def _check_string(V: LocalUnitaryString, psi: PureState):
    if (V.n, V.d) != psi.shape:
        raise DimensionMismatchException(
            f"String shape (n={V.n}, d={V.d}) does not match state shape (n={psi.n}, d={psi.d})"
        )


def apply_local_string(V: LocalUnitaryString, psi: PureState) -> PureState:
    _check_string(V, psi)
    out = apply_factors(psi.amps[None, :], V.matrices(), psi.n, psi.d)[0]
    return PureState(psi.n, psi.d, out)


def inner_product(phi: PureState, psi: PureState) -> complex:
    if phi.shape != psi.shape:
        raise DimensionMismatchException("Inner product of states with different shapes")
    return complex(np.vdot(phi.amps, psi.amps))


def gram_matrix(rows: np.ndarray) -> np.ndarray:
    return rows.conj() @ rows.T


def f_from_gram(gram: np.ndarray) -> float:
    total = float(np.sum(np.abs(gram) ** 2))
    diagonal = float(np.sum(np.abs(np.diag(gram)) ** 2))
    return max(total - diagonal, 0.0)


def gram_and_f(states: Sequence[PureState]) -> Tuple[np.ndarray, float]:
    if len(states) < 2:
        raise InvalidInputException("gram_and_f needs at least two states")
    if len({s.shape for s in states}) != 1:
        raise DimensionMismatchException("All states must share one shape")
    gram = gram_matrix(np.stack([s.amps for s in states]))
    return gram, f_from_gram(gram)


def build_candidate(psi: PureState, strings: Sequence[LocalUnitaryString]) -> CandidateBasis:
    derived = tuple(apply_local_string(V, psi) for V in strings)
    gram, f_value = gram_and_f(derived)
    return CandidateBasis(psi, tuple(strings), derived, gram, f_value)


def _fix_column_phase(u: np.ndarray, vh: np.ndarray) -> None:
    for col in range(u.shape[1]):
        pivot = int(np.argmax(np.abs(u[:, col]) > 1e-12))
        phase = np.exp(-1j * np.angle(u[pivot, col]))
        u[:, col] *= phase
        vh[col, :] *= np.conj(phase)


def _stable_order(s: np.ndarray, u: np.ndarray) -> List[int]:
    def key(col: int):
        vec = np.round(u[:, col], 10)
        return (-round(float(s[col]), 10), tuple((-v.real, -v.imag) for v in vec))

    return sorted(range(len(s)), key=key)


def schmidt_decompose(psi: PureState) -> SchmidtForm:
    if psi.n != 2:
        raise DimensionMismatchException(f"Schmidt decomposition needs a bipartite state, got n={psi.n}")
    d = psi.d
    coeff = psi.amps.reshape(d, d)
    u, s, vh = np.linalg.svd(coeff)
    _fix_column_phase(u, vh)
    order = _stable_order(s, u)
    u, s, vh = u[:, order], s[order], vh[order, :]
    # (rot_a ⊗ rot_b) maps the coefficient matrix M to rot_a M rot_b^T = diag(s)
    return SchmidtForm(coeffs=s, rot_a=LocalUnitary(d, u.conj().T), rot_b=LocalUnitary(d, vh.conj()))


def schmidt_state(coeffs: Sequence[float]) -> PureState:
    coeffs = np.asarray(coeffs, dtype=float)
    d = coeffs.shape[0]
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = coeffs
    return make_state(2, d, amps)


def random_state(n: int, d: int, seed: Optional[int] = None, real_only: bool = False) -> PureState:
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(d ** n).astype(complex)
    if not real_only:
        amps = amps + 1j * rng.standard_normal(d ** n)
    return PureState(n, d, amps / np.linalg.norm(amps))


def canonical_three_qubit(a: complex, b: float, c: float, d: float, e: float) -> PureState:
    if not np.all(np.isfinite([a, b, c, d, e])):
        raise MalformedStateException("Canonical coefficients must be finite")
    norm_sq = abs(a) ** 2 + b ** 2 + c ** 2 + d ** 2 + e ** 2
    if abs(norm_sq - 1.0) > 1e-10:
        raise MalformedStateException(f"Canonical coefficients are not normalized (sum={norm_sq:.12f})")
    amps = np.zeros(8, dtype=complex)
    amps[[0, 3, 5, 6, 7]] = [a, b, c, d, e]
    return PureState(3, 2, amps / np.sqrt(norm_sq))


def lift_with_ancilla(psi: PureState) -> PureState:
    """psi ⊗ |0>, the embedding used to lift a basis-free state to n + 1 subsystems."""
    ancilla = np.zeros(psi.d, dtype=complex)
    ancilla[0] = 1.0
    return PureState(psi.n + 1, psi.d, np.kron(psi.amps, ancilla))


def bloch_vector(qubit: PureState) -> np.ndarray:
    if qubit.shape != (1, 2):
        raise DimensionMismatchException("Bloch coordinates need a single qubit")
    alpha, beta = qubit.amps
    cross = np.conj(alpha) * beta
    return np.array([2 * cross.real, 2 * cross.imag, abs(alpha) ** 2 - abs(beta) ** 2])


def hemisphere_partition(qubit_states: Sequence[PureState]) -> Tuple[List[int], List[int]]:
    """Split qubit states by the sign of their first nonzero Bloch coordinate in (z, x, y) order.

    Returns the indices of the two sets. Antipodal (orthogonal) states always
    land in different sets.
    """
    set_a, set_b = [], []
    for index, qubit in enumerate(qubit_states):
        x, y, z = bloch_vector(qubit)
        sign = next((np.sign(c) for c in (z, x, y) if abs(c) > BLOCH_TOL), 1.0)
        (set_a if sign > 0 else set_b).append(index)
    return set_a, set_b
