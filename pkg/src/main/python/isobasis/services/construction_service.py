"""Closed-form basis constructions: Bell/GHZ, bipartite Schmidt-form sets for
d = 2, 4, 8, the W-state recursion and the real state-independent sets.
"""
import enum
import itertools
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidInputException, UnsupportedParameterException
from ..models.domain.quantum import CandidateBasis, LocalUnitaryString, PureState
from . import tensor_service

logger = logging.getLogger(__name__)

I2 = np.eye(2)
X2 = np.array([[0, 1], [1, 0]], dtype=float)
Z2 = np.diag([1.0, -1.0])
XZ2 = X2 @ Z2

QUBIT_GATES: Dict[str, np.ndarray] = {"I": I2, "X": X2, "Z": Z2, "XZ": XZ2}

TWO_QUBIT_SI = (
    ("I", "I"),
    ("I", "XZ"),
    ("XZ", "Z"),
    ("XZ", "X"),
)

THREE_QUBIT_SI = (
    ("I", "I", "I"),
    ("Z", "Z", "XZ"),
    ("Z", "XZ", "I"),
    ("XZ", "I", "I"),
    ("Z", "X", "XZ"),
    ("X", "I", "XZ"),
    ("X", "XZ", "Z"),
    ("X", "XZ", "X"),
)

SI_TABLES = {2: TWO_QUBIT_SI, 3: THREE_QUBIT_SI}


class ConstructionFamily(str, enum.Enum):
    BELL = "bell"
    GHZ = "ghz"
    TWO_QUBIT_SCHMIDT = "two_qubit_schmidt"
    BIPARTITE_POW2 = "bipartite_pow2"
    W_STATE = "w_state"
    THREE_QUBIT_SI = "three_qubit_si"
    TWO_QUBIT_SI = "two_qubit_si"


@dataclass(frozen=True)
class FamilyParameters:
    family: ConstructionFamily
    n: int
    d: int
    schmidt: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        family, n, d = self.family, self.n, self.d
        if family == ConstructionFamily.GHZ and (n < 2 or d < 2):
            raise UnsupportedParameterException("GHZ needs n >= 2 and d >= 2")
        if family == ConstructionFamily.BELL and (n, d) != (2, 2):
            raise UnsupportedParameterException("Bell construction is fixed to (n, d) = (2, 2)")
        if family in (ConstructionFamily.BIPARTITE_POW2, ConstructionFamily.TWO_QUBIT_SCHMIDT):
            if n != 2 or d not in (2, 4, 8):
                raise UnsupportedParameterException("Bipartite Schmidt constructions need n = 2, d in {2, 4, 8}")
            if family == ConstructionFamily.TWO_QUBIT_SCHMIDT and d != 2:
                raise UnsupportedParameterException("two_qubit_schmidt is fixed to d = 2")
        if family == ConstructionFamily.W_STATE and (n < 1 or d != 2):
            raise UnsupportedParameterException("W-state construction needs n >= 1 qubits")
        if family == ConstructionFamily.TWO_QUBIT_SI and (n, d) != (2, 2):
            raise UnsupportedParameterException("two_qubit_si is fixed to (n, d) = (2, 2)")
        if family == ConstructionFamily.THREE_QUBIT_SI and (n, d) != (3, 2):
            raise UnsupportedParameterException("three_qubit_si is fixed to (n, d) = (3, 2)")
        if self.schmidt is not None and len(self.schmidt) != d:
            raise InvalidInputException(f"Expected {d} Schmidt coefficients, got {len(self.schmidt)}")
        if self.schmidt is not None:
            lam = np.asarray(self.schmidt, dtype=float)
            if not np.all(np.isfinite(lam)) or np.any(lam < 0) or not np.any(lam > 0):
                raise InvalidInputException("Schmidt coefficients must be finite, non-negative and not all zero")


def qubit_string(*labels: str) -> LocalUnitaryString:
    return LocalUnitaryString.from_matrices(*(QUBIT_GATES[label] for label in labels))


def qubit_register(*labels: str) -> np.ndarray:
    """A 2^m-dimensional unitary as a Kronecker product of qubit gates (big-endian levels)."""
    return reduce(np.kron, (QUBIT_GATES[label] for label in labels))


def generalized_pauli(d: int) -> Tuple[np.ndarray, np.ndarray]:
    if d < 2:
        raise UnsupportedParameterException(f"Generalized Paulis need d >= 2, got {d}")
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return shift, clock


def ghz_state(n: int, d: int) -> PureState:
    amps = np.zeros(d ** n, dtype=complex)
    # |k...k> sits at index k * (d^n - 1) / (d - 1)
    step = (d ** n - 1) // (d - 1)
    amps[np.arange(d) * step] = 1 / np.sqrt(d)
    return PureState(n, d, amps)


def ghz_basis_strings(n: int, d: int) -> List[LocalUnitaryString]:
    FamilyParameters(ConstructionFamily.GHZ, n, d)
    shift, clock = generalized_pauli(d)
    strings = []
    for j in itertools.product(range(d), repeat=n):
        factors = [np.linalg.matrix_power(clock, j[0])]
        factors += [np.linalg.matrix_power(shift, jk) for jk in j[1:]]
        strings.append(LocalUnitaryString.from_matrices(*factors))
    return strings


def two_qubit_schmidt_strings() -> List[LocalUnitaryString]:
    return [qubit_string(*row) for row in TWO_QUBIT_SI]


def _strip_z(labels: Sequence[str]) -> Tuple[str, ...]:
    return tuple({"I": "I", "Z": "I", "X": "X", "XZ": "X"}[label] for label in labels)


def bipartite_pow2_strings(d: int) -> List[LocalUnitaryString]:
    """Schmidt-coefficient independent strings for sum_l lambda_l |l, l>, d = 4 or 8.

    System 2 carries the state-independent qubit set on its log2(d) qubits,
    system 1 the same set with Z gates deleted; the remaining blocks shift
    system 1 by X_d^jt.
    """
    if d not in (4, 8):
        raise UnsupportedParameterException(f"bipartite_pow2_strings supports d in {{4, 8}}, got {d}")
    table = SI_TABLES[int(np.log2(d))]
    shift, _ = generalized_pauli(d)
    strings = []
    for jt in range(d):
        shift_power = np.linalg.matrix_power(shift, jt)
        for row in table:
            u1 = shift_power @ qubit_register(*_strip_z(row))
            u2 = qubit_register(*row)
            strings.append(LocalUnitaryString.from_matrices(u1, u2))
    return strings


def schmidt_form_strings(d: int) -> List[LocalUnitaryString]:
    if d == 2:
        return two_qubit_schmidt_strings()
    return bipartite_pow2_strings(d)


def schmidt_basis_for(psi: PureState) -> CandidateBasis:
    """A psi-basis for a bipartite state with d in {2, 4, 8}.

    Each string is conjugated by the Schmidt rotations, V_j = (W_A† A_j W_A) ⊗ (W_B† B_j W_B),
    so V_j psi = (W_A ⊗ W_B)† (A_j ⊗ B_j) psi_S is a local-unitary transform of psi itself.
    """
    FamilyParameters(ConstructionFamily.BIPARTITE_POW2, psi.n, psi.d)
    form = tensor_service.schmidt_decompose(psi)
    rot = LocalUnitaryString((form.rot_a, form.rot_b))
    strings = [rot.dagger() @ s @ rot for s in schmidt_form_strings(psi.d)]
    basis = tensor_service.build_candidate(psi, strings)
    logger.debug(f"Schmidt basis for d={psi.d}: f={basis.f_value:.3e}")
    return basis


def w_state(n: int) -> PureState:
    if n < 1:
        raise UnsupportedParameterException(f"W state needs n >= 1, got {n}")
    amps = np.zeros(2 ** n, dtype=complex)
    amps[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return PureState(n, 2, amps)


def w_basis_strings(n: int) -> List[LocalUnitaryString]:
    if n < 1:
        raise UnsupportedParameterException(f"W basis needs n >= 1, got {n}")
    rows: List[Tuple[np.ndarray, ...]] = [(I2,), (X2,)]
    for _ in range(1, n):
        upper = [row + (I2,) for row in rows]
        lower = [tuple(u @ Z2 for u in row) + (X2,) for row in rows]
        rows = upper + lower
    return [LocalUnitaryString.from_matrices(*row) for row in rows]


def state_independent_strings(n: int) -> List[LocalUnitaryString]:
    if n not in SI_TABLES:
        raise UnsupportedParameterException(
            f"Real state-independent constructions exist only for n in {{2, 3}}, got {n}"
        )
    return [qubit_string(*row) for row in SI_TABLES[n]]


def family_state(params: FamilyParameters, seed: int = 0) -> PureState:
    """The default state a family is demonstrated on."""
    family = params.family
    if family in (ConstructionFamily.BELL, ConstructionFamily.GHZ):
        return ghz_state(params.n, params.d)
    if family == ConstructionFamily.W_STATE:
        return w_state(params.n)
    if family in (ConstructionFamily.TWO_QUBIT_SCHMIDT, ConstructionFamily.BIPARTITE_POW2):
        if params.schmidt is None:
            lam = np.abs(np.random.default_rng(seed).standard_normal(params.d))
        else:
            lam = np.asarray(params.schmidt, dtype=float)
        return tensor_service.schmidt_state(lam / np.linalg.norm(lam))
    return tensor_service.random_state(params.n, params.d, seed=seed, real_only=True)


def family_strings(params: FamilyParameters) -> List[LocalUnitaryString]:
    family = params.family
    if family in (ConstructionFamily.BELL, ConstructionFamily.GHZ):
        return ghz_basis_strings(params.n, params.d)
    if family == ConstructionFamily.W_STATE:
        return w_basis_strings(params.n)
    if family in (ConstructionFamily.TWO_QUBIT_SCHMIDT, ConstructionFamily.BIPARTITE_POW2):
        return schmidt_form_strings(params.d)
    return state_independent_strings(params.n)


def construct(params: FamilyParameters, seed: int = 0) -> CandidateBasis:
    psi = family_state(params, seed=seed)
    basis = tensor_service.build_candidate(psi, family_strings(params))
    logger.info(
        f"Constructed {params.family.value} (n={params.n}, d={params.d}): "
        f"{basis.m} strings, f={basis.f_value:.3e}"
    )
    return basis
