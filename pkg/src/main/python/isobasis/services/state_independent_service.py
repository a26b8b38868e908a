"""Skew-symmetry tools for constructions that work on every real state.

Pauli-type labels are bit pairs (x, z) standing for X^x Z^z, so I=(0,0),
X=(1,0), Z=(0,1), XZ=(1,1). Phases are dropped throughout: skew-symmetry
of c*M equals that of M for any scalar c.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import (
    ConsistencyException,
    DimensionMismatchException,
    InvalidInputException,
    UnsupportedParameterException,
)
from ..models.domain.quantum import LocalUnitary, LocalUnitaryString, PureState
from . import tensor_service

logger = logging.getLogger(__name__)

SKEW_TOL = 1e-10
ENUMERATION_MAX_N = 4

_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.diag([1.0, -1.0])


@dataclass(frozen=True)
class PauliLabel:
    x: int
    z: int

    NAMES = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "XZ"}

    @classmethod
    def parse(cls, name: str) -> "PauliLabel":
        for bits, label in cls.NAMES.items():
            if label == name:
                return cls(*bits)
        raise InvalidInputException(f"Unknown Pauli label '{name}'")

    @property
    def name(self) -> str:
        return self.NAMES[(self.x, self.z)]

    @property
    def is_skew(self) -> bool:
        return self.x == 1 and self.z == 1

    def matrix(self) -> np.ndarray:
        return np.linalg.matrix_power(_X, self.x) @ np.linalg.matrix_power(_Z, self.z)


ALL_LABELS = tuple(PauliLabel(x, z) for x, z in ((0, 0), (1, 0), (0, 1), (1, 1)))


@dataclass(frozen=True)
class PauliString:
    """n labels packed into masks; qubit k sits at bit n-1-k (first qubit most significant)."""

    n: int
    x_mask: int
    z_mask: int

    @classmethod
    def from_labels(cls, labels: Sequence[PauliLabel]) -> "PauliString":
        n = len(labels)
        x_mask = sum(label.x << (n - 1 - k) for k, label in enumerate(labels))
        z_mask = sum(label.z << (n - 1 - k) for k, label in enumerate(labels))
        return cls(n, x_mask, z_mask)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        parts = [p for p in text.replace("⊗", ".").replace(" ", ".").split(".") if p]
        if not parts:
            raise InvalidInputException("Empty Pauli string")
        return cls.from_labels([PauliLabel.parse(p) for p in parts])

    @classmethod
    def from_local_string(cls, string: LocalUnitaryString, tol: float = 1e-10) -> "PauliString":
        labels = []
        for factor in string.factors:
            if factor.d != 2:
                raise DimensionMismatchException("Pauli labels need qubit factors")
            match = _match_label(factor.matrix, tol)
            if match is None:
                raise InvalidInputException("Factor is not a Pauli-type operator up to phase")
            labels.append(match)
        return cls.from_labels(labels)

    @property
    def labels(self) -> Tuple[PauliLabel, ...]:
        return tuple(
            PauliLabel((self.x_mask >> (self.n - 1 - k)) & 1, (self.z_mask >> (self.n - 1 - k)) & 1)
            for k in range(self.n)
        )

    def text(self) -> str:
        return ".".join(label.name for label in self.labels)

    def matrix(self) -> np.ndarray:
        return reduce(np.kron, (label.matrix() for label in self.labels))

    def to_local_string(self) -> LocalUnitaryString:
        return LocalUnitaryString.from_matrices(*(label.matrix() for label in self.labels))

    def is_skew(self) -> bool:
        return bin(self.x_mask & self.z_mask).count("1") % 2 == 1


def _match_label(matrix: np.ndarray, tol: float) -> Optional[PauliLabel]:
    for label in ALL_LABELS:
        target = label.matrix()
        phase = np.trace(target.T @ matrix) / 2
        if abs(abs(phase) - 1) <= tol and np.max(np.abs(matrix - phase * target)) <= tol:
            return label
    return None


def product_is_skew(s: PauliString, t: PauliString) -> bool:
    """Parity rule: s† t is skew-symmetric iff sum_k (x_k ^ x'_k)(z_k ^ z'_k) is odd."""
    return bin((s.x_mask ^ t.x_mask) & (s.z_mask ^ t.z_mask)).count("1") % 2 == 1


def pauli_product(a: PauliLabel, b: PauliLabel) -> Tuple[complex, PauliLabel]:
    """a @ b as phase * label; the label is (a.x ^ b.x, a.z ^ b.z)."""
    label = PauliLabel(a.x ^ b.x, a.z ^ b.z)
    product = a.matrix() @ b.matrix()
    phase = complex(np.trace(label.matrix().T @ product) / 2)
    return phase, label


def pauli_closure_table() -> Dict[Tuple[str, str], Tuple[complex, str, bool]]:
    table = {}
    for a, b in itertools.product(ALL_LABELS, repeat=2):
        phase, label = pauli_product(a, b)
        table[(a.name, b.name)] = (phase, label.name, label.is_skew)
    return table


def is_skew_symmetric(matrix: np.ndarray, tol: float = SKEW_TOL) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchException(f"Skew-symmetry needs a square matrix, got shape {matrix.shape}")
    return bool(np.max(np.abs(matrix + matrix.T)) <= tol)


def find_real_counterexample(unitary: LocalUnitary, tol: float = SKEW_TOL) -> Optional[PureState]:
    """A real state psi with <psi|U|psi> != 0, or None when U is skew-symmetric.

    A nonzero diagonal entry gives a basis state; otherwise some U_ij + U_ji != 0
    and (|i> + |j>)/sqrt(2) works.
    """
    u = unitary.matrix
    d = unitary.d
    for k in range(d):
        if abs(u[k, k]) > tol:
            return tensor_service.basis_state(1, d, k)
    for i, j in itertools.combinations(range(d), 2):
        if abs(u[i, j] + u[j, i]) > tol:
            amps = np.zeros(d, dtype=complex)
            amps[[i, j]] = 1 / np.sqrt(2)
            return PureState(1, d, amps)
    return None


def vanishing_expectation_check(unitary: LocalUnitary, samples: int = 100, seed: Optional[int] = None) -> bool:
    """Whether <psi|U|psi> vanishes on random real states and on the basis/pair probe states."""
    d = unitary.d
    rng = np.random.default_rng(seed)
    probes = rng.standard_normal((samples, d))
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    expectations = np.einsum("sa,ab,sb->s", probes, unitary.matrix, probes)
    if samples and np.max(np.abs(expectations)) > SKEW_TOL:
        return False
    return find_real_counterexample(unitary) is None


def _all_pauli(strings: Sequence[LocalUnitaryString]) -> Optional[List[PauliString]]:
    try:
        return [PauliString.from_local_string(s) for s in strings]
    except (InvalidInputException, DimensionMismatchException):
        return None


def verify_si_construction(strings: Sequence[LocalUnitaryString], tol: float = SKEW_TOL) -> bool:
    """Every pairwise product V_i† V_j (i != j) is skew-symmetric.

    Pauli-type strings are cross-checked against the parity rule; a disagreement
    raises ConsistencyException.
    """
    if len(strings) < 2:
        raise InvalidInputException("Need at least two strings")
    if len({(s.n, s.d) for s in strings}) != 1:
        raise DimensionMismatchException("All strings must share one shape")
    paulis = _all_pauli(strings)
    ok = True
    for i, j in itertools.combinations(range(len(strings)), 2):
        skew = is_skew_symmetric((strings[i].dagger() @ strings[j]).global_matrix(), tol)
        if paulis is not None and skew != product_is_skew(paulis[i], paulis[j]):
            logger.warning(f"Parity rule disagrees with matrix check for strings {i} and {j}")
            raise ConsistencyException(f"Parity rule and matrix product disagree for pair ({i}, {j})")
        ok = ok and skew
    return ok


def si_verify_on_random_real_states(
    strings: Sequence[LocalUnitaryString],
    samples: int = 100,
    seed: Optional[int] = None,
    real_only: bool = True,
) -> float:
    if len({(s.n, s.d) for s in strings}) != 1:
        raise DimensionMismatchException("All strings must share one shape")
    n, d = strings[0].n, strings[0].d
    seeds = np.random.default_rng(seed).integers(0, 2 ** 32, size=samples)
    worst = 0.0
    for sample_seed in seeds:
        psi = tensor_service.random_state(n, d, seed=int(sample_seed), real_only=real_only)
        worst = max(worst, tensor_service.build_candidate(psi, strings).f_value)
    return worst


@dataclass
class SIEnumeration:
    n: int
    solutions: List[Tuple[PauliString, ...]] = field(default_factory=list)
    nodes_explored: int = 0
    exhausted: bool = False

    def as_text(self) -> List[List[str]]:
        return [[s.text() for s in solution] for solution in self.solutions]


def canonical_order(strings: Sequence[PauliString]) -> Tuple[PauliString, ...]:
    return tuple(sorted(strings, key=lambda s: s.x_mask))


def enumerate_si_pauli(n: int) -> SIEnumeration:
    """All Pauli-type state-independent constructions with V_1 = I and string j carrying X-pattern j.

    Mapping |0...0> to a basis forces the X-patterns to be a permutation of all
    2^n bit-flip patterns; the canonical order fixes that permutation.
    """
    if n > ENUMERATION_MAX_N:
        raise UnsupportedParameterException(
            f"Enumeration is limited to n <= {ENUMERATION_MAX_N}: a five-qubit construction restricted to the "
            "strings that leave the last qubit unflipped would be a four-qubit one, which does not exist"
        )
    if n < 1:
        raise UnsupportedParameterException(f"n must be positive, got {n}")

    size = 2 ** n
    result = SIEnumeration(n=n)
    placed: List[PauliString] = [PauliString(n, 0, 0)]

    def extend(x_mask: int):
        if x_mask == size:
            result.solutions.append(tuple(placed))
            return
        for z_mask in range(size):
            result.nodes_explored += 1
            candidate = PauliString(n, x_mask, z_mask)
            if all(product_is_skew(prior, candidate) for prior in placed):
                placed.append(candidate)
                extend(x_mask + 1)
                placed.pop()

    extend(1)
    result.exhausted = True
    logger.info(
        f"Enumerated n={n}: {len(result.solutions)} solutions, {result.nodes_explored} nodes explored"
    )
    return result


def si_lift_restriction(strings: Sequence[PauliString]) -> List[PauliString]:
    """Strings leaving the last qubit unflipped, with that qubit dropped.

    On inputs psi ⊗ |0> these strings act on the first n-1 qubits only, so a
    construction for n qubits restricts to one for n-1 qubits.
    """
    if not strings or strings[0].n < 2:
        raise InvalidInputException("Restriction needs strings on at least two qubits")
    kept = [s for s in strings if (s.x_mask & 1) == 0]
    return [PauliString(s.n - 1, s.x_mask >> 1, s.z_mask >> 1) for s in kept]


@dataclass
class ParityCertificate:
    variables: List[str]
    rows: List[Tuple[List[str], int, str]]
    rank: int
    augmented_rank: int
    inconsistent: bool
    combination: List[int] = field(default_factory=list)
    dropped: List[str] = field(default_factory=list)
    solution: Optional[Dict[str, int]] = None


def _four_qubit_rows(drop_last: bool) -> Tuple[List[str], List[Tuple[str, List[int], List[str]]]]:
    """The six strings with zero, one and four bit flips, as (name, x-bits, z-variable per qubit)."""
    names = [f"r{i}{k}" for i in range(1, 6) for k in range(1, 5)]
    rows = [("V1", [0, 0, 0, 0], [None] * 4)]
    for i in range(1, 5):
        rows.append((f"V{i + 1}", [int(k == i) for k in range(1, 5)], [f"r{i}{k}" for k in range(1, 5)]))
    if not drop_last:
        rows.append(("V6", [1, 1, 1, 1], [f"r5{k}" for k in range(1, 5)]))
    return names, rows


def _gf2_solve(matrix: np.ndarray, rhs: np.ndarray):
    """Row-reduce [matrix | rhs] over GF(2), tracking which original rows each reduced row sums."""
    a = matrix.copy() % 2
    b = rhs.copy() % 2
    combo = np.eye(a.shape[0], dtype=np.uint8)
    pivots = []
    row = 0
    for col in range(a.shape[1]):
        hits = np.nonzero(a[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + hits[0]
        a[[row, pivot]], b[[row, pivot]], combo[[row, pivot]] = a[[pivot, row]], b[[pivot, row]], combo[[pivot, row]]
        for other in range(a.shape[0]):
            if other != row and a[other, col]:
                a[other] ^= a[row]
                b[other] ^= b[row]
                combo[other] ^= combo[row]
        pivots.append(col)
        row += 1
        if row == a.shape[0]:
            break
    return a, b, combo, pivots


def four_qubit_parity_certificate(drop_last_row: bool = False) -> ParityCertificate:
    """GF(2) system over the z-bits r_ik of the four-qubit table; inconsistent when all six rows are kept."""
    names, table = _four_qubit_rows(drop_last_row)
    index = {name: i for i, name in enumerate(names)}
    equations: List[Tuple[List[str], int, str]] = []

    # every string against V1 = I, then every pair of non-identity strings
    for (name_a, x_a, z_a), (name_b, x_b, z_b) in itertools.combinations(table, 2):
        variables = []
        for k in range(4):
            if x_a[k] != x_b[k]:
                variables += [v for v in (z_a[k], z_b[k]) if v is not None]
        equations.append((variables, 1, f"{name_a}†{name_b} skew-symmetric"))

    matrix = np.zeros((len(equations), len(names)), dtype=np.uint8)
    rhs = np.zeros(len(equations), dtype=np.uint8)
    for row, (variables, value, _) in enumerate(equations):
        for v in variables:
            matrix[row, index[v]] ^= 1
        rhs[row] = value

    reduced, reduced_rhs, combo, pivots = _gf2_solve(matrix, rhs)
    rank = len(pivots)
    contradictions = [r for r in range(reduced.shape[0]) if not reduced[r].any() and reduced_rhs[r]]
    inconsistent = bool(contradictions)
    certificate = ParityCertificate(
        variables=names,
        rows=equations,
        rank=rank,
        augmented_rank=rank + (1 if inconsistent else 0),
        inconsistent=inconsistent,
        dropped=["V6"] if drop_last_row else [],
    )
    if inconsistent:
        certificate.combination = np.nonzero(combo[contradictions[0]])[0].tolist()
    else:
        solution = np.zeros(len(names), dtype=np.uint8)
        for r, col in enumerate(pivots):
            solution[col] = reduced_rhs[r]
        certificate.solution = {name: int(solution[i]) for i, name in enumerate(names)}
    logger.info(
        f"Four-qubit parity system: {len(equations)} equations, rank {rank}, "
        f"{'inconsistent' if inconsistent else 'consistent'}"
    )
    return certificate


def check_certificate(certificate: ParityCertificate) -> bool:
    """Re-add the combination rows and confirm they read 0 = 1."""
    if not certificate.inconsistent:
        return False
    counts: Dict[str, int] = {}
    rhs = 0
    for r in certificate.combination:
        variables, value, _ = certificate.rows[r]
        rhs ^= value
        for v in variables:
            counts[v] = counts.get(v, 0) ^ 1
    return rhs == 1 and not any(counts.values())


def eigenvector_witness(string: LocalUnitaryString) -> Tuple[PureState, float]:
    """Product of one eigenvector per factor; V maps it to a multiple of itself."""
    vectors = []
    for factor in string.factors:
        _, vecs = np.linalg.eig(factor.matrix)
        vectors.append(vecs[:, 0] / np.linalg.norm(vecs[:, 0]))
    witness = PureState(string.n, string.d, reduce(np.kron, vectors))
    overlap = abs(tensor_service.inner_product(witness, tensor_service.apply_local_string(string, witness)))
    return witness, overlap


@dataclass(frozen=True)
class OddDimensionReport:
    d: int
    trials: int
    max_abs_det: float
    all_vanish: bool
    sign_factor: int

    @property
    def determinant_forced_zero(self) -> bool:
        # det(A) = det(A^T) = det(-A) = (-1)^d det(A)
        return self.sign_factor == -1


def odd_dim_obstruction(d: int, trials: int = 1000, seed: Optional[int] = None) -> OddDimensionReport:
    if d % 2 == 0:
        raise UnsupportedParameterException(f"d={d} is even; XZ-type skew-symmetric unitaries exist there")
    if d < 1:
        raise UnsupportedParameterException(f"d must be a positive odd dimension, got {d}")
    if trials < 1:
        raise InvalidInputException(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        a = g - g.T
        scale = np.linalg.norm(a, 2)
        if scale > 0:
            a /= scale
        worst = max(worst, abs(np.linalg.det(a)))
    report = OddDimensionReport(d, trials, worst, worst <= SKEW_TOL, (-1) ** d)
    logger.info(f"Odd-dimension check d={d}: max |det| = {worst:.3e} over {trials} trials")
    return report


def reflection_gates(theta: float) -> Dict[str, np.ndarray]:
    c, s = np.cos(theta), np.sin(theta)
    return {
        "I": np.eye(2),
        "U1": np.array([[c, s], [s, -c]]),
        "U2": np.array([[s, -c], [-c, -s]]),
        "XZ": _X @ _Z,
    }


def rotation(alpha: float) -> np.ndarray:
    return np.array([[np.cos(alpha), -np.sin(alpha)], [np.sin(alpha), np.cos(alpha)]])


@dataclass(frozen=True)
class ReductionCheck:
    theta: float
    images: Dict[str, str]
    max_deviation: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= SKEW_TOL


def pauli_reduction_check(theta: float) -> ReductionCheck:
    """Conjugating {I, U1(theta), U2(theta), XZ} by W(theta/2) lands on {I, Z, X, XZ} up to phase."""
    w = rotation(theta / 2)
    expected = {"I": "I", "U1": "Z", "U2": "X", "XZ": "XZ"}
    worst = 0.0
    for name, gate in reflection_gates(theta).items():
        image = w.T @ gate @ w
        target = PauliLabel.parse(expected[name]).matrix()
        phase = np.trace(target.T @ image) / 2
        worst = max(worst, float(np.max(np.abs(image - phase * target))), abs(abs(phase) - 1))
    return ReductionCheck(theta, expected, worst)
