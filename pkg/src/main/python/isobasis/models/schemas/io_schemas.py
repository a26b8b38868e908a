"""JSON file formats for states, unitaries, bases and analysis reports."""
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ...core.exceptions import DimensionMismatchException
from ..domain.quantum import LocalUnitary, LocalUnitaryString, PureState


class StateFile(BaseModel):
    n: int = Field(..., ge=1, description="Number of subsystems")
    d: int = Field(..., ge=2, description="Local dimension")
    amps_re: List[float] = Field(..., description="Real parts, most significant subsystem first")
    amps_im: List[float] = Field(..., description="Imaginary parts")

    @model_validator(mode="after")
    def _check_lengths(self):
        expected = self.d ** self.n
        if len(self.amps_re) != expected or len(self.amps_im) != expected:
            raise ValueError(f"Expected {expected} amplitudes for (n={self.n}, d={self.d})")
        return self

    def to_domain(self) -> PureState:
        return PureState.from_amplitudes(self.n, self.d, np.asarray(self.amps_re) + 1j * np.asarray(self.amps_im))

    @classmethod
    def from_domain(cls, psi: PureState) -> "StateFile":
        return cls(n=psi.n, d=psi.d, amps_re=psi.amps.real.tolist(), amps_im=psi.amps.imag.tolist())


class UnitaryFile(BaseModel):
    d: int = Field(..., ge=1)
    re: List[List[float]] = Field(..., description="Row-major real parts")
    im: List[List[float]] = Field(..., description="Row-major imaginary parts")

    def to_domain(self) -> LocalUnitary:
        return LocalUnitary(self.d, np.asarray(self.re) + 1j * np.asarray(self.im))

    @classmethod
    def from_domain(cls, unitary: LocalUnitary) -> "UnitaryFile":
        return cls(d=unitary.d, re=unitary.matrix.real.tolist(), im=unitary.matrix.imag.tolist())


class StringFile(BaseModel):
    factors: List[UnitaryFile] = Field(..., min_length=1)

    def to_domain(self) -> LocalUnitaryString:
        return LocalUnitaryString(tuple(f.to_domain() for f in self.factors))

    @classmethod
    def from_domain(cls, string: LocalUnitaryString) -> "StringFile":
        return cls(factors=[UnitaryFile.from_domain(u) for u in string.factors])


class BasisFile(BaseModel):
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=2)
    strings: List[StringFile] = Field(..., min_length=1)
    family: Optional[str] = Field(default=None, description="Construction tag, when built analytically")

    def to_domain(self) -> List[LocalUnitaryString]:
        strings = [s.to_domain() for s in self.strings]
        for s in strings:
            if (s.n, s.d) != (self.n, self.d):
                raise DimensionMismatchException(
                    f"String of shape (n={s.n}, d={s.d}) in a basis declared as (n={self.n}, d={self.d})"
                )
        return strings

    @classmethod
    def from_domain(cls, strings: Sequence[LocalUnitaryString], family: Optional[str] = None) -> "BasisFile":
        first = strings[0]
        return cls(
            n=first.n,
            d=first.d,
            strings=[StringFile.from_domain(s) for s in strings],
            family=family,
        )


class EnumerationFile(BaseModel):
    n: int
    solutions: List[List[str]] = Field(default_factory=list, description="Each solution lists 2^n dotted label strings")
    nodes_explored: int = 0
    exhausted: bool = False


class CertificateRow(BaseModel):
    variables: List[str]
    rhs: int = Field(..., ge=0, le=1)
    origin: str


class CertificateFile(BaseModel):
    rows: List[CertificateRow]
    rank: int
    augmented_rank: int
    inconsistent: bool
    combination: List[int] = Field(default_factory=list, description="Row indices whose GF(2) sum reads 0 = 1")
    dropped: List[str] = Field(default_factory=list)


class SearchCheckpoint(BaseModel):
    state: StateFile
    num_states: int
    fix_first_identity: bool = True
    tol: float
    restarts: int
    max_iters: int
    master_seed: int
    best_f: float
    restart_index: int
    converged: bool
    best_theta: List[List[List[float]]] = Field(
        default_factory=list, description="Chart coordinates per free string, per factor"
    )
