from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ...core.exceptions import InvalidInputException
from .quantum import LocalUnitaryString, PureState


@dataclass(frozen=True)
class SearchProblem:
    state: PureState
    num_states: int
    fix_first_identity: bool = True
    tol: float = 1e-6
    restarts: int = 10
    max_iters: int = 3000
    master_seed: int = 0
    stop_f: float = 1e-14
    stagnation_window: int = 50
    stagnation_rel: float = 1e-12
    initial_strings: Optional[Tuple[LocalUnitaryString, ...]] = None

    def __post_init__(self):
        if not 2 <= self.num_states <= self.state.dim:
            raise InvalidInputException(
                f"num_states must lie in [2, {self.state.dim}], got {self.num_states}"
            )
        if self.tol <= 0:
            raise InvalidInputException(f"tol must be positive, got {self.tol}")
        if self.restarts < 1 or self.max_iters < 0:
            raise InvalidInputException("restarts must be >= 1 and max_iters >= 0")
        if self.initial_strings is not None:
            if len(self.initial_strings) != self.num_states:
                raise InvalidInputException(
                    f"Warm start needs {self.num_states} strings, got {len(self.initial_strings)}"
                )
            for s in self.initial_strings:
                if (s.n, s.d) != self.state.shape:
                    raise InvalidInputException("Warm-start strings do not match the state shape")

    @property
    def free_strings(self) -> int:
        return self.num_states - 1 if self.fix_first_identity else self.num_states


@dataclass
class SearchResult:
    best_f: float
    best_strings: List[LocalUnitaryString]
    restart_index: int
    iterations: int
    converged: bool
    wall_ms: int
    restarts_run: int = 0
    history: List[float] = field(default_factory=list, repr=False)
    best_theta: Optional[List[float]] = field(default=None, repr=False)


@dataclass(frozen=True)
class ParamCount:
    free_params: int
    constraints: int

    @property
    def feasible_by_count(self) -> bool:
        return self.free_params >= self.constraints
