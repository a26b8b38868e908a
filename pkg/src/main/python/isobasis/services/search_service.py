"""Numerical minimisation of the overlap objective over local unitary strings,
the scan campaigns built on it, and the parameter-counting argument.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ..config.settings import SearchConfig
from ..core.exceptions import InvalidInputException, UnsupportedParameterException
from ..models.domain.quantum import LocalUnitaryString, PureState
from ..models.domain.search import ParamCount, SearchProblem, SearchResult
from ..models.schemas.record_schemas import ScanRecord
from . import construction_service, tensor_service, unitary_service

logger = logging.getLogger(__name__)

SCENARIOS = ("two-qutrit", "three-qubit", "four-qubit-partial")


class FrameObjective:
    """f(theta) for a fixed state, with its analytic gradient.

    theta is the flat concatenation of chart coordinates of every free string,
    laid out as (free_strings, n, d*d).
    """

    def __init__(self, state: PureState, num_states: int, fix_first_identity: bool = True):
        self.state = state
        self.n, self.d = state.shape
        self.num_states = num_states
        self.fix_first_identity = fix_first_identity
        self.free = num_states - 1 if fix_first_identity else num_states
        self.size = self.free * self.n * self.d * self.d
        self._psi = state.amps

    def _unpack(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.size,):
            raise InvalidInputException(f"Expected {self.size} parameters, got {theta.shape}")
        return theta.reshape(self.free, self.n, self.d * self.d)

    def _rows(self, unitaries: np.ndarray) -> np.ndarray:
        batch = np.broadcast_to(self._psi, (self.free, self._psi.shape[0]))
        moved = tensor_service.apply_factors(batch, unitaries, self.n, self.d)
        if self.fix_first_identity:
            return np.vstack([self._psi[None, :], moved])
        return moved

    def unitaries(self, theta: np.ndarray) -> np.ndarray:
        return unitary_service.chart(self._unpack(theta), self.d)

    def strings(self, theta: np.ndarray) -> List[LocalUnitaryString]:
        mats = self.unitaries(theta)
        strings = [LocalUnitaryString.from_matrices(*row) for row in mats]
        if self.fix_first_identity:
            strings.insert(0, LocalUnitaryString.identity(self.n, self.d))
        return strings

    def value(self, theta: np.ndarray) -> float:
        rows = self._rows(self.unitaries(theta))
        return tensor_service.f_from_gram(tensor_service.gram_matrix(rows))

    def value_and_grad(self, theta: np.ndarray) -> Tuple[float, np.ndarray]:
        n, d = self.n, self.d
        unitaries, jac = unitary_service.chart(self._unpack(theta), d, with_jacobian=True)
        rows = self._rows(unitaries)
        gram = tensor_service.gram_matrix(rows)
        f_value = tensor_service.f_from_gram(gram)

        off = gram - np.diag(np.diag(gram))
        # df = 2 Re <g, dA> with g = df/d(conj A)
        g = 2.0 * off.T @ rows
        if self.fix_first_identity:
            g = g[1:]

        daggers = np.conj(np.swapaxes(unitaries, -1, -2))
        q = tensor_service.apply_factors(g, daggers, n, d)
        grad = np.zeros((self.free, n, d * d))
        for k in range(n):
            h = tensor_service.apply_on_leg(q, unitaries[:, k], k, n, d)
            h_view = h.reshape(self.free, d ** k, d, d ** (n - k - 1))
            p_view = self._psi.reshape(d ** k, d, d ** (n - k - 1))
            overlap = np.einsum("jlar,lbr->jab", np.conj(h_view), p_view)
            grad[:, k] = 2.0 * np.real(np.einsum("jpab,jab->jp", jac[:, k], overlap))
        return f_value, grad.ravel()


def central_difference_gradient(func: Callable[[np.ndarray], float], x0: np.ndarray, step: float = 1e-6) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    grad = np.zeros_like(x0)
    for j in range(x0.shape[0]):
        x = x0.copy()
        x[j] = x0[j] + step
        f_plus = func(x)
        x[j] = x0[j] - step
        f_minus = func(x)
        grad[j] = (f_plus - f_minus) / (2 * step)
    return grad


def restart_rng(master_seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, restart]))


def derive_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, dtype=np.uint32)[0])


def warm_start_theta(problem: SearchProblem) -> np.ndarray:
    """Chart coordinates of the warm-start strings after restoring the V_1 = I gauge."""
    strings = list(problem.initial_strings)
    if problem.fix_first_identity:
        gauge = strings[0].dagger()
        strings = [gauge @ s for s in strings[1:]]
    return np.concatenate([
        unitary_service.unitary_to_params(u).theta for s in strings for u in s.factors
    ])


@dataclass
class RestartOutcome:
    index: int
    f_value: float
    theta: np.ndarray
    iterations: int
    history: List[float]
    wall_ms: int


def run_restart(problem: SearchProblem, index: int) -> RestartOutcome:
    objective = FrameObjective(problem.state, problem.num_states, problem.fix_first_identity)
    if index == 0 and problem.initial_strings is not None:
        x0 = warm_start_theta(problem)
    else:
        x0 = restart_rng(problem.master_seed, index).uniform(0.0, 2 * np.pi, size=objective.size)

    started = time.perf_counter()
    history: List[float] = [objective.value(x0)]
    if history[0] <= problem.stop_f or problem.max_iters == 0:
        return RestartOutcome(index, history[0], x0, 0, history, int((time.perf_counter() - started) * 1000))

    window, rel = problem.stagnation_window, problem.stagnation_rel

    def callback(intermediate_result):
        current = float(intermediate_result.fun)
        history.append(current)
        if current <= problem.stop_f:
            raise StopIteration
        if len(history) > window:
            previous = history[-window - 1]
            if previous - current <= rel * max(previous, np.finfo(float).tiny):
                raise StopIteration

    result = minimize(
        objective.value_and_grad,
        x0,
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={
            "maxiter": problem.max_iters,
            "maxfun": problem.max_iters * 20,
            "ftol": 1e-22,
            "gtol": 1e-14,
        },
    )
    f_value = float(result.fun)
    wall_ms = int((time.perf_counter() - started) * 1000)
    logger.debug(f"Restart {index}: f={f_value:.3e} after {result.nit} iterations ({result.message})")
    return RestartOutcome(index, f_value, np.asarray(result.x), int(result.nit), history, wall_ms)


def _select(outcomes: Sequence[RestartOutcome], tol: float) -> RestartOutcome:
    converged = [o for o in outcomes if o.f_value <= tol]
    if converged:
        return min(converged, key=lambda o: o.index)
    return min(outcomes, key=lambda o: (o.f_value, o.index))


def parameter_count(n: int, m: Optional[int] = None, d: int = 2) -> ParamCount:
    """Free real parameters (3 per qubit per non-fixed string) against orthogonality constraints."""
    if d != 2:
        raise UnsupportedParameterException(f"Parameter counting is defined for qubits only, got d={d}")
    if n < 1:
        raise InvalidInputException(f"n must be positive, got {n}")
    full = 2 ** n
    m = full if m is None else m
    if not 2 <= m <= full:
        raise InvalidInputException(f"m must lie in [2, {full}], got {m}")
    return ParamCount(free_params=3 * n * (m - 1), constraints=m * m - m)


def hard_four_qubit_state() -> PureState:
    w = construction_service.w_state(4).amps
    ghz = construction_service.ghz_state(4, 2).amps
    return PureState(4, 2, (2 / np.sqrt(6)) * w + (np.sqrt(2) / np.sqrt(6)) * ghz)


def sample_two_qutrit(rng: np.random.Generator) -> Dict[str, List[float]]:
    lam = np.abs(rng.standard_normal(3))
    return {"lambda": (lam / np.linalg.norm(lam)).tolist()}


def sample_three_qubit(rng: np.random.Generator) -> Dict[str, float]:
    a = complex(rng.standard_normal(), rng.standard_normal())
    rest = rng.standard_normal(4)
    norm = np.sqrt(abs(a) ** 2 + float(np.sum(rest ** 2)))
    a, rest = a / norm, rest / norm
    return {"a_re": a.real, "a_im": a.imag, "b": rest[0], "c": rest[1], "d": rest[2], "e": rest[3]}


def scenario_state(scenario: str, params: Dict) -> Tuple[PureState, int]:
    """The state a scan sample runs on and its target number of strings."""
    if scenario == "two-qutrit":
        return tensor_service.schmidt_state(params["lambda"]), 9
    if scenario == "three-qubit":
        a = complex(params["a_re"], params["a_im"])
        return tensor_service.canonical_three_qubit(a, params["b"], params["c"], params["d"], params["e"]), 8
    if scenario == "four-qubit-partial":
        return hard_four_qubit_state(), int(params["m"])
    raise InvalidInputException(f"Unknown scan scenario: {scenario}")


@dataclass(frozen=True)
class ScanTask:
    scenario: str
    sample_id: int
    seed: int
    params: Dict
    restarts: int
    config: SearchConfig


def run_scan_task(task: ScanTask) -> ScanRecord:
    state, m = scenario_state(task.scenario, task.params)
    service = SearchService(task.config, workers=1, quiet=True)
    result = service.minimize_f(service.problem(state, m, restarts=task.restarts, master_seed=task.seed))
    return ScanRecord(
        scenario=task.scenario,
        sample_id=task.sample_id,
        seed=task.seed,
        params=task.params,
        best_f=result.best_f,
        converged=result.converged,
        restarts=result.restarts_run,
        iterations=result.iterations,
        wall_ms=result.wall_ms,
    )


class SearchService:

    def __init__(self, config: Optional[SearchConfig] = None, workers: int = 1, quiet: bool = False):
        self.config = config or SearchConfig()
        self.workers = max(1, workers)
        if not quiet:
            logger.info(
                f"Search Service initialized (tol={self.config.tol}, max_iters={self.config.max_iters}, "
                f"workers={self.workers})"
            )

    def problem(
        self,
        state: PureState,
        num_states: int,
        restarts: Optional[int] = None,
        master_seed: int = 0,
        tol: Optional[float] = None,
        max_iters: Optional[int] = None,
        fix_first_identity: bool = True,
        initial_strings: Optional[Sequence[LocalUnitaryString]] = None,
    ) -> SearchProblem:
        cfg = self.config
        return SearchProblem(
            state=state,
            num_states=num_states,
            fix_first_identity=fix_first_identity,
            tol=cfg.tol if tol is None else tol,
            restarts=cfg.restarts if restarts is None else restarts,
            max_iters=cfg.max_iters if max_iters is None else max_iters,
            master_seed=master_seed,
            stop_f=cfg.stop_f,
            stagnation_window=cfg.stagnation_window,
            stagnation_rel=cfg.stagnation_rel,
            initial_strings=None if initial_strings is None else tuple(initial_strings),
        )

    def minimize_f(self, problem: SearchProblem) -> SearchResult:
        started = time.perf_counter()
        if self.workers > 1 and problem.restarts > 1:
            outcomes = self._parallel_restarts(problem)
        else:
            outcomes = []
            for index in range(problem.restarts):
                outcomes.append(run_restart(problem, index))
                if outcomes[-1].f_value <= problem.tol:
                    break
        best = _select(outcomes, problem.tol)
        objective = FrameObjective(problem.state, problem.num_states, problem.fix_first_identity)
        wall_ms = int((time.perf_counter() - started) * 1000)
        result = SearchResult(
            best_f=best.f_value,
            best_strings=objective.strings(best.theta),
            restart_index=best.index,
            iterations=best.iterations,
            converged=best.f_value <= problem.tol,
            wall_ms=wall_ms,
            restarts_run=len(outcomes),
            history=best.history,
            best_theta=best.theta.tolist(),
        )
        logger.debug(
            f"Search m={problem.num_states} on (n={problem.state.n}, d={problem.state.d}): "
            f"best_f={result.best_f:.3e}, converged={result.converged}, restarts={result.restarts_run}"
        )
        return result

    def _parallel_restarts(self, problem: SearchProblem) -> List[RestartOutcome]:
        outcomes: List[RestartOutcome] = []
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(run_restart, problem, index) for index in range(problem.restarts)]
            for future in as_completed(futures):
                outcomes.append(future.result())
        return sorted(outcomes, key=lambda o: o.index)

    def gradient_error(self, objective: FrameObjective, theta: np.ndarray) -> float:
        """Relative deviation of the analytic gradient from central differences."""
        _, analytic = objective.value_and_grad(theta)
        numeric = central_difference_gradient(objective.value, theta, self.config.fd_step)
        scale = max(np.linalg.norm(numeric), np.finfo(float).eps)
        return float(np.linalg.norm(analytic - numeric) / scale)

    def scan_tasks(
        self,
        scenario: str,
        samples: int,
        restarts: int,
        master_seed: int,
        m_range: Tuple[int, int] = (11, 14),
    ) -> List[ScanTask]:
        if scenario not in SCENARIOS:
            raise InvalidInputException(f"Unknown scan scenario '{scenario}', expected one of {SCENARIOS}")
        if samples < 1:
            raise InvalidInputException(f"samples must be >= 1, got {samples}")
        tasks = []
        if scenario == "four-qubit-partial":
            low, high = m_range
            grid = [(m, rep) for m in range(low, high + 1) for rep in range(samples)]
            for sample_id, (m, rep) in enumerate(grid):
                seed = derive_seed(master_seed, sample_id)
                tasks.append(ScanTask(scenario, sample_id, seed, {"m": m, "repeat": rep}, restarts, self.config))
            return tasks
        sampler = sample_two_qutrit if scenario == "two-qutrit" else sample_three_qubit
        for sample_id in range(samples):
            seed = derive_seed(master_seed, sample_id)
            params = sampler(np.random.default_rng(seed))
            tasks.append(ScanTask(scenario, sample_id, seed, params, restarts, self.config))
        return tasks

    def iter_scan(self, tasks: Sequence[ScanTask]) -> Iterator[ScanRecord]:
        """Run scan samples and yield their rows in completion order."""
        if self.workers == 1:
            for task in tasks:
                record = run_scan_task(task)
                self._log_record(record)
                yield record
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(run_scan_task, task) for task in tasks]
            for future in as_completed(futures):
                record = future.result()
                self._log_record(record)
                yield record

    @staticmethod
    def _log_record(record: ScanRecord):
        logger.info(
            f"{record.scenario} sample {record.sample_id}: best_f={record.best_f:.3e} "
            f"converged={record.converged}"
        )

    def scan(self, scenario: str, samples: int, restarts: int, master_seed: int, **kwargs) -> List[ScanRecord]:
        records = list(self.iter_scan(self.scan_tasks(scenario, samples, restarts, master_seed, **kwargs)))
        return sorted(records, key=lambda r: r.sample_id)

    def scan_two_qutrit(self, samples: int, restarts: int, master_seed: int) -> List[ScanRecord]:
        return self.scan("two-qutrit", samples, restarts, master_seed)

    def scan_three_qubit(self, samples: int, restarts: int, master_seed: int) -> List[ScanRecord]:
        return self.scan("three-qubit", samples, restarts, master_seed)

    def probe_four_qubit(self, restarts: int, master_seed: int, m: int = 16) -> SearchResult:
        if not 2 <= m <= 16:
            raise InvalidInputException(f"m must lie in [2, 16], got {m}")
        result = self.minimize_f(self.problem(hard_four_qubit_state(), m, restarts=restarts, master_seed=master_seed))
        if not result.converged:
            logger.info(
                f"No {m}-element basis found for the W/GHZ superposition within {restarts} restarts "
                f"(best_f={result.best_f:.3e})"
            )
        return result
