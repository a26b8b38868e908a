import logging
from pathlib import Path

from ...core.exceptions import InvalidInputException
from ...models.schemas.io_schemas import BasisFile, SearchCheckpoint, StateFile
from ...models.schemas.record_schemas import ConstructionKindEnum, EvidenceEnum, ScanRecord
from ...services.search_service import hard_four_qubit_state
from .common import EXIT_NEGATIVE, EXIT_OK, CommandContext, emit, read_model, state_cell, write_model

logger = logging.getLogger(__name__)

PRESETS = {"hard-four-qubit": hard_four_qubit_state}


def register(subparsers):
    parser = subparsers.add_parser("search", help="Numerically search for a (partial) basis")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--state", type=Path, help="State JSON file")
    source.add_argument("--preset", choices=sorted(PRESETS), help="Built-in state")
    parser.add_argument("--m", type=int, default=None, help="Number of orthonormal states (default: full basis)")
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--seed", type=int, required=True, help="Master seed")
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--max-iters", type=int, default=None)
    parser.add_argument("--warm-start", type=Path, default=None, help="Basis JSON used for restart 0")
    parser.add_argument("--workers", type=int, default=1, help="Parallel restarts")
    parser.add_argument("--out", type=Path, default=None, help="Output directory for the best basis")
    parser.set_defaults(handler=run)


def run(args, ctx: CommandContext) -> int:
    if args.state is not None:
        psi = read_model(args.state, StateFile).to_domain()
        source = str(args.state)
    else:
        psi = PRESETS[args.preset]()
        source = args.preset
    m = args.m if args.m is not None else psi.dim
    initial = read_model(args.warm_start, BasisFile).to_domain() if args.warm_start else None
    if args.workers < 1:
        raise InvalidInputException(f"--workers must be >= 1, got {args.workers}")

    service = ctx.search_service(workers=args.workers)
    problem = service.problem(
        psi,
        m,
        restarts=args.restarts,
        master_seed=args.seed,
        tol=args.tol,
        max_iters=args.max_iters,
        initial_strings=initial,
    )
    result = service.minimize_f(problem)

    out_dir = Path(args.out or ctx.output_dir / "searches" / f"seed{args.seed}-m{m}")
    write_model(out_dir / "basis.json", BasisFile.from_domain(result.best_strings))
    free = problem.free_strings
    theta = [result.best_theta[i * psi.n * psi.d ** 2:(i + 1) * psi.n * psi.d ** 2] for i in range(free)]
    write_model(out_dir / "checkpoint.json", SearchCheckpoint(
        state=StateFile.from_domain(psi),
        num_states=m,
        fix_first_identity=problem.fix_first_identity,
        tol=problem.tol,
        restarts=problem.restarts,
        max_iters=problem.max_iters,
        master_seed=problem.master_seed,
        best_f=result.best_f,
        restart_index=result.restart_index,
        converged=result.converged,
        best_theta=[[row[k * psi.d ** 2:(k + 1) * psi.d ** 2] for k in range(psi.n)] for row in theta],
    ))

    ctx.record(ScanRecord(
        scenario="search",
        sample_id=0,
        seed=args.seed,
        params={"state": source, "n": psi.n, "d": psi.d, "m": m},
        best_f=result.best_f,
        converged=result.converged,
        restarts=result.restarts_run,
        iterations=result.iterations,
        wall_ms=result.wall_ms,
    ))
    if m == psi.dim:
        ctx.record_outcome("search", state_cell(psi), ConstructionKindEnum.STATE_DEPENDENT,
                           EvidenceEnum.NUMERICAL, result.converged, result.best_f, source)

    emit(f"best_f: {result.best_f:.3e}")
    emit(f"converged: {result.converged} (tol={problem.tol:g})")
    emit(f"restart: {result.restart_index} of {result.restarts_run} run, iterations: {result.iterations}")
    if not result.converged:
        emit("no basis found within budget (not a proof of non-existence)")
    ctx.outcome.update({"best_f": result.best_f, "converged": result.converged, "m": m})
    return EXIT_OK if result.converged else EXIT_NEGATIVE
