import logging
from pathlib import Path

from ...core.exceptions import InvalidInputException
from ...models.domain.quantum import unitarity_residual
from ...models.schemas.io_schemas import BasisFile, StateFile
from ...models.schemas.record_schemas import ConstructionKindEnum, EvidenceEnum
from ...services import state_independent_service, tensor_service
from ...services.report_service import cell_for
from .common import EXIT_NEGATIVE, EXIT_OK, CommandContext, emit, read_model, state_cell

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("verify", help="Check that a basis file orthogonalises a state")
    parser.add_argument("--state", type=Path, default=None, help="State JSON file")
    parser.add_argument("--basis", type=Path, required=True, help="Basis JSON file")
    parser.add_argument("--tol", type=float, default=None, help="Threshold on f (default: search tol)")
    parser.add_argument("--real-scan", type=int, default=0, metavar="N",
                        help="Also evaluate f on N random real states")
    parser.add_argument("--seed", type=int, default=0, help="Seed for --real-scan")
    parser.set_defaults(handler=run)


def run(args, ctx: CommandContext) -> int:
    tol = args.tol if args.tol is not None else ctx.settings.search.tol
    if args.state is None and args.real_scan <= 0:
        raise InvalidInputException("verify needs --state, --real-scan N, or both")
    strings = read_model(args.basis, BasisFile).to_domain()

    for j, string in enumerate(strings):
        residuals = ", ".join(f"{unitarity_residual(u.matrix):.1e}" for u in string.factors)
        emit(f"string {j}: unitarity residuals [{residuals}]")

    ok = True
    if args.state is not None:
        psi = read_model(args.state, StateFile).to_domain()
        basis = tensor_service.build_candidate(psi, strings)
        passed = basis.f_value <= tol and basis.m == psi.dim
        emit(f"f: {basis.f_value:.3e}")
        emit(f"max off-diagonal |gram|: {basis.max_off_diagonal():.3e}")
        if basis.m != psi.dim:
            emit(f"note: {basis.m} strings for a {psi.dim}-dimensional space (partial basis)")
        ok = basis.f_value <= tol
        ctx.outcome.update({"f": basis.f_value, "max_off_diagonal": basis.max_off_diagonal(), "m": basis.m})
        ctx.record_outcome("verify", state_cell(psi) if basis.m == psi.dim else None,
                           ConstructionKindEnum.STATE_DEPENDENT, EvidenceEnum.NUMERICAL, passed, basis.f_value)

    if args.real_scan > 0:
        max_f = state_independent_service.si_verify_on_random_real_states(strings, args.real_scan, seed=args.seed)
        first = strings[0]
        emit(f"max f over {args.real_scan} random real states: {max_f:.3e}")
        ok = ok and max_f <= tol
        ctx.outcome["real_scan_max_f"] = max_f
        if len(strings) == first.d ** first.n:
            ctx.record_outcome("verify", cell_for(first.n, first.d, True),
                               ConstructionKindEnum.STATE_INDEPENDENT, EvidenceEnum.NUMERICAL, max_f <= tol, max_f)

    emit("result: PASS" if ok else "result: FAIL")
    return EXIT_OK if ok else EXIT_NEGATIVE
