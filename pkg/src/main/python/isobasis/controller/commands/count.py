from ...services.search_service import parameter_count
from .common import EXIT_OK, CommandContext, emit


def register(subparsers):
    parser = subparsers.add_parser("count", help="Compare free parameters with orthogonality constraints")
    parser.add_argument("--n", type=int, required=True, help="Number of qubits")
    parser.add_argument("--m", type=int, default=None, help="Partial basis size (default: full basis)")
    parser.set_defaults(handler=run)


def run(args, ctx: CommandContext) -> int:
    count = parameter_count(args.n, args.m)
    m = args.m or 2 ** args.n
    emit(f"n={args.n}, m={m}: free parameters {count.free_params}, constraints {count.constraints}, "
         f"feasible by count: {count.feasible_by_count}")
    ctx.outcome.update({
        "free_params": count.free_params,
        "constraints": count.constraints,
        "feasible_by_count": count.feasible_by_count,
    })
    return EXIT_OK
