import logging
from pathlib import Path

from ...models.schemas.io_schemas import BasisFile, StateFile
from ...models.schemas.record_schemas import ConstructionKindEnum, EvidenceEnum
from ...services import construction_service, state_independent_service
from ...services.construction_service import ConstructionFamily, FamilyParameters
from .common import EXIT_NEGATIVE, EXIT_OK, CommandContext, emit, write_model

logger = logging.getLogger(__name__)

CONSTRUCT_TOL = 1e-10

FAMILY_ALIASES = {
    "bell": ConstructionFamily.BELL,
    "ghz": ConstructionFamily.GHZ,
    "two-qubit-schmidt": ConstructionFamily.TWO_QUBIT_SCHMIDT,
    "bipartite-pow2": ConstructionFamily.BIPARTITE_POW2,
    "w": ConstructionFamily.W_STATE,
    "three-qubit-si": ConstructionFamily.THREE_QUBIT_SI,
    "two-qubit-si": ConstructionFamily.TWO_QUBIT_SI,
}

# (n, d) used when the flags are omitted
DEFAULT_SHAPES = {
    ConstructionFamily.BELL: (2, 2),
    ConstructionFamily.GHZ: (2, 2),
    ConstructionFamily.TWO_QUBIT_SCHMIDT: (2, 2),
    ConstructionFamily.BIPARTITE_POW2: (2, 4),
    ConstructionFamily.W_STATE: (3, 2),
    ConstructionFamily.THREE_QUBIT_SI: (3, 2),
    ConstructionFamily.TWO_QUBIT_SI: (2, 2),
}


def register(subparsers):
    parser = subparsers.add_parser("construct", help="Build an analytic basis construction")
    parser.add_argument("--family", required=True, choices=sorted(FAMILY_ALIASES))
    parser.add_argument("--n", type=int, default=None, help="Number of subsystems")
    parser.add_argument("--d", type=int, default=None, help="Local dimension")
    parser.add_argument("--schmidt", type=float, nargs="+", default=None, help="Schmidt coefficients")
    parser.add_argument("--seed", type=int, default=0, help="Seed for sampled demonstration states")
    parser.add_argument("--out", type=Path, default=None, help="Output directory for state.json and basis.json")
    parser.set_defaults(handler=run)


def _cells(params: FamilyParameters):
    dep, ind = ConstructionKindEnum.STATE_DEPENDENT, ConstructionKindEnum.STATE_INDEPENDENT
    family = params.family
    if family == ConstructionFamily.TWO_QUBIT_SI:
        return [(dep, "2,2,R"), (ind, "2,2,R")]
    if family == ConstructionFamily.THREE_QUBIT_SI:
        return [(dep, "3,2,R"), (ind, "3,2,R")]
    if family in (ConstructionFamily.BELL, ConstructionFamily.TWO_QUBIT_SCHMIDT):
        return [(dep, "2,2,C")]
    if family == ConstructionFamily.BIPARTITE_POW2:
        return [(dep, "2,2,C" if params.d == 2 else "2,4|8,C")]
    return []


def run(args, ctx: CommandContext) -> int:
    family = FAMILY_ALIASES[args.family]
    n_default, d_default = DEFAULT_SHAPES[family]
    if family == ConstructionFamily.BIPARTITE_POW2 and args.d is None and args.schmidt:
        d_default = len(args.schmidt)
    params = FamilyParameters(
        family=family,
        n=args.n if args.n is not None else n_default,
        d=args.d if args.d is not None else d_default,
        schmidt=tuple(args.schmidt) if args.schmidt else None,
    )
    basis = construction_service.construct(params, seed=args.seed)

    out_dir = args.out or ctx.output_dir / "constructions" / args.family
    write_model(Path(out_dir) / "state.json", StateFile.from_domain(basis.state))
    write_model(Path(out_dir) / "basis.json", BasisFile.from_domain(basis.strings, family=args.family))

    positive = basis.f_value <= CONSTRUCT_TOL
    if family in (ConstructionFamily.TWO_QUBIT_SI, ConstructionFamily.THREE_QUBIT_SI):
        positive = positive and state_independent_service.verify_si_construction(basis.strings)

    emit(f"family: {args.family} (n={params.n}, d={params.d})")
    emit(f"strings: {basis.m}")
    emit(f"f: {basis.f_value:.3e}")
    emit(f"max off-diagonal |gram|: {basis.max_off_diagonal():.3e}")

    for construction, cell in _cells(params):
        ctx.record_outcome("construct", cell, construction, EvidenceEnum.ANALYTIC, positive, basis.f_value, args.family)
    ctx.outcome.update({"family": args.family, "n": params.n, "d": params.d, "m": basis.m, "f": basis.f_value})
    return EXIT_OK if positive else EXIT_NEGATIVE
