import logging
from pathlib import Path

from ...core.exceptions import InvalidInputException
from ...models.domain.quantum import LocalUnitaryString
from ...models.schemas.io_schemas import BasisFile, CertificateFile, CertificateRow, EnumerationFile
from ...models.schemas.record_schemas import ConstructionKindEnum, EvidenceEnum
from ...services import state_independent_service as si
from ...services.report_service import COMPLEX_CELLS
from ...services.unitary_service import haar_random_unitary
from .common import EXIT_NEGATIVE, EXIT_OK, CommandContext, emit, read_model, write_model

logger = logging.getLogger(__name__)

ENUMERATION_CELLS = {2: "2,2,R", 3: "3,2,R", 4: "4,2,R"}
WITNESS_TOL = 1e-10


def register(subparsers):
    parser = subparsers.add_parser("si", help="State-independent analysis")
    actions = parser.add_subparsers(dest="action", required=True)

    enum_parser = actions.add_parser("enumerate", help="Enumerate Pauli-type constructions")
    enum_parser.add_argument("--n", type=int, required=True)
    enum_parser.add_argument("--out", type=Path, default=None)
    enum_parser.set_defaults(handler=run_enumerate)

    cert_parser = actions.add_parser("certify-4", help="GF(2) certificate that four qubits admit none")
    cert_parser.add_argument("--drop-v6", action="store_true", help="Drop the all-flip string")
    cert_parser.add_argument("--out", type=Path, default=None)
    cert_parser.set_defaults(handler=run_certify)

    witness_parser = actions.add_parser("witness", help="Product eigenvector witness for a string")
    group = witness_parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--basis", type=Path, help="Basis JSON; every string is tested")
    group.add_argument("--random", type=int, metavar="N", help="Test N Haar-random strings")
    witness_parser.add_argument("--n", type=int, default=3)
    witness_parser.add_argument("--d", type=int, default=2)
    witness_parser.add_argument("--seed", type=int, default=0)
    witness_parser.set_defaults(handler=run_witness)

    odd_parser = actions.add_parser("odd-dim", help="Determinant test for odd dimensions")
    odd_parser.add_argument("--d", type=int, required=True)
    odd_parser.add_argument("--trials", type=int, default=1000)
    odd_parser.add_argument("--seed", type=int, default=0)
    odd_parser.set_defaults(handler=run_odd_dim)

    reduction_parser = actions.add_parser("reduction", help="Check the reduction of qubit gates to {I, X, Z, XZ}")
    reduction_parser.add_argument("--theta", type=float, required=True)
    reduction_parser.set_defaults(handler=run_reduction)


def run_enumerate(args, ctx: CommandContext) -> int:
    result = si.enumerate_si_pauli(args.n)
    out = args.out or ctx.output_dir / "si" / f"enumeration-n{args.n}.json"
    write_model(out, EnumerationFile(
        n=result.n,
        solutions=result.as_text(),
        nodes_explored=result.nodes_explored,
        exhausted=result.exhausted,
    ))
    emit(f"n={args.n}: {len(result.solutions)} solutions, exhausted={result.exhausted}, "
         f"nodes={result.nodes_explored}")
    for solution in result.as_text()[:5]:
        emit("  " + "  ".join(solution))

    found = bool(result.solutions)
    ctx.record_outcome("si", ENUMERATION_CELLS.get(args.n), ConstructionKindEnum.STATE_INDEPENDENT,
                       EvidenceEnum.ANALYTIC, found, float(len(result.solutions)), "enumerate")
    ctx.outcome.update({"n": args.n, "solutions": len(result.solutions), "exhausted": result.exhausted})
    return EXIT_OK


def run_certify(args, ctx: CommandContext) -> int:
    certificate = si.four_qubit_parity_certificate(drop_last_row=args.drop_v6)
    verified = si.check_certificate(certificate) if certificate.inconsistent else None
    report = CertificateFile(
        rows=[CertificateRow(variables=v, rhs=rhs, origin=origin) for v, rhs, origin in certificate.rows],
        rank=certificate.rank,
        augmented_rank=certificate.augmented_rank,
        inconsistent=certificate.inconsistent,
        combination=certificate.combination,
        dropped=certificate.dropped,
    )
    out = args.out or ctx.output_dir / "si" / ("certificate-reduced.json" if args.drop_v6 else "certificate.json")
    write_model(out, report)

    emit(f"equations: {len(certificate.rows)}, rank: {certificate.rank}, augmented rank: {certificate.augmented_rank}")
    if certificate.inconsistent:
        emit(f"inconsistent: summing rows {certificate.combination} gives 0 = 1 (re-checked: {verified})")
    else:
        emit("consistent: the reduced system has solutions")
    if certificate.inconsistent and not args.drop_v6:
        ctx.record_outcome("si", "4,2,R", ConstructionKindEnum.STATE_INDEPENDENT, EvidenceEnum.ANALYTIC,
                           False, None, "parity certificate")
    ctx.outcome.update({"inconsistent": certificate.inconsistent, "rank": certificate.rank})
    return EXIT_OK


def run_witness(args, ctx: CommandContext) -> int:
    if args.basis is not None:
        strings = read_model(args.basis, BasisFile).to_domain()
    else:
        if args.random < 1:
            raise InvalidInputException("--random needs a positive count")
        strings = [
            LocalUnitaryString(tuple(haar_random_unitary(args.d, seed=args.seed * 1_000_003 + i * args.n + k)
                                     for k in range(args.n)))
            for i in range(args.random)
        ]
    worst = 1.0
    for j, string in enumerate(strings):
        _, overlap = si.eigenvector_witness(string)
        worst = min(worst, overlap)
        logger.debug(f"string {j}: witness overlap {overlap:.12f}")
    emit(f"strings tested: {len(strings)}")
    emit(f"minimum witness overlap: {worst:.12f}")
    holds = worst >= 1 - WITNESS_TOL
    if holds:
        for cell in COMPLEX_CELLS:
            ctx.record_outcome("si", cell, ConstructionKindEnum.STATE_INDEPENDENT, EvidenceEnum.ANALYTIC,
                               False, worst, "eigenvector witness")
    ctx.outcome.update({"strings": len(strings), "min_overlap": worst})
    return EXIT_OK if holds else EXIT_NEGATIVE


def run_odd_dim(args, ctx: CommandContext) -> int:
    report = si.odd_dim_obstruction(args.d, args.trials, seed=args.seed)
    emit(f"d={report.d}: max |det| over {report.trials} skew-symmetric samples = {report.max_abs_det:.3e}")
    emit(f"det(A) = ({report.sign_factor}) det(A) forces det(A) = 0: {report.determinant_forced_zero}")
    ok = report.all_vanish and report.determinant_forced_zero
    if ok:
        ctx.record_outcome("si", "n,odd,R", ConstructionKindEnum.STATE_INDEPENDENT, EvidenceEnum.ANALYTIC,
                           False, report.max_abs_det, f"d={report.d}")
    ctx.outcome.update({"d": report.d, "max_abs_det": report.max_abs_det})
    return EXIT_OK if ok else EXIT_NEGATIVE


def run_reduction(args, ctx: CommandContext) -> int:
    check = si.pauli_reduction_check(args.theta)
    for gate, image in check.images.items():
        emit(f"{gate} -> {image}")
    emit(f"max deviation: {check.max_deviation:.3e}")
    ctx.outcome.update({"theta": args.theta, "max_deviation": check.max_deviation})
    return EXIT_OK if check.passed else EXIT_NEGATIVE
