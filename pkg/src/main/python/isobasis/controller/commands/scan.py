import logging
from pathlib import Path

from ...models.schemas.record_schemas import ScanSummary
from ...services.search_service import SCENARIOS
from .common import EXIT_NEGATIVE, EXIT_OK, CommandContext, emit

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("scan", help="Run a seeded sampling campaign")
    parser.add_argument("--scenario", required=True, choices=SCENARIOS)
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--seed", type=int, required=True, help="Master seed")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes (default: available CPUs)")
    parser.add_argument("--m-range", type=int, nargs=2, default=None, metavar=("LOW", "HIGH"),
                        help="Inclusive m sweep for four-qubit-partial")
    parser.add_argument("--out", type=Path, default=None, help="JSONL output (default: results file)")
    parser.set_defaults(handler=run)


def run(args, ctx: CommandContext) -> int:
    restarts = args.restarts or ctx.settings.search.restarts
    m_range = tuple(args.m_range) if args.m_range else tuple(ctx.settings.scan.partial_m_range)
    service = ctx.search_service(workers=args.workers)
    tasks = service.scan_tasks(args.scenario, args.samples, restarts, args.seed, m_range=m_range)

    total = converged = 0
    for record in service.iter_scan(tasks):
        ctx.rows.append(record)
        ctx.runs.append_rows([record], path=args.out)
        emit(record.model_dump_json())
        total += 1
        converged += int(record.converged)

    summary = ScanSummary(
        scenario=args.scenario,
        total=total,
        converged=converged,
        fraction=converged / total if total else 0.0,
        master_seed=args.seed,
    )
    ctx.runs.append_rows([summary], path=args.out)
    emit(summary.model_dump_json())
    emit(f"{args.scenario}: {converged}/{total} converged")
    ctx.outcome.update({"total": total, "converged": converged, "fraction": summary.fraction})
    return EXIT_OK if converged == total else EXIT_NEGATIVE
