from pathlib import Path

from ...services import report_service
from .common import EXIT_OK, CommandContext, emit


def register(subparsers):
    parser = subparsers.add_parser("report", help="Render the overview grid from JSONL campaign rows")
    parser.add_argument("paths", type=Path, nargs="*", help="JSONL files (default: the results file)")
    parser.add_argument("--no-runs", action="store_true", help="Skip the run registry listing")
    parser.set_defaults(handler=run)


def run(args, ctx: CommandContext) -> int:
    paths = args.paths
    if not paths:
        paths = [ctx.runs.results_path] if ctx.runs.results_path.exists() else []
    report = report_service.build_report(report_service.read_rows(paths))
    runs = None if args.no_runs else ctx.runs.list_runs()
    emit(report_service.render(report, runs))
    ctx.outcome.update({
        "rows": report.rows_read,
        "versions": report.versions,
        "grid": {f"{kind.value}:{cell}": mark for (kind, cell), mark in report.grid.items()},
    })
    return EXIT_OK
