import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config.settings import Settings, load_settings
from .controller import commands
from .controller.commands.common import EXIT_INPUT, EXIT_NEGATIVE, CommandContext
from .core.exceptions import BaseAppException, InvalidInputException
from .services.run_service import RunService

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isobasis",
        description="Construct, verify and search for bases of local-unitary transforms of one state",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--output-dir", type=Path, default=None, help="Overrides ISOBASIS_OUTPUT_DIR")
    parser.add_argument("--log-level", default=None, help="Overrides ISOBASIS_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (commands.construct, commands.verify, commands.search, commands.scan,
                   commands.si, commands.report, commands.count):
        module.register(subparsers)
    return parser


def setup_logging(level: str):
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT, stream=sys.stderr, force=True)


def _config_echo(args: argparse.Namespace, settings: Settings) -> dict:
    echo = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k != "handler"}
    echo["settings"] = {
        "search": settings.search.model_dump(),
        "scan": settings.scan.model_dump(),
    }
    return echo


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = load_settings()
    if args.output_dir is not None:
        settings.output_dir = str(args.output_dir)
    if args.log_level is not None:
        settings.log_level = args.log_level
    setup_logging(settings.resolved_log_level())

    try:
        runs = RunService(settings)
    except BaseAppException as e:
        logger.error(f"Cannot open output directory: {e}")
        return EXIT_NEGATIVE

    ctx = CommandContext(settings=settings, runs=runs)
    manifest = runs.start(args.command, _config_echo(args, settings), master_seed=getattr(args, "seed", None))
    exit_code = EXIT_NEGATIVE
    try:
        exit_code = args.handler(args, ctx)
    except InvalidInputException as e:
        logger.error(f"Invalid input: {e}")
        ctx.outcome["error"] = str(e)
        exit_code = EXIT_INPUT
    except BaseAppException as e:
        logger.error(f"{type(e).__name__}: {e}")
        ctx.outcome["error"] = str(e)
        exit_code = EXIT_NEGATIVE
    finally:
        runs.finish(manifest, exit_code, ctx.outcome)
        runs.close()
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
