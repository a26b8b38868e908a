"""Overview grid of which scenarios admit bases, rebuilt from recorded campaign rows.

Marks: ✓ / ✗ for analytic results, (✓) / (✗) for numerical evidence, where
(✗) only means no basis was found within the recorded budget. Cells without
recorded rows show NO_DATA.
"""
import logging
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .. import __version__
from ..core.exceptions import InvalidInputException
from ..models.schemas.record_schemas import (
    CampaignRow,
    ConstructionKindEnum,
    EvidenceEnum,
    OutcomeRecord,
    ScanRecord,
    ScanSummary,
    parse_row,
)

logger = logging.getLogger(__name__)

CELLS = ("2,2,R", "2,2,C", "3,2,R", "3,2,C", "4,2,R", "2,3,C", "2,4|8,C", "n,odd,R")
COMPLEX_CELLS = tuple(c for c in CELLS if c.endswith("C"))
NO_DATA = "—"

SCAN_CELLS = {"two-qutrit": "2,3,C", "three-qubit": "3,2,C"}

ROW_TITLES = {
    ConstructionKindEnum.STATE_DEPENDENT: "state-dependent",
    ConstructionKindEnum.STATE_INDEPENDENT: "state-independent",
}


def cell_for(n: int, d: int, real: bool) -> Optional[str]:
    if real and d % 2 == 1:
        return "n,odd,R"
    if n == 2 and d in (4, 8) and not real:
        return "2,4|8,C"
    label = f"{n},{d},{'R' if real else 'C'}"
    return label if label in CELLS else None


@dataclass
class CellEvidence:
    analytic: List[bool] = field(default_factory=list)
    numerical: List[bool] = field(default_factory=list)

    def mark(self) -> str:
        # a single negative instance decides a cell
        if self.analytic:
            return "✓" if all(self.analytic) else "✗"
        if self.numerical:
            return "(✓)" if all(self.numerical) else "(✗)"
        return NO_DATA


@dataclass
class ScenarioStats:
    scenario: str
    total: int
    converged: int
    median_f: float
    max_f: float

    @property
    def fraction(self) -> float:
        return self.converged / self.total if self.total else 0.0


@dataclass
class Report:
    grid: Dict[Tuple[ConstructionKindEnum, str], str]
    stats: List[ScenarioStats]
    versions: List[str]
    rows_read: int

    def mark(self, construction: ConstructionKindEnum, cell: str) -> str:
        return self.grid[(construction, cell)]


def read_rows(paths: Sequence[Path]) -> List[CampaignRow]:
    rows: List[CampaignRow] = []
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise InvalidInputException(f"Cannot read {path}: {e}") from e
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rows.append(parse_row(line))
            except InvalidInputException as e:
                raise InvalidInputException(f"{path}:{number}: {e}") from e
    return rows


def build_report(rows: Iterable[CampaignRow]) -> Report:
    rows = list(rows)
    evidence = {(kind, cell): CellEvidence() for kind in ConstructionKindEnum for cell in CELLS}
    scans: Dict[str, List[ScanRecord]] = {}
    versions = sorted({row.tool_version for row in rows})

    for row in rows:
        if isinstance(row, OutcomeRecord):
            if row.cell not in CELLS:
                logger.warning(f"Ignoring outcome for unknown cell '{row.cell}'")
                continue
            bucket = evidence[(row.construction, row.cell)]
            target = bucket.analytic if row.evidence == EvidenceEnum.ANALYTIC else bucket.numerical
            target.append(row.positive)
        elif isinstance(row, ScanRecord):
            scans.setdefault(row.scenario, []).append(row)
            cell = SCAN_CELLS.get(row.scenario)
            if cell:
                evidence[(ConstructionKindEnum.STATE_DEPENDENT, cell)].numerical.append(row.converged)
        elif isinstance(row, ScanSummary):
            continue

    if len(versions) > 1:
        logger.warning(f"Rows come from several tool versions: {', '.join(versions)}; aggregating anyway")
    elif versions and versions[0] != __version__:
        logger.warning(f"Rows were written by version {versions[0]}, this is {__version__}")

    stats = []
    for scenario, records in sorted(scans.items()):
        values = [r.best_f for r in records]
        stats.append(ScenarioStats(
            scenario=scenario,
            total=len(records),
            converged=sum(r.converged for r in records),
            median_f=statistics.median(values),
            max_f=max(values),
        ))
        if scenario == "four-qubit-partial":
            stats.extend(_partial_stats(records))

    grid = {key: value.mark() for key, value in evidence.items()}
    return Report(grid=grid, stats=stats, versions=versions, rows_read=len(rows))


def _partial_stats(records: Sequence[ScanRecord]) -> List[ScenarioStats]:
    by_m: Dict[int, List[ScanRecord]] = {}
    for r in records:
        by_m.setdefault(int(r.params.get("m", 0)), []).append(r)
    out = []
    for m, group in sorted(by_m.items()):
        values = [r.best_f for r in group]
        out.append(ScenarioStats(
            scenario=f"four-qubit-partial m={m}",
            total=len(group),
            converged=sum(r.converged for r in group),
            median_f=statistics.median(values),
            max_f=max(values),
        ))
    return out


def render(report: Report, runs: Optional[Sequence[Dict]] = None) -> str:
    width = max(len(c) for c in CELLS) + 2
    title_width = max(len(t) for t in ROW_TITLES.values()) + 2
    lines = [" " * title_width + "".join(c.center(width) for c in CELLS)]
    for kind, title in ROW_TITLES.items():
        marks = "".join(report.mark(kind, c).center(width) for c in CELLS)
        lines.append(title.ljust(title_width) + marks)
    lines.append("")
    lines.append("(…) numerical evidence; (✗) means no basis found within budget, not a proof.")

    if report.stats:
        lines.append("")
        lines.append(f"{'scenario':<28}{'samples':>8}{'converged':>11}{'fraction':>10}{'median f':>12}{'max f':>12}")
        for s in report.stats:
            lines.append(
                f"{s.scenario:<28}{s.total:>8}{s.converged:>11}{s.fraction:>10.2f}"
                f"{s.median_f:>12.2e}{s.max_f:>12.2e}"
            )

    if runs:
        lines.append("")
        lines.append("recorded runs:")
        counts: Dict[str, int] = {}
        for run in runs:
            counts[run["command"]] = counts.get(run["command"], 0) + 1
        for command, count in sorted(counts.items()):
            lines.append(f"  {command:<12}{count:>5}")
    return "\n".join(lines)
