import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from ...config.settings import Settings
from ...core.exceptions import InvalidInputException
from ...models.domain.quantum import PureState
from ...models.schemas.record_schemas import (
    CampaignRow,
    ConstructionKindEnum,
    EvidenceEnum,
    OutcomeRecord,
)
from ...services.report_service import cell_for
from ...services.run_service import RunService
from ...services.search_service import SearchService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2

ModelT = TypeVar("ModelT", bound=BaseModel)


@dataclass
class CommandContext:
    settings: Settings
    runs: RunService
    outcome: Dict[str, Any] = field(default_factory=dict)
    rows: List[CampaignRow] = field(default_factory=list)

    @property
    def output_dir(self) -> Path:
        return self.runs.output_dir

    def search_service(self, workers: Optional[int] = None) -> SearchService:
        return SearchService(self.settings.search, workers=workers or self.settings.workers())

    def record(self, row: CampaignRow):
        self.rows.append(row)
        self.runs.append_rows([row])

    def record_outcome(
        self,
        command: str,
        cell: Optional[str],
        construction: ConstructionKindEnum,
        evidence: EvidenceEnum,
        positive: bool,
        value: Optional[float] = None,
        detail: str = "",
    ):
        if cell is None:
            return
        self.record(OutcomeRecord(
            command=command,
            cell=cell,
            construction=construction,
            evidence=evidence,
            positive=positive,
            value=value,
            detail=detail,
        ))


def read_model(path: Path, model: Type[ModelT]) -> ModelT:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputException(f"Cannot read {path}: {e}") from e
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise InvalidInputException(f"{path} is not a valid {model.__name__}: {e}") from e


def write_model(path: Path, instance: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(instance.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def state_cell(psi: PureState) -> Optional[str]:
    """Overview column a single state belongs to; bipartite states count as the complex class."""
    real = psi.is_real() and psi.n != 2
    return cell_for(psi.n, psi.d, real)


def emit(line: str = ""):
    print(line, flush=True)
