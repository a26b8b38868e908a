import json
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from ... import __version__
from ...core.exceptions import InvalidInputException


class ConstructionKindEnum(str, Enum):
    STATE_DEPENDENT = "state_dependent"
    STATE_INDEPENDENT = "state_independent"


class EvidenceEnum(str, Enum):
    ANALYTIC = "analytic"
    NUMERICAL = "numerical"


class ScanRecord(BaseModel):
    kind: Literal["scan"] = "scan"
    scenario: str = Field(..., description="Scan scenario tag")
    sample_id: int = Field(..., ge=0)
    seed: int = Field(..., description="Per-sample seed derived from the master seed")
    params: Dict[str, Any] = Field(default_factory=dict)
    best_f: float = Field(..., ge=0)
    converged: bool
    restarts: int
    iterations: int
    wall_ms: int
    tool_version: str = __version__


class OutcomeRecord(BaseModel):
    kind: Literal["outcome"] = "outcome"
    command: str
    cell: str = Field(..., description="Overview column, e.g. '3,2,R'")
    construction: ConstructionKindEnum
    evidence: EvidenceEnum
    positive: bool = Field(..., description="A basis exists (or was found)")
    value: Optional[float] = None
    detail: str = ""
    tool_version: str = __version__


class ScanSummary(BaseModel):
    kind: Literal["summary"] = "summary"
    scenario: str
    total: int
    converged: int
    fraction: float
    master_seed: int
    tool_version: str = __version__


class RunManifest(BaseModel):
    command: str
    config: Dict[str, Any] = Field(default_factory=dict, description="Full parameter echo")
    master_seed: Optional[int] = None
    tool_version: str = __version__
    started_at: datetime
    finished_at: Optional[datetime] = None
    exit_code: Optional[int] = None
    outcome: Dict[str, Any] = Field(default_factory=dict)


CampaignRow = Union[ScanRecord, OutcomeRecord, ScanSummary]

_ROW_MODELS = {"scan": ScanRecord, "outcome": OutcomeRecord, "summary": ScanSummary}


def parse_row(line: str) -> CampaignRow:
    """Parse one JSONL campaign row; rows without a `kind` are scan rows."""
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise InvalidInputException(f"Malformed JSONL row: {e}") from e
    if not isinstance(data, dict):
        raise InvalidInputException("JSONL rows must be objects")
    model = _ROW_MODELS.get(data.get("kind", "scan"))
    if model is None:
        raise InvalidInputException(f"Unknown row kind: {data.get('kind')}")
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise InvalidInputException(f"Invalid {model.__name__} row: {e}") from e
