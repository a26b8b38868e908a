import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from ..config.settings import Settings
from ..core.database import init_database
from ..models.domain.entities import RunRecord
from ..models.schemas.record_schemas import CampaignRow, RunManifest

logger = logging.getLogger(__name__)


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class RunService:
    """Manifests, the JSONL results file and the SQLite run registry under one output directory."""

    def __init__(self, settings: Settings, output_dir: Optional[Path] = None):
        self.settings = settings
        self.output_dir = Path(output_dir) if output_dir else settings.resolved_output_dir()
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.manifests_dir = self.output_dir / settings.output.manifests_dir
        self.manifests_dir.mkdir(parents=True, exist_ok=True)
        self.results_path = self.output_dir / settings.output.results_file
        database_url = settings.database_url or f"sqlite:///{self.output_dir / settings.output.database_file}"
        self.db = init_database(database_url)
        logger.debug(f"Run Service initialized (output_dir={self.output_dir})")

    def start(self, command: str, config: Dict[str, Any], master_seed: Optional[int] = None) -> RunManifest:
        return RunManifest(command=command, config=config, master_seed=master_seed, started_at=utc_now())

    def append_rows(self, rows: Iterable[CampaignRow], path: Optional[Path] = None) -> int:
        path = Path(path) if path else self.results_path
        path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with open(path, "a", encoding="utf-8") as f:
            for row in rows:
                f.write(row.model_dump_json() + "\n")
                f.flush()
                count += 1
        return count

    def finish(self, manifest: RunManifest, exit_code: int, outcome: Dict[str, Any]) -> Path:
        manifest.finished_at = utc_now()
        manifest.exit_code = exit_code
        manifest.outcome = outcome
        stamp = manifest.started_at.strftime("%Y%m%dT%H%M%S%f")
        path = self.manifests_dir / f"{stamp}-{manifest.command}.json"
        path.write_text(manifest.model_dump_json(indent=2), encoding="utf-8")

        best_f = outcome.get("best_f", outcome.get("f"))
        with self.db.get_session() as session:
            session.add(RunRecord(
                command=manifest.command,
                master_seed=manifest.master_seed,
                tool_version=manifest.tool_version,
                exit_code=exit_code,
                best_f=float(best_f) if isinstance(best_f, (int, float)) else None,
                manifest_path=str(path),
                config_json=json.dumps(manifest.config, default=str),
                outcome_json=json.dumps(outcome, default=str),
                started_at=manifest.started_at,
                finished_at=manifest.finished_at,
            ))
        logger.info(f"Run '{manifest.command}' finished with exit code {exit_code}; manifest {path}")
        return path

    def list_runs(self, command: Optional[str] = None) -> List[Dict[str, Any]]:
        with self.db.get_session() as session:
            query = session.query(RunRecord)
            if command:
                query = query.filter(RunRecord.command == command)
            return [
                {
                    "id": r.id,
                    "command": r.command,
                    "master_seed": r.master_seed,
                    "tool_version": r.tool_version,
                    "exit_code": r.exit_code,
                    "best_f": r.best_f,
                    "started_at": r.started_at,
                }
                for r in query.order_by(RunRecord.started_at).all()
            ]

    def close(self):
        self.db.dispose()
