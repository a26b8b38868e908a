import logging
import os
from pathlib import Path
from typing import Optional, Tuple

import yaml
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .. import __version__

logger = logging.getLogger(__name__)


class AppConfig(BaseModel):
    name: str = "isobasis"
    version: str = __version__


class LoggingConfig(BaseModel):
    level: str = "INFO"


class OutputConfig(BaseModel):
    directory: str = "./data"
    results_file: str = "results.jsonl"
    manifests_dir: str = "manifests"
    database_file: str = "runs.db"


class SearchConfig(BaseModel):
    tol: float = Field(default=1e-6, gt=0)
    max_iters: int = Field(default=3000, ge=1)
    restarts: int = Field(default=10, ge=1)
    stop_f: float = Field(default=1e-14, gt=0)
    stagnation_window: int = Field(default=50, ge=1)
    stagnation_rel: float = 1e-12
    fd_step: float = 1e-6


class ScanConfig(BaseModel):
    workers: Optional[int] = None
    partial_m_range: Tuple[int, int] = (11, 14)


class Settings(BaseSettings):

    app: AppConfig = AppConfig()
    logging: LoggingConfig = LoggingConfig()
    output: OutputConfig = OutputConfig()
    search: SearchConfig = SearchConfig()
    scan: ScanConfig = ScanConfig()

    output_dir: Optional[str] = None
    log_level: Optional[str] = None
    database_url: Optional[str] = None

    model_config = SettingsConfigDict(
        env_prefix="ISOBASIS_",
        env_file=".env",
        case_sensitive=False,
        extra="allow",
    )

    def resolved_output_dir(self) -> Path:
        return Path(self.output_dir or self.output.directory)

    def resolved_log_level(self) -> str:
        return (self.log_level or self.logging.level).upper()

    def workers(self) -> int:
        return self.scan.workers or os.cpu_count() or 1


def load_settings(config_dir: Optional[Path] = None) -> Settings:
    profile = os.getenv("PROFILE", "local")
    config_dir = config_dir or Path.cwd()
    config_file = config_dir / f"isobasis-{profile}.yaml"

    config_data = {}

    if config_file.exists():
        logger.info(f"Loading configuration from: {config_file}")
        try:
            with open(config_file, "r") as f:
                config_data = yaml.safe_load(f) or {}
        except Exception as e:
            logger.warning(f"Could not load YAML config: {e}, using environment variables")
    else:
        logger.debug("No YAML config found, using environment variables and defaults")

    try:
        return Settings(**config_data)
    except Exception as e:
        logger.warning(f"Error loading settings: {e}, using defaults")
        return Settings()
