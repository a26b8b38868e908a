import uuid

from sqlalchemy import Column, DateTime, Float, Integer, String, Text
from sqlalchemy.orm import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()


class RunRecord(Base):
    __tablename__ = "runs"

    id = Column(String(36), primary_key=True, default=lambda: str(uuid.uuid4()))
    command = Column(String(64), nullable=False, index=True)
    master_seed = Column(Integer, nullable=True)
    tool_version = Column(String(32), nullable=False)
    exit_code = Column(Integer, nullable=True)
    best_f = Column(Float, nullable=True)
    manifest_path = Column(Text, nullable=False)
    config_json = Column(Text, nullable=False, default="{}")
    outcome_json = Column(Text, nullable=False, default="{}")
    started_at = Column(DateTime(timezone=True), nullable=False)
    finished_at = Column(DateTime(timezone=True), nullable=True)
    created_at = Column(DateTime(timezone=True), server_default=func.now(), nullable=False)

    def __repr__(self):
        return f"<RunRecord(id={self.id}, command={self.command}, exit_code={self.exit_code})>"
