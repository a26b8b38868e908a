import logging
from contextlib import contextmanager

from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

from ..models.domain.entities import Base
from .exceptions import DatabaseException

logger = logging.getLogger(__name__)


class DatabaseManager:

    def __init__(self, database_url: str):
        self.database_url = database_url

        if database_url.startswith("sqlite"):
            self.engine = create_engine(
                database_url,
                connect_args={"check_same_thread": False},
                poolclass=StaticPool,
                echo=False,
            )
        else:
            self.engine = create_engine(database_url, pool_pre_ping=True, echo=False)

        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)

        logger.debug(f"Run registry opened: {database_url}")

    def create_tables(self):
        try:
            Base.metadata.create_all(bind=self.engine)
        except SQLAlchemyError as e:
            logger.error(f"Failed to create run registry tables: {str(e)}")
            raise DatabaseException(f"Failed to create run registry tables: {e}") from e

    @contextmanager
    def get_session(self) -> Session:
        session = self.SessionLocal()
        try:
            yield session
            session.commit()
        except SQLAlchemyError as e:
            session.rollback()
            logger.error(f"Run registry session error: {str(e)}")
            raise DatabaseException(str(e)) from e
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def dispose(self):
        self.engine.dispose()


def init_database(database_url: str) -> DatabaseManager:
    manager = DatabaseManager(database_url)
    manager.create_tables()
    return manager

