from .search_service import SearchService
from .run_service import RunService

__all__ = ["SearchService", "RunService"]
