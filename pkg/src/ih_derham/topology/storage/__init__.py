# ih_derham.topology.storage
from .repo import CorpusRepository, FileComplexRepository, resolve_repository

__all__ = ["CorpusRepository", "FileComplexRepository", "resolve_repository"]
