from __future__ import annotations

import logging

from ih_derham.topology.corpus import corpus_entry
from ih_derham.topology.domain.data_types import ComplexDocument
from ih_derham.topology.domain.repo import ComplexRepository

from .documents import complex_to_document, read_document

logger = logging.getLogger(__name__)

CORPUS_PREFIX = "corpus:"


class FileComplexRepository(ComplexRepository):
    """Documents on disk (.json, .yaml, .yml) or JSON on stdin via "-"."""

    def load(self, ref: str) -> ComplexDocument:
        logger.debug("reading complex document from %s", "stdin" if ref == "-" else ref)
        return read_document(ref)


class CorpusRepository(ComplexRepository):
    def load(self, ref: str) -> ComplexDocument:
        return complex_to_document(corpus_entry(ref.removeprefix(CORPUS_PREFIX)).complex)


def resolve_repository(ref: str) -> tuple[ComplexRepository, str]:
    """`corpus:<name>` selects the built-in corpus; anything else is a file reference."""
    if ref.startswith(CORPUS_PREFIX):
        return CorpusRepository(), ref.removeprefix(CORPUS_PREFIX)
    return FileComplexRepository(), ref
