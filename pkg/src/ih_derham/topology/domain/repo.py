from __future__ import annotations

from typing import Protocol

from .data_types import ComplexDocument


class ComplexRepository(Protocol):
    def load(self, ref: str) -> ComplexDocument: ...
