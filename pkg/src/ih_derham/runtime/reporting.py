"""Report envelope shared by every command, and the plain-text tables humans read."""

from __future__ import annotations

import json
from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel, Field

from ih_derham.topology.domain.data_types import HomologyResult

HEURISTIC_WARNING = "heuristic stratification used"


class Report(BaseModel):
    command: str
    input_digest: str | None = Field(None, description="sha256 of the canonical input document.")
    results: Any
    warnings: list[str] = Field(default_factory=list)


def build_report(command: str, digest: str | None, results: BaseModel | Any, warnings: Sequence[str] = ()) -> Report:
    payload = results.model_dump(mode="json") if isinstance(results, BaseModel) else results
    return Report(command=command, input_digest=digest, results=payload, warnings=list(warnings))


def render_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(h) for h in headers], *([str(c) for c in row] for row in rows)]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths, strict=True)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def homology_table(result: HomologyResult) -> str:
    rows = [(g.degree, g.betti, ", ".join(f"Z/{t}" for t in g.torsion) or "-") for g in result.groups]
    return render_table(["degree", "betti", "torsion"], rows)
