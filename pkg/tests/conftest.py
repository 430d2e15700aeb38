"""Shared fixtures: corpus complexes, document files, and an independent rank oracle."""

from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path

import pytest
import sympy
import yaml

from ih_derham.topology.complex import SimplicialComplex
from ih_derham.topology.corpus import corpus_entry
from ih_derham.topology.homology import SparseIntMatrix, boundary_matrices

# ---------- Oracles ----------

def _rational_rank(matrix: SparseIntMatrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return int(sympy.Matrix(matrix.to_dense()).rank())


def _rational_betti(complex: SimplicialComplex) -> tuple[int, ...]:
    data = boundary_matrices(complex)
    top = data.top_degree
    ranks = [_rational_rank(data.boundary(k)) for k in range(top + 2)]
    return tuple(data.rank(k) - ranks[k] - ranks[k + 1] for k in range(top + 1))


@pytest.fixture
def rational_rank() -> Callable[[SparseIntMatrix], int]:
    return _rational_rank


@pytest.fixture
def rational_betti() -> Callable[[SimplicialComplex], tuple[int, ...]]:
    return _rational_betti


# ---------- Complexes ----------

@pytest.fixture
def sphere2() -> SimplicialComplex:
    return corpus_entry("sphere2").complex


@pytest.fixture
def pinched() -> SimplicialComplex:
    return corpus_entry("pinched_torus").complex


@pytest.fixture
def write_doc(tmp_path: Path) -> Callable[..., Path]:
    """Write a complex document to tmp_path and return its path."""

    def _write(doc: dict[str, object], name: str = "complex.json") -> Path:
        path = tmp_path / name
        if path.suffix in {".yaml", ".yml"}:
            path.write_text(yaml.safe_dump(doc), encoding="utf-8")
        else:
            path.write_text(json.dumps(doc), encoding="utf-8")
        return path

    return _write
