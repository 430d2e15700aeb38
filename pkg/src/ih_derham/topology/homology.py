"""Integer chain complexes, Smith normal form and (co)homology with torsion.

All arithmetic is on Python ints, so entry growth never overflows and torsion
such as the Z/2 of the projective plane is computed exactly.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Collection, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

from ih_derham.topology.complex import Simplex, SimplicialComplex, boundary_faces
from ih_derham.topology.domain.data_types import (
    ChainComplexError,
    Coefficients,
    HomologyGroup,
    HomologyResult,
    ValidationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValidationError("matrix shape must be non-negative")
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValidationError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            if v == 0:
                raise ValidationError(f"stored entry ({i}, {j}) is zero")

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: int | None = None) -> SparseIntMatrix:
        n = cols if cols is not None else (len(dense[0]) if dense else 0)
        entries = {(i, j): int(v) for i, row in enumerate(dense) for j, v in enumerate(row) if v}
        return cls(rows=len(dense), cols=n, entries=entries)

    @classmethod
    def identity(cls, n: int) -> SparseIntMatrix:
        return cls(rows=n, cols=n, entries={(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> SparseIntMatrix:
        return SparseIntMatrix(rows=self.cols, cols=self.rows, entries={(j, i): v for (i, j), v in self.entries.items()})

    @cached_property
    def columns(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = defaultdict(dict)
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return dict(out)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: SparseIntMatrix) -> SparseIntMatrix:
        if self.cols != other.rows:
            raise ValidationError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, dict[int, int]] = defaultdict(dict)
        for (j, k), v in other.entries.items():
            by_row[j][k] = v
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for (i, j), a in self.entries.items():
            for k, b in by_row.get(j, {}).items():
                acc[(i, k)] += a * b
        return SparseIntMatrix(rows=self.rows, cols=other.cols, entries={ik: v for ik, v in acc.items() if v})


@dataclass(frozen=True)
class ChainComplexData:
    """bases[k] lists the k-faces in lexicographic order; boundaries[k-1] is d_k : C_k -> C_{k-1}."""

    bases: tuple[tuple[Simplex, ...], ...]
    boundaries: tuple[SparseIntMatrix, ...]

    @property
    def top_degree(self) -> int:
        return len(self.bases) - 1

    def rank(self, k: int) -> int:
        return len(self.bases[k]) if 0 <= k <= self.top_degree else 0

    def boundary(self, k: int) -> SparseIntMatrix:
        if 1 <= k <= self.top_degree:
            return self.boundaries[k - 1]
        return SparseIntMatrix(rows=self.rank(k - 1), cols=self.rank(k))

    def check(self) -> None:
        for k in range(1, self.top_degree):
            if not (self.boundary(k) @ self.boundary(k + 1)).is_zero:
                raise ChainComplexError(f"not a complex: d_{k} d_{k + 1} != 0")


def boundary_matrices(complex: SimplicialComplex) -> ChainComplexData:
    bases = tuple(complex.faces_of_dimension(k) for k in range(complex.dimension + 1))
    mats = []
    for k in range(1, len(bases)):
        index = {f: i for i, f in enumerate(bases[k - 1])}
        entries = {(index[face], j): sign for j, s in enumerate(bases[k]) for sign, face in boundary_faces(s)}
        mats.append(SparseIntMatrix(rows=len(bases[k - 1]), cols=len(bases[k]), entries=entries))
    return ChainComplexData(bases=bases, boundaries=tuple(mats))


def smith_normal_form(a: SparseIntMatrix) -> tuple[SparseIntMatrix, SparseIntMatrix, SparseIntMatrix]:
    """(U, D, V) with U, V unimodular, D = U A V diagonal, d1 | d2 | ... and every d_i >= 0.

    Elimination pivots on the smallest non-zero entry; a non-divisible entry left
    in the trailing block is folded into the pivot row so the chain holds.
    """
    m, n = a.rows, a.cols
    d = a.to_dense()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, k: int) -> None:
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[j], row[k] = row[k], row[j]

    def add_row(target: int, source: int, q: int) -> None:
        for mat in (d, u):
            mat[target] = [x + q * y for x, y in zip(mat[target], mat[source], strict=True)]

    def add_col(target: int, source: int, q: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[target] += q * row[source]

    for t in range(min(m, n)):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(t, i)
                        clean = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(t, j)
                        clean = False
            if not clean:
                continue
            stray = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % d[t][t]),
                None,
            )
            if stray is None:
                break
            add_row(t, stray, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    return (
        SparseIntMatrix.from_dense(u, cols=m),
        SparseIntMatrix.from_dense(d, cols=n),
        SparseIntMatrix.from_dense(v, cols=n),
    )


def _pivots(matrix: SparseIntMatrix) -> list[int]:
    """Absolute pivots of a sparse integer diagonalisation (no transforms kept)."""
    rows: dict[int, dict[int, int]] = defaultdict(dict)
    cols: dict[int, set[int]] = defaultdict(set)
    for (i, j), v in sorted(matrix.entries.items()):
        rows[i][j] = v
        cols[j].add(i)

    def axpy_row(target: int, source: int, q: int) -> None:
        tgt = rows[target]
        for k, val in rows[source].items():
            new = tgt.get(k, 0) + q * val
            if new:
                tgt[k] = new
                cols[k].add(target)
            else:
                tgt.pop(k, None)
                cols[k].discard(target)

    def pick() -> tuple[int, int]:
        best: tuple[int, int, int, int] | None = None
        for j, members in cols.items():
            for i in members:
                key = (abs(rows[i][j]), len(rows[i]) + len(members), i, j)
                if best is None or key < best:
                    best = key
                    if key[0] == 1:
                        return i, j
        assert best is not None
        return best[2], best[3]

    pivots: list[int] = []
    while any(cols.values()):
        for j in [j for j, members in cols.items() if not members]:
            del cols[j]
        i, j = pick()
        while True:
            p = rows[i][j]
            for r in sorted(cols[j] - {i}):
                axpy_row(r, i, -(rows[r][j] // p))
            left = sorted(cols[j] - {i})
            if left:
                i = min(left, key=lambda r: (abs(rows[r][j]), r))
                continue
            # column j now meets only row i, so a column operation only touches row i
            for k in sorted(set(rows[i]) - {j}):
                rem = rows[i][k] % p
                if rem:
                    rows[i][k] = rem
                else:
                    del rows[i][k]
                    cols[k].discard(i)
            left = sorted(set(rows[i]) - {j})
            if left:
                j = min(left, key=lambda k: (abs(rows[i][k]), k))
                continue
            break
        pivots.append(abs(rows[i][j]))
        del rows[i]
        del cols[j]
    return pivots


def invariant_factors(matrix: SparseIntMatrix) -> list[int]:
    """Non-zero diagonal of the Smith normal form, ascending, as a divisibility chain."""
    pivots = _pivots(matrix)
    units = [p for p in pivots if p == 1]
    rest = sorted(p for p in pivots if p != 1)
    for a in range(len(rest)):
        for b in range(a + 1, len(rest)):
            g = gcd(rest[a], rest[b])
            rest[a], rest[b] = g, rest[a] * rest[b] // g
    rest = sorted(rest)
    return units + rest


def _assemble(
    dims: Sequence[int], factors: Sequence[list[int]], coefficients: Coefficients, *, cohomological: bool
) -> HomologyResult:
    """factors[k] are the invariant factors of d_k (k = 0..top+1, empty at the ends)."""
    groups = []
    for k, n in enumerate(dims):
        betti = n - len(factors[k]) - len(factors[k + 1])
        incoming = factors[k] if cohomological else factors[k + 1]
        torsion = [f for f in incoming if f > 1] if coefficients is Coefficients.INTEGERS else []
        groups.append(HomologyGroup(degree=k, betti=betti, torsion=torsion))
    return HomologyResult(coefficients=coefficients, groups=groups)


def homology(data: ChainComplexData, coefficients: Coefficients = Coefficients.INTEGERS) -> HomologyResult:
    """H_k = ker d_k / im d_{k+1}: betti = dim ker - rank d_{k+1}, torsion = invariant factors of d_{k+1} above 1."""
    data.check()
    top = data.top_degree
    factors = [[]] + [invariant_factors(data.boundary(k)) for k in range(1, top + 1)] + [[]]
    return _assemble([data.rank(k) for k in range(top + 1)], factors, coefficients, cohomological=False)


def cohomology(data: ChainComplexData, coefficients: Coefficients = Coefficients.INTEGERS) -> HomologyResult:
    """Cohomology of the dual complex, delta^{k-1} = d_k transposed; integer torsion moves up one degree."""
    data.check()
    top = data.top_degree
    factors = [[]] + [invariant_factors(data.boundary(k).transpose()) for k in range(1, top + 1)] + [[]]
    return _assemble([data.rank(k) for k in range(top + 1)], factors, coefficients, cohomological=True)


class _KernelLattice:
    """Lattice basis of { x : M x = 0 } for a small dense integer matrix M, with coordinates.

    Column operations bring M V to [E | 0] with E of full column rank; the trailing
    columns of the unimodular V span the kernel, and V^-1 recovers coordinates.
    """

    def __init__(self, m: list[list[int]], n: int):
        v = [[int(i == j) for j in range(n)] for i in range(n)]
        vinv = [[int(i == j) for j in range(n)] for i in range(n)]
        work = [list(row) for row in m]

        def add_col(target: int, source: int, q: int) -> None:
            for row in work:
                row[target] += q * row[source]
            for row in v:
                row[target] += q * row[source]
            vinv[source] = [x - q * y for x, y in zip(vinv[source], vinv[target], strict=True)]

        def swap_cols(a: int, b: int) -> None:
            for mat in (work, v):
                for row in mat:
                    row[a], row[b] = row[b], row[a]
            vinv[a], vinv[b] = vinv[b], vinv[a]

        r = 0
        for row in work:
            while True:
                live = [(abs(row[j]), j) for j in range(r, n) if row[j]]
                if not live:
                    break
                _, j = min(live)
                for k in range(r, n):
                    if k != j and row[k]:
                        add_col(k, j, -(row[k] // row[j]))
                if all(row[k] == 0 for k in range(r, n) if k != j):
                    swap_cols(r, j)
                    r += 1
                    break
        self.rank = r
        self.basis = [[v[i][j] for i in range(n)] for j in range(r, n)]
        self._vinv = vinv
        self._n = n

    def coordinates(self, x: Sequence[int]) -> list[int]:
        full = [sum(a * b for a, b in zip(row, x, strict=True)) for row in self._vinv]
        if any(full[: self.rank]):
            raise ChainComplexError("vector outside the constrained chain group")
        return full[self.rank :]


@dataclass
class _ConstrainedGroup:
    clean: list[int]
    dirty: list[int]
    kernel: _KernelLattice | None

    @property
    def rank(self) -> int:
        return len(self.clean) + (len(self.kernel.basis) if self.kernel else 0)

    def generators(self) -> list[dict[int, int]]:
        gens = [{c: 1} for c in self.clean]
        if self.kernel:
            for vec in self.kernel.basis:
                gens.append({self.dirty[i]: x for i, x in enumerate(vec) if x})
        return gens

    def coordinates(self, chain: Mapping[int, int]) -> list[int]:
        coords = [chain.get(c, 0) for c in self.clean]
        if self.kernel:
            coords += self.kernel.coordinates([chain.get(c, 0) for c in self.dirty])
        elif any(chain.get(c, 0) for c in self.dirty):
            raise ChainComplexError("vector outside the constrained chain group")
        return coords


def _constrained_group(data: ChainComplexData, k: int, allowed: Sequence[set[int]]) -> _ConstrainedGroup:
    """IC_k = { c in span(allowed_k) : dc in span(allowed_{k-1}) }."""
    columns = data.boundary(k).columns
    forbidden_rows = set(range(data.rank(k - 1))) - allowed[k - 1] if k >= 1 else set()
    clean, dirty = [], []
    for c in sorted(allowed[k]):
        touches = any(r in forbidden_rows for r in columns.get(c, {}))
        (dirty if touches else clean).append(c)
    if not dirty:
        return _ConstrainedGroup(clean=clean, dirty=[], kernel=None)
    rows = sorted({r for c in dirty for r in columns.get(c, {}) if r in forbidden_rows})
    m = [[columns.get(c, {}).get(r, 0) for c in dirty] for r in rows]
    return _ConstrainedGroup(clean=clean, dirty=dirty, kernel=_KernelLattice(m, len(dirty)))


def constrained_homology(
    data: ChainComplexData,
    allowed: Sequence[Collection[int]],
    coefficients: Coefficients = Coefficients.INTEGERS,
) -> HomologyResult:
    """Homology of IC_k = { c in span(allowed_k) : dc in span(allowed_{k-1}) }.

    `allowed[k]` holds column indices into data.bases[k]; missing degrees allow nothing.
    """
    data.check()
    top = data.top_degree
    allowed_sets = [set(allowed[k]) if k < len(allowed) else set() for k in range(top + 1)]
    groups = [_constrained_group(data, k, allowed_sets) for k in range(top + 1)]

    factors: list[list[int]] = [[]]
    for k in range(1, top + 1):
        columns = data.boundary(k).columns
        entries: dict[tuple[int, int], int] = {}
        for j, gen in enumerate(groups[k].generators()):
            image: dict[int, int] = defaultdict(int)
            for c, x in gen.items():
                for r, sign in columns.get(c, {}).items():
                    image[r] += x * sign
            for i, y in enumerate(groups[k - 1].coordinates({r: y for r, y in image.items() if y})):
                if y:
                    entries[(i, j)] = y
        restricted = SparseIntMatrix(rows=groups[k - 1].rank, cols=groups[k].rank, entries=entries)
        factors.append(invariant_factors(restricted))
    factors.append([])
    logger.debug("constrained chain ranks %s", [g.rank for g in groups])
    return _assemble([g.rank for g in groups], factors, coefficients, cohomological=False)
