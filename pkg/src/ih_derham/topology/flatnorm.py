"""Mass and flat norm of weighted simplicial chains.

Chains are homological: a d-chain assigns rationals to d-faces. The flat norm
of T is the minimum of M(T - dA) + M(A) over real (d+1)-chains A; it is solved
exactly as a linear program and returned with its decomposition T = R + dA.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from math import factorial

from ih_derham.topology.complex import Simplex, SimplicialComplex, boundary_faces, dim, face_order
from ih_derham.topology.domain.data_types import OracleTooLargeError, ValidationError
from ih_derham.topology.lp import RationalSimplex

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 2_000_000


@dataclass(frozen=True)
class Chain:
    """`degree` is -1 only for the empty boundary of a 0-chain."""

    complex: SimplicialComplex
    degree: int
    coefficients: Mapping[Simplex, Fraction] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        for s, c in self.coefficients.items():
            if dim(s) != self.degree:
                raise ValidationError(f"face {list(s)} has dimension {dim(s)}, chain has degree {self.degree}")
            if s not in self.complex:
                raise ValidationError(f"face {list(s)} is not in the complex")
            if not c:
                raise ValidationError(f"zero coefficient stored on {list(s)}")

    @classmethod
    def build(
        cls, complex: SimplicialComplex, coefficients: Mapping[Simplex, Fraction | int], degree: int | None = None
    ) -> Chain:
        """Drops zero coefficients; the degree is read off the faces unless given."""
        dims = {dim(s) for s in coefficients}
        if degree is None:
            if len(dims) != 1:
                raise ValidationError("cannot infer the degree of an empty or mixed chain")
            degree = dims.pop()
        clean = {s: Fraction(c) for s, c in sorted(coefficients.items(), key=lambda kv: face_order(kv[0])) if c}
        return cls(complex=complex, degree=degree, coefficients=clean)

    @classmethod
    def zero(cls, complex: SimplicialComplex, degree: int) -> Chain:
        return cls(complex=complex, degree=degree)

    def _combine(self, other: Chain, sign: int) -> Chain:
        if other.complex != self.complex or other.degree != self.degree:
            raise ValidationError(f"dimension mismatch: degree {self.degree} and degree {other.degree} chains")
        acc: dict[Simplex, Fraction] = defaultdict(Fraction, self.coefficients)
        for s, c in other.coefficients.items():
            acc[s] += sign * c
        return Chain.build(self.complex, acc, self.degree)

    def __add__(self, other: Chain) -> Chain:
        return self._combine(other, 1)

    def __sub__(self, other: Chain) -> Chain:
        return self._combine(other, -1)

    def __neg__(self) -> Chain:
        return self.scale(-1)

    def scale(self, factor: Fraction | int) -> Chain:
        return Chain.build(self.complex, {s: factor * c for s, c in self.coefficients.items()}, self.degree)

    def __rmul__(self, factor: Fraction | int) -> Chain:
        return self.scale(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.complex, self.degree, dict(self.coefficients)) == (
            other.complex,
            other.degree,
            dict(other.coefficients),
        )

    def __hash__(self) -> int:
        return hash((self.complex, self.degree, frozenset(self.coefficients.items())))

    @property
    def is_zero(self) -> bool:
        return not self.coefficients


@dataclass(frozen=True)
class MassWeights:
    weights: Mapping[Simplex, Fraction] = field(default_factory=dict, hash=False)
    default: Fraction | None = None

    def __post_init__(self) -> None:
        for s, w in self.weights.items():
            if w <= 0:
                raise ValidationError(f"weight of {list(s)} must be positive, got {w}")
        if self.default is not None and self.default <= 0:
            raise ValidationError(f"default weight must be positive, got {self.default}")

    @classmethod
    def unit(cls) -> MassWeights:
        return cls(default=Fraction(1))

    @classmethod
    def from_coordinates(
        cls, complex: SimplicialComplex, coordinates: Mapping[int, list[Fraction]], digits: int = 12
    ) -> MassWeights:
        """Euclidean volume of every face; vertices weigh 1."""
        missing = [v for v in complex.vertices if v not in coordinates]
        if missing:
            raise ValidationError(f"missing coordinates for vertices {missing[:5]}")
        dims = {len(coordinates[v]) for v in complex.vertices}
        if len(dims) != 1:
            raise ValidationError("coordinates must all have the same length")
        return cls(weights={s: simplex_volume([coordinates[v] for v in s], digits) for s in complex.faces})

    def merged(self, explicit: Mapping[Simplex, Fraction]) -> MassWeights:
        """Explicit weights win over the ones already held."""
        return MassWeights(weights={**self.weights, **explicit}, default=self.default)

    def weight(self, s: Simplex) -> Fraction:
        w = self.weights.get(s, self.default)
        if w is None:
            raise ValidationError(f"missing weight for face {list(s)}")
        return w


def _determinant(m: list[list[Fraction]]) -> Fraction:
    rows = [list(r) for r in m]
    n = len(rows)
    det = Fraction(1)
    for t in range(n):
        p = next((i for i in range(t, n) if rows[i][t]), None)
        if p is None:
            return Fraction(0)
        if p != t:
            rows[t], rows[p] = rows[p], rows[t]
            det = -det
        det *= rows[t][t]
        for i in range(t + 1, n):
            f = rows[i][t] / rows[t][t]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[t], strict=True)]
    return det


def simplex_volume(points: list[list[Fraction]], digits: int = 12) -> Fraction:
    """sqrt(det Gram) / k!, rationalised to `digits` significant digits."""
    k = len(points) - 1
    if k == 0:
        return Fraction(1)
    edges = [[x - y for x, y in zip(p, points[0], strict=True)] for p in points[1:]]
    gram = [[sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0)) for v in edges] for u in edges]
    g = _determinant(gram)
    if g <= 0:
        raise ValidationError("degenerate simplex in the coordinates: zero volume")
    with localcontext() as ctx:
        ctx.prec = digits
        root = (Decimal(g.numerator) / Decimal(g.denominator)).sqrt()
    return Fraction(root) / factorial(k)


def mass(chain: Chain, weights: MassWeights) -> Fraction:
    return sum((abs(c) * weights.weight(s) for s, c in chain.coefficients.items()), Fraction(0))


def boundary_chain(chain: Chain) -> Chain:
    """Simplicial boundary; a 0-chain has the empty boundary of degree -1."""
    if chain.degree <= 0:
        return Chain.zero(chain.complex, -1)
    acc: dict[Simplex, Fraction] = defaultdict(Fraction)
    for s, c in chain.coefficients.items():
        for sign, face in boundary_faces(s):
            acc[face] += sign * c
    return Chain.build(chain.complex, acc, chain.degree - 1)


@dataclass(frozen=True)
class FlatNormResult:
    value: Fraction
    witness_A: Chain
    residual_R: Chain


def _boundary_columns(complex: SimplicialComplex, d: int) -> tuple[list[Simplex], list[Simplex], list[list[tuple[int, int]]]]:
    rows = list(complex.faces_of_dimension(d))
    cols = list(complex.faces_of_dimension(d + 1))
    index = {s: i for i, s in enumerate(rows)}
    columns = [[(index[f], sign) for sign, f in boundary_faces(s)] for s in cols]
    return rows, cols, columns


def flat_norm(chain: Chain, weights: MassWeights) -> FlatNormResult:
    """Minimise M(T - dA) + M(A) by an exact LP in split variables r+, r-, a+, a-.

    One equality row per d-face: r+ - r- + d(a+ - a-) = T. Rows with a negative
    right-hand side are negated, so r+ or r- is a feasible starting basis.
    """
    complex, d = chain.complex, chain.degree
    if d < 0 or d > complex.dimension:
        raise ValidationError(f"dimension mismatch: degree {d} chain on a {complex.dimension}-dimensional complex")
    rows, cols, columns = _boundary_columns(complex, d)
    if not cols or chain.is_zero:
        a = Chain.zero(complex, d + 1)
        return FlatNormResult(value=mass(chain, weights), witness_A=a, residual_R=chain)

    m, n = len(rows), len(cols)
    t = [chain.coefficients.get(s, Fraction(0)) for s in rows]
    matrix = [[Fraction(0)] * (2 * m + 2 * n) for _ in range(m)]
    for i in range(m):
        matrix[i][i] = Fraction(1)
        matrix[i][m + i] = Fraction(-1)
    for j, col in enumerate(columns):
        for i, sign in col:
            matrix[i][2 * m + j] = Fraction(sign)
            matrix[i][2 * m + n + j] = Fraction(-sign)
    basis = []
    for i in range(m):
        if t[i] < 0:
            matrix[i] = [-v for v in matrix[i]]
            t[i] = -t[i]
            basis.append(m + i)
        else:
            basis.append(i)
    row_w = [weights.weight(s) for s in rows]
    col_w = [weights.weight(s) for s in cols]
    cost = row_w + row_w + col_w + col_w

    solution = RationalSimplex(matrix, t, cost, basis).solve()
    x = solution.x
    a = Chain.build(complex, {cols[j]: x[2 * m + j] - x[2 * m + n + j] for j in range(n)}, d + 1)
    r = chain - boundary_chain(a)
    value = mass(r, weights) + mass(a, weights)
    logger.debug("flat norm %s (mass %s) after %d pivots", value, mass(chain, weights), solution.pivots)
    return FlatNormResult(value=value, witness_A=a, residual_R=r)


def brute_force_flat_norm(
    chain: Chain, weights: MassWeights, bound: int, cap: int = DEFAULT_ORACLE_CAP
) -> Fraction:
    """Minimum of M(T - dA) + M(A) over integer A with coefficients in [-bound, bound]."""
    if bound < 1:
        raise ValidationError(f"bound must be at least 1, got {bound}")
    complex, d = chain.complex, chain.degree
    if d < 0 or d > complex.dimension:
        raise ValidationError(f"dimension mismatch: degree {d} chain on a {complex.dimension}-dimensional complex")
    rows, cols, columns = _boundary_columns(complex, d)
    space = (2 * bound + 1) ** len(cols)
    if space > cap:
        raise OracleTooLargeError(f"oracle too large: {space} candidate chains exceed the cap of {cap}")

    t = [chain.coefficients.get(s, Fraction(0)) for s in rows]
    row_w = [weights.weight(s) for s in rows]
    col_w = [weights.weight(s) for s in cols]
    best = sum((abs(v) * w for v, w in zip(t, row_w, strict=True)), Fraction(0))
    for coeffs in product(range(-bound, bound + 1), repeat=len(cols)):
        residual = list(t)
        cost = Fraction(0)
        for j, a in enumerate(coeffs):
            if a:
                cost += abs(a) * col_w[j]
                for i, sign in columns[j]:
                    residual[i] -= a * sign
        if cost >= best:
            continue
        cost += sum((abs(v) * w for v, w in zip(residual, row_w, strict=True) if v), Fraction(0))
        best = min(best, cost)
    return best
