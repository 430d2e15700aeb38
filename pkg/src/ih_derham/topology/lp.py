"""Exact primal simplex on a dense Fraction tableau.

Minimise c.x subject to A x = b, x >= 0, starting from a feasible basis.
Bland's rule (smallest entering index, smallest leaving basic variable on
ties) keeps the method finite without any tolerance.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from ih_derham.topology.domain.data_types import ValidationError

logger = logging.getLogger(__name__)

type Rational = Fraction | int


@dataclass(frozen=True)
class LPSolution:
    status: Literal["optimal", "unbounded"]
    x: tuple[Fraction, ...]
    objective: Fraction
    pivots: int


class RationalSimplex:
    def __init__(
        self,
        a: Sequence[Sequence[Rational]],
        b: Sequence[Rational],
        c: Sequence[Rational],
        basis: Sequence[int],
    ):
        self.m = len(a)
        self.n = len(c)
        if len(b) != self.m or len(basis) != self.m:
            raise ValidationError("need one right-hand side and one basic variable per row")
        if any(len(row) != self.n for row in a):
            raise ValidationError("every row needs one coefficient per variable")
        if len(set(basis)) != self.m or any(not 0 <= j < self.n for j in basis):
            raise ValidationError(f"invalid basis {list(basis)}")
        self.rows = [[Fraction(v) for v in row] for row in a]
        self.rhs = [Fraction(v) for v in b]
        self.c = [Fraction(v) for v in c]
        self.basis = list(basis)
        self.pivots = 0
        self._canonicalise()

    def _pivot(self, r: int, j: int) -> None:
        piv = self.rows[r][j]
        row = [v / piv for v in self.rows[r]]
        self.rows[r] = row
        self.rhs[r] /= piv
        live = [k for k, v in enumerate(row) if v]
        for i in range(self.m):
            f = self.rows[i][j]
            if i != r and f:
                target = self.rows[i]
                for k in live:
                    target[k] -= f * row[k]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j

    def _canonicalise(self) -> None:
        for r, j in enumerate(self.basis):
            if not self.rows[r][j]:
                raise ValidationError(f"basis column {j} is singular in row {r}")
            self._pivot(r, j)
        if any(v < 0 for v in self.rhs):
            raise ValidationError("starting basis is not feasible")

    def _reduced_costs(self) -> list[Fraction]:
        cost = list(self.c)
        for r, j in enumerate(self.basis):
            cb = self.c[j]
            if cb:
                for k, v in enumerate(self.rows[r]):
                    if v:
                        cost[k] -= cb * v
        return cost

    def solve(self) -> LPSolution:
        cost = self._reduced_costs()
        value = sum((self.c[j] * self.rhs[r] for r, j in enumerate(self.basis)), Fraction(0))
        status: Literal["optimal", "unbounded"] = "optimal"
        while True:
            entering = next((j for j in range(self.n) if cost[j] < 0), None)
            if entering is None:
                break
            candidates = [
                (self.rhs[r] / self.rows[r][entering], self.basis[r], r)
                for r in range(self.m)
                if self.rows[r][entering] > 0
            ]
            if not candidates:
                status = "unbounded"
                break
            _, _, r = min(candidates)
            self._pivot(r, entering)
            z = cost[entering]
            cost = [ck - z * v for ck, v in zip(cost, self.rows[r], strict=True)]
            value += z * self.rhs[r]
            self.pivots += 1

        x = [Fraction(0)] * self.n
        for r, j in enumerate(self.basis):
            x[j] = self.rhs[r]
        logger.debug("simplex %s after %d pivots, %d rows x %d columns", status, self.pivots, self.m, self.n)
        return LPSolution(status=status, x=tuple(x), objective=value, pivots=self.pivots)
