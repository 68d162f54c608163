"""Exact rational simplex for packing LPs.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``, so the slack
basis is feasible from the start and no phase one is needed.  Pivoting
uses Bland's rule (lowest-index entering column, lowest-index leaving
basic variable on ratio ties), which rules out cycling and makes the
result deterministic.  Optimal dual values are read off the objective
row at the slack columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError


@dataclass
class LPResult:
    value: Fraction
    x: list[Fraction]
    y: list[Fraction]
    pivots: int


def solve_packing_lp(a: Sequence[Sequence[int | Fraction]], b: Sequence[int | Fraction],
                     c: Sequence[int | Fraction], max_pivots: int = 1_000_000) -> LPResult:
    m = len(a)
    ncols = len(c)
    if len(b) != m or any(len(row) != ncols for row in a):
        raise PreconditionError("LP shape mismatch")
    if any(v < 0 for v in b):
        raise PreconditionError("right-hand side must be nonnegative")
    width = ncols + m
    rows: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(v) for v in a[i]] + [Fraction(0)] * m
        row[ncols + i] = Fraction(1)
        rows.append(row)
    rhs = [Fraction(v) for v in b]
    obj = [-Fraction(v) for v in c] + [Fraction(0)] * m
    value = Fraction(0)
    basis = [ncols + i for i in range(m)]
    pivots = 0
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = rows[i][enter]
            if coef > 0:
                ratio = rhs[i] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise PreconditionError("LP is unbounded")
        piv = rows[leave][enter]
        prow = rows[leave]
        if piv != 1:
            prow = [v / piv for v in prow]
            rows[leave] = prow
            rhs[leave] /= piv
        nz = [j for j in range(width) if prow[j]]
        for i in range(m):
            if i == leave:
                continue
            factor = rows[i][enter]
            if factor:
                r = rows[i]
                for j in nz:
                    r[j] -= factor * prow[j]
                rhs[i] -= factor * rhs[leave]
        factor = obj[enter]
        for j in nz:
            obj[j] -= factor * prow[j]
        value -= factor * rhs[leave]
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise PreconditionError("pivot limit exceeded")
    x = [Fraction(0)] * ncols
    for i, var in enumerate(basis):
        if var < ncols:
            x[var] = rhs[i]
    y = [obj[ncols + i] for i in range(m)]
    return LPResult(value, x, y, pivots)
