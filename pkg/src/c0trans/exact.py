"""Exact rational helpers and a small fraction-free linear programming solver.

Every predicate in the package bottoms out here. The LP works on integer
tableaux (Bareiss-style pivoting), so there is no rounding anywhere and the
per-pivot cost stays close to plain integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction


def to_fraction(value) -> Fraction:
    """Parse a scalar exactly.

    Accepts ``Fraction``, ``int``, strings like ``"3/4"`` or ``"-1.25e-2"``.
    Floats are taken through their shortest decimal repr, so ``0.1`` means 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def fmt(q: Fraction) -> str:
    """Render as ``"p/q"`` (or ``"p"`` for integers)."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def exact_json(q: Fraction) -> dict:
    return {"exact": fmt(q), "decimal": float(q)}


def sign(q) -> int:
    return (q > 0) - (q < 0)


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f = f / p
                row_r, row_c = m[r], m[col]
                for j in range(col + 1, n):
                    row_r[j] -= f * row_c[j]
    return result


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve a square system exactly; ``None`` when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        row_c = m[col]
        for j in range(col, n + 1):
            row_c[j] /= p
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                row_r = m[r]
                for j in range(col, n + 1):
                    row_r[j] -= f * row_c[j]
    return [m[i][n] for i in range(n)]


# --------------------------------------------------------------------------
# Linear programming: minimize c.x  s.t.  A x = b, x >= 0


class LPError(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _integer_row(values: Iterable[Fraction]) -> tuple[list[int], int]:
    vals = [Fraction(v) for v in values]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in vals], den


class _Tableau:
    """Fraction-free simplex tableau.

    Row ``i`` holds ``d * (B^-1 [A | b])_i`` for the current basis ``B`` with
    ``d`` the last pivot; the last row holds ``d`` times reduced costs.
    """

    def __init__(self, rows: list[list[int]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.d = 1

    def pivot(self, r: int, c: int) -> None:
        rows = self.rows
        prow = rows[r]
        p = prow[c]
        d = self.d
        width = len(prow)
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                if p != d:
                    for j in range(width):
                        if row[j]:
                            row[j] = row[j] * p // d
                continue
            for j in range(width):
                row[j] = (row[j] * p - f * prow[j]) // d
        self.basis[r] = c
        if p < 0:
            # keep the common denominator positive so sign tests read directly
            for row in rows:
                for j in range(width):
                    row[j] = -row[j]
            p = -p
        self.d = p

    def run(self, allowed: int) -> str:
        """Bland's rule on columns ``< allowed``; objective is the last row."""
        rows = self.rows
        obj = rows[-1]
        ncons = len(rows) - 1
        while True:
            enter = next((j for j in range(allowed) if obj[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            for i in range(ncons):
                a = rows[i][enter]
                if a > 0:
                    rhs = rows[i][-1]
                    if best is None:
                        best = i
                        continue
                    # compare rhs/a with rows[best][-1]/rows[best][enter]
                    lhs = rhs * rows[best][enter]
                    cur = rows[best][-1] * a
                    if lhs < cur or (lhs == cur and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                return "unbounded"
            self.pivot(best, enter)


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Exact two-phase simplex for ``min c.x, A x = b, x >= 0``."""
    m = len(A)
    n = len(c)
    if m == 0:
        if any(to_fraction(ci) < 0 for ci in c):
            return LPResult("unbounded")
        return LPResult("optimal", Fraction(0), tuple(Fraction(0) for _ in range(n)))
    rows: list[list[int]] = []
    for row, bi in zip(A, b):
        ints, _ = _integer_row(list(row) + [bi])
        if ints[-1] < 0:
            ints = [-v for v in ints]
        # artificial columns go after the structural ones
        rows.append(ints[:n] + [0] * m + [ints[-1]])
    for i in range(m):
        rows[i][n + i] = 1
    phase1 = [0] * (n + m + 1)
    for row in rows:
        for j in range(n):
            phase1[j] -= row[j]
        phase1[-1] -= row[-1]
    tab = _Tableau(rows + [phase1], list(range(n, n + m)))
    tab.run(n + m)
    if tab.rows[-1][-1] != 0:
        return LPResult("infeasible")

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.basis):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1

    cint, cden = _integer_row(c)
    d = tab.d
    obj = [0] * (n + m + 1)
    for j in range(n):
        obj[j] = cint[j] * d
    for i, bcol in enumerate(tab.basis):
        cb = cint[bcol]
        if cb:
            row = tab.rows[i]
            for j in range(n):
                obj[j] -= cb * row[j]
            obj[-1] -= cb * row[-1]
    tab.rows[-1] = obj
    status = tab.run(n)
    if status == "unbounded":
        return LPResult("unbounded")
    d = tab.d
    x = [Fraction(0)] * n
    for i, bcol in enumerate(tab.basis):
        x[bcol] = Fraction(tab.rows[i][-1], d)
    value = Fraction(-tab.rows[-1][-1], d * cden)
    return LPResult("optimal", value, tuple(x))


def feasible(A: Sequence[Sequence], b: Sequence) -> bool:
    """Whether ``A x = b, x >= 0`` has a solution."""
    return solve_lp([0] * (len(A[0]) if A else 0), A, b).status != "infeasible"
