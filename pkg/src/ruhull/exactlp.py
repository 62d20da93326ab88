"""Exact linear feasibility over the rationals.

Solves "find x >= 0 with A x = b" by a Phase-I simplex; when the system is
infeasible the final multipliers give a Farkas certificate y with y A <= 0
componentwise and y b > 0, read off the artificial columns. Bland's
smallest-index rule guarantees termination.

The tableau is kept fraction-free: every row is pre-scaled to integers and a
pivot applies the two-term determinant update

    row[j] <- (row[j] * pivot - row[col] * pivot_row[j]) / divisor

with ``divisor`` the previous pivot (the pivot row itself stays put). Entries
then always equal the true rational tableau times the current positive
divisor, the division is exact because entries are minors of the original
matrix, and everything runs on plain integers instead of per-operation gcd
normalization. Sign tests and ratio comparisons only ever see true values
scaled by a positive constant, so the pivot rule is unaffected.

Artificial variables start basic and are barred from re-entering the basis
once they leave; this never changes feasibility (a feasible point uses no
artificials) and keeps the termination argument intact. Their columns stay in
the tableau so the certificate can be extracted at the end.

Intended for desk-scale systems (tens of rows, hundreds of columns).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import _kernels
from .errors import ValidationError

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class FeasiblePoint:
    """A solution x >= 0 of A x = b whose support columns are independent."""

    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class FarkasCertificate:
    """Row multipliers y with y A <= 0 and y b > 0: the system is infeasible."""

    y: tuple[Fraction, ...]


def solve_equality_feasibility(
    rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational]
) -> FeasiblePoint | FarkasCertificate:
    m = len(rows)
    if m == 0:
        raise ValidationError("feasibility system needs at least one row")
    n = len(rows[0])
    if len(rhs) != m:
        raise ValidationError("rhs length does not match row count")

    # Orient every row so its right-hand side is nonnegative, then clear its
    # denominators. Positive row scalings change neither feasibility nor any
    # sign the pivot rule looks at; the Farkas multipliers are mapped back
    # through them at the end. Artificial columns keep coefficient 1 so the
    # starting basis is the identity (divisor 1).
    scales: list[int] = []
    tableau: list[list[int]] = []
    for i in range(m):
        if len(rows[i]) != n:
            raise ValidationError("ragged coefficient matrix")
        b = Fraction(rhs[i])
        entries = [Fraction(v) for v in rows[i]]
        denom = math.lcm(b.denominator, *(e.denominator for e in entries))
        scale = -denom if b < 0 else denom
        row = [int(e * scale) for e in entries]
        row.extend(1 if k == i else 0 for k in range(m))
        row.append(int(b * scale))
        scales.append(scale)
        tableau.append(row)

    width = n + m + 1
    rhs_col = width - 1

    # Reduced costs for "minimize the sum of artificials": cost vector minus
    # the sum of the rows; the rhs cell is the negated objective value (both
    # implicitly times the divisor, which starts at 1).
    obj = [0] * n + [1] * m + [0]
    for row in tableau:
        for j in range(width):
            if row[j]:
                obj[j] -= row[j]

    basis = list(range(n, n + m))
    divisor = 1

    while True:
        entering = -1
        for j in range(n):  # structural columns only; artificials never re-enter
            if obj[j] < 0:
                entering = j
                break
        if entering < 0:
            break
        leaving_row = -1
        best_num = best_den = 0
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                b_i = tableau[i][rhs_col]
                if leaving_row < 0:
                    better = True
                else:
                    lhs = b_i * best_den
                    rhs_cmp = best_num * coeff
                    better = lhs < rhs_cmp or (
                        lhs == rhs_cmp and basis[i] < basis[leaving_row]
                    )
                if better:
                    leaving_row = i
                    best_num = b_i
                    best_den = coeff
        if leaving_row < 0:
            # Cannot happen: the Phase-I objective is bounded below by zero.
            raise AssertionError("phase-I simplex reported an unbounded column")
        prow = tableau[leaving_row]
        pivot = prow[entering]
        for i in range(m):
            if i != leaving_row:
                row = tableau[i]
                _kernels.bareiss_row(row, prow, row[entering], pivot, divisor)
        _kernels.bareiss_row(obj, prow, obj[entering], pivot, divisor)
        divisor = pivot
        basis[leaving_row] = entering

    if obj[rhs_col] == 0:  # objective value is -obj[rhs_col] / divisor
        x = [Fraction(0)] * n
        for i in range(m):
            if basis[i] < n:
                x[basis[i]] = Fraction(tableau[i][rhs_col], divisor)
        return FeasiblePoint(tuple(x))

    # Reduced cost of artificial i is obj[n+i] / divisor; its multiplier is
    # 1 minus that, mapped back through the row scaling.
    y = tuple(
        (1 - Fraction(obj[n + i], divisor)) * scales[i] for i in range(m)
    )
    return FarkasCertificate(y)
