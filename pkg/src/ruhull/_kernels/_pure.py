"""Pure-Python reference implementation of the numeric kernels.

Semantics here are authoritative; the Cython module must match bit for bit.
Zero entries are skipped so that exact Fraction arithmetic only pays for
nonzero work (tableaus and 0/1 vectors are sparse in practice).
"""


def dot(a, b):
    """Exact inner product of two equal-length sequences (ints/Fractions)."""
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def dot_support(t, support):
    """Sum of t[i] over the index tuple `support`."""
    s = 0
    for i in support:
        s += t[i]
    return s


def best_support(t, supports):
    """Maximize dot_support(t, s) over supports; first maximizer wins.

    Returns (best value, index of first maximizer).
    """
    best = None
    best_at = -1
    for k, sup in enumerate(supports):
        v = 0
        for i in sup:
            v += t[i]
        if best is None or v > best:
            best = v
            best_at = k
    return best, best_at


def sub_scaled(row, pivot_row, factor):
    """In place: row -= factor * pivot_row, skipping zero pivot entries."""
    if not factor:
        return
    for j, p in enumerate(pivot_row):
        if p:
            row[j] = row[j] - factor * p


def bareiss_row(row, pivot_row, coeff, pivot, divisor):
    """Fraction-free elimination step, in place on an integer row.

    row[j] = (row[j] * pivot - coeff * pivot_row[j]) / divisor, where the
    division is exact by the pivoting invariant (entries are minors); a
    nonzero remainder means corrupted input and raises.
    """
    for j, p in enumerate(pivot_row):
        v = row[j] * pivot - coeff * p
        if v:
            q, r = divmod(v, divisor)
            if r:
                raise ArithmeticError("inexact division in fraction-free pivot")
            row[j] = q
        else:
            row[j] = 0


def combine(cx, x, cy, y):
    """Return the list cx*x + cy*y for equal-length sequences x, y."""
    return [cx * a + cy * b for a, b in zip(x, y)]
