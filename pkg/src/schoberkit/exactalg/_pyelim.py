"""Pure-Python reduced row echelon form over the rationals."""

from __future__ import annotations

from fractions import Fraction


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Gauss-Jordan elimination.

    Returns the nonzero rows of the reduced echelon form and the pivot
    columns. The input is not modified.
    """
    a = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        inv = Fraction(1) / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots
