"""Exact reduced row echelon form over Q, pure-Python reference implementation.

Same integer fraction-free elimination as the compiled variant so that both
backends produce bit-identical output (RREF is unique anyway; sharing the
algorithm keeps intermediate coefficient growth comparable in benchmarks).
"""

from fractions import Fraction
from math import gcd


def _row_gcd(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x if x > 0 else -x)
            if g == 1:
                return 1
    return g


def rref(rows, ncols):
    """Reduced row echelon form of a rational matrix.

    rows: iterable of rows; entries are Fractions or ints.
    Returns (pivot_rows, pivot_cols) where pivot_rows is a list of lists of
    Fractions (the nonzero rows of the RREF) and pivot_cols the pivot columns.
    """
    num = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        if len(fr) != ncols:
            raise ValueError("row length mismatch")
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        num.append([int(x * den) for x in fr])
    nrows = len(num)

    pivots = []
    rank = 0
    for c in range(ncols):
        pr = -1
        for i in range(rank, nrows):
            if num[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        num[rank], num[pr] = num[pr], num[rank]
        piv_row = num[rank]
        b = piv_row[c]
        for i in range(nrows):
            if i == rank:
                continue
            a = num[i][c]
            if not a:
                continue
            row = num[i]
            for j in range(ncols):
                row[j] = row[j] * b - a * piv_row[j]
            g = _row_gcd(row)
            if g > 1:
                for j in range(ncols):
                    row[j] //= g
        pivots.append(c)
        rank += 1
        if rank == nrows:
            break

    out = []
    for i in range(rank):
        lead = num[i][pivots[i]]
        out.append([Fraction(x, lead) for x in num[i]])
    return out, pivots
