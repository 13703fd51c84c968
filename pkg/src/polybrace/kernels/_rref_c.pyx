# cython: language_level=3, boundscheck=False, wraparound=False
"""Exact reduced row echelon form over Q, compiled hot kernel.

Fraction-free integer Gauss-Jordan with per-row gcd reduction; entries are
arbitrary-precision Python ints so exactness is preserved. The compiled win
comes from removing interpreter overhead in the inner elimination loops.
"""

from fractions import Fraction
from math import gcd


cdef inline object _abs(object x):
    return -x if x < 0 else x


cdef object _row_gcd(list row, Py_ssize_t ncols):
    cdef Py_ssize_t j
    cdef object g = 0
    for j in range(ncols):
        if row[j]:
            g = gcd(g, _abs(row[j]))
            if g == 1:
                return g
    return g


def rref(rows, Py_ssize_t ncols):
    """Reduced row echelon form; see the pure-Python twin for the contract."""
    cdef list num = []
    cdef list fr
    cdef Py_ssize_t nrows, i, j, c, rank, pr
    cdef object den, a, b, g
    cdef list row, piv_row

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
            row = num[i]
            a = row[c]
            if not a:
                continue
            for j in range(ncols):
                row[j] = row[j] * b - a * piv_row[j]
            g = _row_gcd(row, ncols)
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
