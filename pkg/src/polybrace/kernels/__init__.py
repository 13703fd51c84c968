"""Exact rational elimination kernels.

The compiled extension is preferred when available; a pure-Python twin with
identical output is the fallback. `BACKEND` records which one got picked.
"""

from fractions import Fraction

try:
    from polybrace.kernels._rref_c import rref

    BACKEND = "c"
except ImportError:  # extension not built
    from polybrace.kernels._rref_py import rref

    BACKEND = "python"

__all__ = ["rref", "rank", "nullspace", "solve", "BACKEND"]


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of the right kernel of the matrix, echelonized by column order.

    Returns a list of length-ncols coefficient vectors (Fractions). The basis
    vector attached to free column f has entry 1 at f and its pivot-column
    entries read off the RREF, so the result is deterministic.
    """
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -red[i][f]
        basis.append(vec)
    return basis


def solve(rows, rhs, ncols):
    """One exact solution of M x = rhs, or None if inconsistent.

    Free variables are set to zero, which makes the output deterministic.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    # verify (cheap, and guards against malformed input)
    for r, b in zip(rows, rhs):
        acc = Fraction(0)
        for c, v in zip(r, x):
            acc += Fraction(c) * v
        if acc != Fraction(b):
            return None
    return x
