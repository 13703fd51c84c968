import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polybrace.gradedlin import (
    BasisSpace,
    Element,
    LinearMap,
    compose_linear,
    kernel_basis,
    koszul_sign,
    rank_of,
)


def test_koszul_identity():
    assert koszul_sign([0, 1, 2], [1, 1, 1]) == 1
    assert koszul_sign([0, 1], [5, 7]) == 1


def test_koszul_swap_of_odds():
    assert koszul_sign([1, 0], [1, 1]) == -1
    assert koszul_sign([1, 0], [1, 2]) == 1
    assert koszul_sign([1, 0], [2, 2]) == 1


def test_koszul_cycle_via_adjacent_transpositions():
    # (1 2 3) cycle on degrees (1,1,0): oracle composes the two adjacent swaps
    degs = [1, 1, 0]
    # object at 0 -> 1, 1 -> 2, 2 -> 0; decompose: swap (1,2) then (0,1)
    # as position permutations acting on the sequence
    s1 = koszul_sign([0, 2, 1], degs)  # swap objects in slots 1,2 (degs 1,0)
    seq_after = [degs[0], degs[2], degs[1]]
    s2 = koszul_sign([1, 0, 2], seq_after)  # swap slots 0,1 (degs 1,0)
    oracle = s1 * s2
    assert koszul_sign([1, 2, 0], degs) == oracle


def test_koszul_errors():
    with pytest.raises(ValueError):
        koszul_sign([0, 1], [1])
    with pytest.raises(ValueError):
        koszul_sign([0, 0], [1, 1])


@given(
    st.lists(st.integers(0, 5), min_size=2, max_size=6).flatmap(
        lambda degs: st.tuples(
            st.just(degs),
            st.permutations(list(range(len(degs)))),
            st.permutations(list(range(len(degs)))),
        )
    )
)
def test_koszul_composition(data):
    """sign(sigma o tau) = sign(tau) * sign(sigma acting after tau)."""
    degs, sigma, tau = data
    n = len(degs)
    # apply tau first: object i lands at tau[i]; then sigma on positions
    comp = [sigma[tau[i]] for i in range(n)]
    s_tau = koszul_sign(tau, degs)
    degs_after = [0] * n
    for i in range(n):
        degs_after[tau[i]] = degs[i]
    s_sigma = koszul_sign(sigma, degs_after)
    assert koszul_sign(comp, degs) == s_tau * s_sigma


_fracs = st.fractions(max_denominator=10**4)


@given(_fracs, _fracs, _fracs)
def test_scalar_field_axioms(a, b, c):
    assert a + (b + c) == (a + b) + c
    assert a * (b * c) == (a * b) * c
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    if a != 0:
        assert a * (1 / a) == 1


def _space(labels, degs):
    return BasisSpace(labels, degrees=degs)


def test_kernel_zero_map():
    V = _space(["e1", "e2"], [0, 0])
    W = _space(["f"], [0])
    zmap = LinearMap(V, W, {"e1": Element.zero(), "e2": Element.zero()})
    ker = kernel_basis(zmap)
    assert len(ker) == 2


def test_kernel_identity_map():
    V = _space(["e1", "e2"], [0, 1])
    idm = LinearMap(V, V, {l: Element.basis(l) for l in V.labels})
    assert kernel_basis(idm) == []


def test_kernel_one_by_two():
    V = _space(["e1", "e2"], [0, 0])
    W = _space(["f"], [0])
    m = LinearMap(V, W, {"e1": Element.basis("f"), "e2": Element.basis("f")})
    ker = kernel_basis(m)
    assert len(ker) == 1
    v = ker[0]
    assert v.coeff("e1") == -v.coeff("e2") != 0


def test_compose_with_identity():
    V = _space(["a", "b"], [0, 0])
    idm = LinearMap(V, V, {l: Element.basis(l) for l in V.labels})
    f = LinearMap(V, V, {"a": Element({"a": 1, "b": 2}), "b": Element({"b": 3})})
    assert compose_linear(f, idm).columns == f.columns
    assert compose_linear(idm, f).columns == f.columns


def test_compose_d_squared_zero():
    # three-step complex with d^2 = 0 by construction
    V0 = _space(["x"], [0])
    V1 = _space(["y1", "y2"], [1, 1])
    V2 = _space(["z"], [2])
    d0 = LinearMap(V0, V1, {"x": Element({"y1": 1, "y2": -1})}, degree_shift=1)
    d1 = LinearMap(V1, V2, {"y1": Element({"z": 1}), "y2": Element({"z": 1})}, degree_shift=1)
    assert compose_linear(d1, d0).is_zero()


def test_compose_random_vs_dense_oracle():
    rng = random.Random(7)
    V = _space(["a", "b", "c"], [0, 0, 0])
    for _ in range(10):
        fcols = {
            l: Element({m: Fraction(rng.randint(-3, 3)) for m in V.labels})
            for l in V.labels
        }
        gcols = {
            l: Element({m: Fraction(rng.randint(-3, 3)) for m in V.labels})
            for l in V.labels
        }
        f = LinearMap(V, V, fcols)
        g = LinearMap(V, V, gcols)
        h = compose_linear(f, g)
        fm, gm, hm = f.matrix(), g.matrix(), h.matrix()
        dense = [
            [sum(fm[i][k] * gm[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)
        ]
        assert dense == hm


def test_kernel_count_vs_rank_oracle():
    """kernel size = dim - rank, with rank from an independent elimination."""
    rng = random.Random(11)
    V = _space(["a", "b", "c", "d"], [0] * 4)
    W = _space(["u", "v", "w"], [0] * 3)
    for _ in range(15):
        cols = {
            l: Element({m: Fraction(rng.randint(-2, 2)) for m in W.labels})
            for l in V.labels
        }
        f = LinearMap(V, W, cols)
        ker = kernel_basis(f)
        for v in ker:
            assert not f.apply(v)
        # independent Gaussian elimination oracle
        m = [row[:] for row in f.matrix()]
        rank = 0
        for c in range(4):
            piv = None
            for r in range(rank, len(m)):
                if m[r][c]:
                    piv = r
                    break
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            pv = m[rank][c]
            for r in range(len(m)):
                if r != rank and m[r][c]:
                    fac = m[r][c] / pv
                    m[r] = [x - fac * y for x, y in zip(m[r], m[rank])]
            rank += 1
        assert len(ker) == 4 - rank


def test_linear_map_degree_checks():
    V = _space(["a"], [0])
    W = _space(["b"], [5])
    with pytest.raises(ValueError):
        LinearMap(V, W, {"a": Element.basis("b")}, degree_shift=1)
    LinearMap(V, W, {"a": Element.basis("b")}, degree_shift=5)
