"""Faithful endomorphism model for the shifted-Poisson operads.

The normal-form words of `pword` index a basis of P_n(m), but transporting
the standard operadic sign conventions onto word substitution is delicate.
Instead, every basis word is realized as an honest multilinear map on a
concrete P_n-algebra (a polyvector ring, whose product and bracket carry the
certified Schouten signs), composed with the textbook rule

    (phi o_i psi)(a_1..a_n) =
        (-1)^(|psi| (|a_1|+..+|a_{i-1}|)) phi(a_1, .., psi(a_i, ..), ..)

and the symmetric-group action

    (phi . sigma)(a_1,..,a_m) = koszul(perm) phi(a_sigma(1), .., a_sigma(m)).

Structure constants are recovered by evaluating on enough homogeneous
degree-0 tuples to separate the basis (a faithfulness rank check), so the
operad axioms hold by construction and every sign comes from one engine.
"""

import itertools
from fractions import Fraction
from functools import lru_cache

from polybrace import kernels
from polybrace.cdga import CdgaPresentation
from polybrace.gradedlin import Element, koszul_sign
from polybrace.polyvec import PolyvectorAlgebra
from polybrace.pword import WordContext


class MultilinearMap:
    """A multilinear operation on the model algebra, with its degree."""

    __slots__ = ("arity", "degree", "fn")

    def __init__(self, arity, degree, fn):
        self.arity = arity
        self.degree = degree
        self.fn = fn

    def __call__(self, args, degs):
        return self.fn(args, degs)


def end_compose(phi, i, psi):
    """Textbook partial composition of multilinear maps."""

    def fn(args, degs):
        pre = sum(degs[: i - 1])
        sign = -1 if (psi.degree * pre) % 2 else 1
        inner = psi(args[i - 1 : i - 1 + psi.arity], degs[i - 1 : i - 1 + psi.arity])
        inner_deg = psi.degree + sum(degs[i - 1 : i - 1 + psi.arity])
        new_args = args[: i - 1] + [inner] + args[i - 1 + psi.arity :]
        new_degs = degs[: i - 1] + [inner_deg] + degs[i - 1 + psi.arity :]
        return phi(new_args, new_degs) * sign

    return MultilinearMap(phi.arity + psi.arity - 1, phi.degree + psi.degree, fn)


def end_act(phi, sigma):
    """Right action: permute the inputs with the Koszul sign."""

    def fn(args, degs):
        new_args = [args[sigma[j] - 1] for j in range(phi.arity)]
        new_degs = [degs[sigma[j] - 1] for j in range(phi.arity)]
        perm = [0] * phi.arity
        for newpos in range(phi.arity):
            perm[sigma[newpos] - 1] = newpos
        sign = koszul_sign(perm, degs)
        return phi(new_args, new_degs) * sign

    return MultilinearMap(phi.arity, phi.degree, fn)


def _batch_suspension_sign(degrees, k):
    """Evaluation Koszul of (s^k (x) .. (x) s^k) on the given degrees."""
    m = len(degrees)
    e = k * sum((m - 1 - i) * d for i, d in enumerate(degrees))
    return -1 if e % 2 else 1


def conjugate_suspend(phi, k):
    """phi{k}(x) = s^k phi(s^-k x1, .., s^-k xa): the conjugation model of
    the operadic suspension, with degree |phi| - k(arity-1)."""
    if k == 0:
        return phi

    def fn(args, degs):
        sign = _batch_suspension_sign(degs, -k)
        inner = phi(args, [d - k for d in degs])
        return inner * sign

    return MultilinearMap(phi.arity, phi.degree - k * (phi.arity - 1), fn)


class PoissonEndModel:
    """P_n{susp} realized on a polyvector ring, with measured constants.

    kind restricts the word basis: 'P' (all normal words), 'Lie' (single
    blocks), 'Comm' (bracket-free); composites stay inside each span.
    """

    def __init__(self, n, cap=4, susp=0, kind="P"):
        self.n = n
        self.cap = cap
        self.susp = susp
        self.kind = kind
        # polyvectors at shift n-2: Schouten degree 1-n, product degree 0;
        # the graded base ring provides many degree-0 elements with rich
        # bracket interactions.
        base = CdgaPresentation(
            [
                ("u1", 0),
                ("u2", 0),
                ("u3", 0),
                ("v1", 1),
                ("w1", -1),
                ("v2", 1),
                ("w2", -1),
            ],
            name=f"model{n}",
        )
        self.P = PolyvectorAlgebra(base, n - 2)
        self.ctx = WordContext(n, {i: 0 for i in range(1, 10)})
        self._mu = MultilinearMap(2, 0, lambda a, d: self.P.mul(a[0], a[1]))

        # decalage: the Schouten bracket obeys the shifted antisymmetry
        # exponent (|a|+n-1)(|b|+n-1); twisting by (-1)^((n-1)|a|) turns it
        # into a plain-Koszul S_2-eigenvector, i.e. an honest End-operation.
        def lam(a, d):
            out = self.P.schouten(a[0], a[1])
            if ((n - 1) * d[0]) % 2:
                out = out * -1
            return out

        self._lam = MultilinearMap(2, 1 - n, lam)
        self._charts = {}
        self._word_maps = {}

    def labels(self, m):
        monos = self.ctx.monomials(range(1, m + 1))
        if self.kind == "Comm":
            return [w for w in monos if all(len(b) == 1 for b in w)]
        if self.kind == "Lie":
            return [w for w in monos if len(w) == 1]
        return monos

    def word_degree(self, label):
        m = sum(len(b) for b in label)
        return sum((len(b) - 1) * (1 - self.n) for b in label) - self.susp * (m - 1)

    # -- basis words as maps ----------------------------------------------------

    def word_map(self, label):
        """Left-normed composition tree of the word (conjugation-suspended),
        wired to standard input order through the symmetric action."""
        if label in self._word_maps:
            return self._word_maps[label]
        order = []
        block_maps = []
        for block in label:
            order.extend(block)
            bm = None
            for _ in range(len(block) - 1):
                bm = self._lam if bm is None else end_compose(self._lam, 1, bm)
            if bm is None:
                bm = MultilinearMap(1, 0, lambda a, d: a[0])
            block_maps.append(bm)
        total = None
        for bm in block_maps:
            if total is None:
                total = bm
            else:
                total = end_compose(end_compose(self._mu, 1, total), total.arity + 1, bm)
        if total is None:
            raise ValueError("empty word has no map")
        if list(order) != sorted(order):
            total = end_act(total, tuple(order))
        total = conjugate_suspend(total, self.susp)
        self._word_maps[label] = total
        return total

    # -- faithfulness chart ------------------------------------------------------

    def _element_pool(self):
        """Homogeneous monomials with their degrees; graded inputs separate
        the basis much faster than degree-0 ones."""
        ring = self.P.ring
        out = []
        for mono in ring.monomials(3):
            if mono:
                out.append((Element.basis(mono), ring.mono_degree(mono)))
        return out

    def chart(self, m):
        """(tuples, coords, rows): enough evaluations to separate the basis."""
        if m in self._charts:
            return self._charts[m]
        labels = self.labels(m)
        want = len(labels)
        pool = self._element_pool()
        tuples = []
        coords = []
        coord_index = {}
        rows = {lab: [] for lab in labels}
        rank = 0
        stream = _tuple_stream(len(pool), m)
        for combo_idx in stream:
            t_idx = len(tuples)
            combo = tuple(pool[i][0] for i in combo_idx)
            # world degrees: the conjugation reads inputs one suspension up
            combo_degs = [pool[i][1] + self.susp for i in combo_idx]
            tuples.append((combo, combo_degs))
            vals = {
                lab: self.word_map(lab)(list(combo), combo_degs) for lab in labels
            }
            for lab in labels:
                for mono, _ in vals[lab].items():
                    key = (t_idx, mono)
                    if key not in coord_index:
                        coord_index[key] = len(coords)
                        coords.append(key)
            width = len(coords)
            for lab in labels:
                row = rows[lab]
                row.extend([Fraction(0)] * (width - len(row)))
                for mono, c in vals[lab].items():
                    row[coord_index[(t_idx, mono)]] = c
            mat = [rows[lab] for lab in labels]
            rank = kernels.rank(mat, width)
            if rank == want:
                break
            if len(tuples) > 200:
                break
        if rank != want:
            raise RuntimeError(f"faithfulness not reached at arity {m}: {rank}/{want}")
        self._charts[m] = (tuples, coords, coord_index, rows)
        return self._charts[m]

    def expand(self, m, phi):
        """Coordinates of a multilinear map in the word basis."""
        tuples, coords, coord_index, rows = self.chart(m)
        labels = self.labels(m)
        width = len(coords)
        vec = [Fraction(0)] * width
        for t_idx, (combo, combo_degs) in enumerate(tuples):
            val = phi(list(combo), combo_degs)
            for mono, c in val.items():
                key = (t_idx, mono)
                pos = coord_index.get(key)
                if pos is None:
                    raise RuntimeError("value outside the basis span")
                vec[pos] = c
        mat_rows = [[rows[lab][j] for lab in labels] for j in range(width)]
        sol = kernels.solve(mat_rows, vec, len(labels))
        if sol is None:
            raise RuntimeError("expansion failed; map not in the span")
        return Element({lab: c for lab, c in zip(labels, sol) if c})

    # -- measured structure constants ---------------------------------------------

    @lru_cache(maxsize=None)
    def compose_table(self, a, i, b):
        out = {}
        for w1 in self.labels(a):
            for w2 in self.labels(b):
                comp = end_compose(self.word_map(w1), i, self.word_map(w2))
                out[(w1, w2)] = self.expand(a + b - 1, comp)
        return out

    @lru_cache(maxsize=None)
    def action_table(self, m, sigma):
        out = {}
        for w in self.labels(m):
            acted = end_act(self.word_map(w), sigma)
            out[w] = self.expand(m, acted)
        return out


def _tuple_stream(pool_size, m):
    """Deterministic stream of index tuples, varied early."""
    seen = set()
    # spread-out deterministic pseudo-random walk over index tuples
    state = 1
    for _ in range(100000):
        combo = []
        for _ in range(m):
            state = (state * 48271) % 2147483647
            combo.append(state % pool_size)
        combo = tuple(combo)
        if combo not in seen:
            seen.add(combo)
            yield combo


@lru_cache(maxsize=None)
def poisson_end_model(n, cap=4, susp=0, kind="P"):
    return PoissonEndModel(n, cap, susp, kind)
