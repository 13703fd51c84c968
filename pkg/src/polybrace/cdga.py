"""Finitely presented graded-commutative dg algebras over Q.

A presentation is a list of generators with integer cohomological degrees and
a polynomial differential (degree +1, d^2 = 0, checked on generators). Only
semi-free presentations are first class; quotients enter through Koszul
resolutions of regular sequences, with regularity rank-tested inside an
explicit (degree window, monomial length) box.

Monomials are tuples of (generator name, exponent) pairs in the ring's fixed
generator order; odd generators square to zero. Polynomials are
`gradedlin.Element` instances over monomial labels.
"""

import itertools
from fractions import Fraction

from polybrace import kernels
from polybrace.gradedlin import Element, ONE, ZERO


class DegreeError(ValueError):
    pass


class Ring:
    """Graded-commutative polynomial ring on named generators."""

    def __init__(self, gens):
        self.gens = list(gens)
        names = [n for n, _ in self.gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.order = {n: i for i, (n, _) in enumerate(self.gens)}
        self.degs = {n: d for n, d in self.gens}

    def degree_of_gen(self, name):
        return self.degs[name]

    def is_odd(self, name):
        return self.degs[name] % 2 != 0

    def mono_degree(self, mono):
        return sum(self.degs[n] * e for n, e in mono)

    def mono_length(self, mono):
        return sum(e for _, e in mono)

    def poly_degrees(self, p):
        return sorted({self.mono_degree(m) for m, _ in p.items()})

    def is_homogeneous(self, p):
        return len(self.poly_degrees(p)) <= 1

    def one(self):
        return Element.basis(())

    def zero(self):
        return Element.zero()

    def gen(self, name):
        if name not in self.order:
            raise KeyError(name)
        return Element.basis(((name, 1),))

    def monomial(self, pairs):
        """Canonical monomial from (name, exp) pairs; merges and sorts."""
        acc = {}
        for n, e in pairs:
            acc[n] = acc.get(n, 0) + e
        mono = tuple(
            sorted(((n, e) for n, e in acc.items() if e), key=lambda t: self.order[t[0]])
        )
        for n, e in mono:
            if e > 1 and self.is_odd(n):
                return None
            if e < 0:
                raise ValueError("negative exponent")
        return mono

    def mono_mul(self, m1, m2):
        """Product of two monomials: (monomial, sign) or None if it vanishes."""
        sign = 1
        # count Koszul inversions: odd symbols of m2 that must pass odd symbols of m1
        odd_after = 0
        odd1 = [(self.order[n], e) for n, e in m1 if self.is_odd(n)]
        for n2, e2 in m2:
            if not self.is_odd(n2):
                continue
            o2 = self.order[n2]
            passed = sum(e for o1, e in odd1 if o1 > o2)
            if passed % 2 and e2 % 2:
                sign = -sign
        merged = self.monomial(tuple(m1) + tuple(m2))
        if merged is None:
            return None
        return merged, sign

    def poly_mul(self, p, q):
        acc = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                r = self.mono_mul(m1, m2)
                if r is None:
                    continue
                mono, sign = r
                acc[mono] = acc.get(mono, ZERO) + c1 * c2 * sign
        return Element(acc)

    def poly_pow(self, p, e):
        acc = self.one()
        for _ in range(e):
            acc = self.poly_mul(acc, p)
        return acc

    def mono_divide_once(self, mono, name):
        """Split mono = prefix * name * rest: list of (sign, reduced_mono).

        For an exponent-e factor of an even generator this yields one term
        with multiplicity e; signs account for moving a degree-|name| symbol
        out to the left.
        """
        out = []
        deg_prefix = 0
        for i, (n, e) in enumerate(mono):
            if n == name:
                reduced = self.monomial(
                    mono[:i] + ((n, e - 1),) + mono[i + 1 :]
                )
                sign = -1 if (deg_prefix % 2 and self.degs[name] % 2) else 1
                out.append((sign * e, reduced))
                break
            deg_prefix += self.degs[n] * e
        return out

    def derivation(self, images, op_degree):
        """Left derivation extending gen -> Element images.

        d(x1 x2 ... xk) = sum_i (-1)^(op_degree * deg(prefix)) x1..im(xi)..xk.
        Returns a function Element -> Element.
        """

        def apply_mono(mono):
            acc = Element.zero()
            deg_prefix = 0
            for i, (n, e) in enumerate(mono):
                img = images.get(n)
                if img is not None and img:
                    for j in range(e):
                        sign = (
                            -1
                            if (op_degree % 2 and (deg_prefix + j * self.degs[n]) % 2)
                            else 1
                        )
                        pre = self.monomial(mono[:i] + ((n, j),))
                        post = self.monomial(((n, e - 1 - j),) + mono[i + 1 :])
                        if pre is None or post is None:
                            continue
                        term = self.poly_mul(
                            self.poly_mul(Element.basis(pre), img),
                            Element.basis(post),
                        )
                        acc = acc + term * sign
                deg_prefix += self.degs[n] * e
            return acc

        def apply(p):
            acc = Element.zero()
            for mono, c in p.items():
                acc = acc + apply_mono(mono) * c
            return acc

        return apply

    def partial(self, p, name):
        """Left partial derivative with respect to a generator."""
        d = self.derivation({name: self.one()}, -self.degs[name])
        return d(p)

    def monomials(self, max_length, degree_window=None, sub=None):
        """Deterministic monomial enumeration: by length, then exponent-lex.

        sub restricts to a subset of generator names.
        """
        names = [n for n, _ in self.gens if sub is None or n in sub]
        out = []
        for total in range(max_length + 1):
            for combo in itertools.combinations_with_replacement(names, total):
                mono = self.monomial([(n, 1) for n in combo])
                if mono is None:
                    continue
                if self.mono_length(mono) != total:
                    continue
                if degree_window is not None:
                    d = self.mono_degree(mono)
                    if not (degree_window[0] <= d <= degree_window[1]):
                        continue
                out.append(mono)
        seen = set()
        uniq = []
        for m in out:
            if m not in seen:
                seen.add(m)
                uniq.append(m)
        return uniq

    def format_poly(self, p):
        if not p:
            return "0"
        parts = []
        for mono, c in sorted(
            p.items(), key=lambda t: (self.mono_length(t[0]), t[0])
        ):
            factors = " ".join(
                n if e == 1 else f"{n}^{e}" for n, e in mono
            )
            if not factors:
                factors = "1"
            parts.append(f"{c} {factors}".strip())
        return " + ".join(parts)


class CdgaPresentation:
    """A semi-free graded-commutative dg algebra presentation."""

    def __init__(self, gens, diff=None, name="A"):
        self.name = name
        self.ring = Ring(gens)
        self.diff = {}
        diff = diff or {}
        for n, _ in self.ring.gens:
            img = diff.get(n, Element.zero())
            if img:
                degs = self.ring.poly_degrees(img)
                if degs != [self.ring.degs[n] + 1]:
                    raise DegreeError(
                        f"d({n}) must be homogeneous of degree {self.ring.degs[n] + 1}, got {degs}"
                    )
            self.diff[n] = img
        self._d = self.ring.derivation(self.diff, 1)

    def gens(self):
        return list(self.ring.gens)

    def gen(self, name):
        return self.ring.gen(name)

    def one(self):
        return self.ring.one()

    def mul(self, *ps):
        acc = self.ring.one()
        for p in ps:
            acc = self.ring.poly_mul(acc, p)
        return acc

    def d(self, p):
        return self._d(p)

    def validate(self):
        """Check d^2 = 0 on generators; returns (ok, first_violation)."""
        for n, _ in self.ring.gens:
            r = self.d(self.diff[n])
            if r:
                return False, (n, r)
        return True, None

    def basis(self, max_length, degree=None):
        window = None if degree is None else (degree, degree)
        return self.ring.monomials(max_length, degree_window=window)

    def cohomology_rank(self, degree, max_length):
        """dim H^degree within the monomial-length box.

        Requires d to preserve the box on the relevant bases; raises
        TruncationError otherwise (never silently drops terms).
        """
        dom = self.basis(max_length, degree)
        pre = self.basis(max_length, degree - 1)

        def mat(src, tgt_degree):
            tgt = self.basis(max_length, tgt_degree)
            idx = {m: i for i, m in enumerate(tgt)}
            rows = [[ZERO] * len(src) for _ in range(len(tgt))]
            for j, m in enumerate(src):
                img = self.d(Element.basis(m))
                for mm, c in img.items():
                    if mm not in idx:
                        if self.ring.mono_length(mm) > max_length:
                            raise TruncationError(
                                f"d leaves the length-{max_length} box on {m}"
                            )
                        raise AssertionError("degree bookkeeping broken")
                    rows[idx[mm]][j] = c
            return rows

        d_deg = mat(dom, degree + 1)
        if dom:
            z = len(kernels.nullspace(d_deg if d_deg else [[ZERO] * len(dom)], len(dom)))
        else:
            z = 0
        if pre:
            b = kernels.rank(mat(pre, degree), len(pre))
        else:
            b = 0
        return z - b

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in self.ring.gens)
        return f"CdgaPresentation({self.name}; {gens})"


class TruncationError(RuntimeError):
    """An operation needed terms outside the declared box."""


def _max_diff_len(A):
    out = 1
    for img in A.diff.values():
        for m, _ in img.items():
            out = max(out, A.ring.mono_length(m))
    return out


class CdgaMorphism:
    """Degree-0 multiplicative map given by generator images."""

    def __init__(self, source, target, images, check=True):
        self.source = source
        self.target = target
        self.images = {}
        for n, dge in source.ring.gens:
            img = images.get(n, Element.zero())
            if img:
                degs = target.ring.poly_degrees(img)
                if degs != [dge]:
                    raise DegreeError(f"image of {n} has degree {degs}, want {dge}")
            self.images[n] = img
        if check:
            ok, witness = self.commutes_with_d()
            if not ok:
                raise ValueError(f"morphism does not commute with d on {witness[0]}")

    def commutes_with_d(self):
        for n, _ in self.source.ring.gens:
            lhs = self.apply(self.source.diff[n])
            rhs = self.target.d(self.images[n])
            if lhs - rhs:
                return False, (n, lhs - rhs)
        return True, None

    def apply(self, p):
        acc = Element.zero()
        for mono, c in p.items():
            term = self.target.one()
            for n, e in mono:
                term = self.target.ring.poly_mul(
                    term, self.target.ring.poly_pow(self.images[n], e)
                )
            acc = acc + term * c
        return acc

    __call__ = apply


def validate(A):
    """Spec-level validation verdict for a presentation."""
    ok, witness = A.validate()
    if ok:
        # Leibniz spot check on generator pairs (holds by construction of d)
        for (n1, _), (n2, _) in itertools.combinations(A.ring.gens, 2):
            x, y = A.gen(n1), A.gen(n2)
            lhs = A.d(A.mul(x, y))
            sign = -1 if A.ring.degs[n1] % 2 else 1
            rhs = A.mul(A.d(x), y) + A.mul(x, A.d(y)) * sign
            if lhs - rhs:
                return False, ("leibniz", n1, n2)
        return True, None
    return False, witness


def koszul_resolve(A, seq, name=None):
    """Adjoin odd generators eps_i with d(eps_i) = seq_i.

    seq entries must be cocycles of even total degree shape |eps| = |s|-1;
    classically (degree-0 regular elements) |eps| = -1. Returns the extended
    presentation; `resolution_ranks` rank-tests the quasi-isomorphism claim.
    """
    gens = list(A.ring.gens)
    diff = dict(A.diff)
    eps_names = []
    for i, s in enumerate(seq):
        degs = A.ring.poly_degrees(s)
        if len(degs) != 1:
            raise DegreeError("koszul_resolve needs homogeneous sequence entries")
        if A.d(s):
            raise ValueError("sequence entries must be cocycles")
        nm = f"eps{i + 1}"
        while nm in A.ring.order:
            nm += "_"
        eps_names.append(nm)
        gens.append((nm, degs[0] - 1))
        diff[nm] = s
    B = CdgaPresentation(gens, diff, name=name or (A.name + "~"))
    B.koszul_base = A
    B.koszul_seq = list(seq)
    B.koszul_eps = eps_names
    return B


def quotient_ranks(A, seq, degree, max_length):
    """dim of (A / ideal(seq)) in one degree, inside the length box."""
    basis = A.basis(max_length, degree)
    idx = {m: i for i, m in enumerate(basis)}
    rows = []
    for s in seq:
        s_mons = list(s.items())
        s_len = min(A.ring.mono_length(m) for m, _ in s_mons)
        for m in A.ring.monomials(max_length - s_len):
            prod = A.ring.poly_mul(Element.basis(m), s)
            row = [ZERO] * len(basis)
            keep = False
            ok = True
            for mm, c in prod.items():
                if A.ring.mono_degree(mm) != degree:
                    ok = False
                    break
                if A.ring.mono_length(mm) > max_length:
                    ok = False
                    break
                row[idx[mm]] = c
                keep = True
            if ok and keep:
                rows.append(row)
    r = kernels.rank(rows, len(basis)) if rows else 0
    return len(basis) - r


def resolution_ranks(B, degree, max_length):
    """(H^degree(B) rank, quotient rank) inside the box, for a Koszul model."""
    h = B.cohomology_rank(degree, max_length)
    q = quotient_ranks(B.koszul_base, B.koszul_seq, degree, max_length)
    return h, q


def tensor_presentation(A, B, rename=None):
    """Presentation of A (x) B on the disjoint union of generators.

    rename maps clashing B-generator names to fresh ones.
    """
    rename = rename or {}
    gens = list(A.ring.gens)
    diff = dict(A.diff)
    bmap = {}
    for n, d in B.ring.gens:
        nn = rename.get(n, n)
        if nn in dict(gens):
            raise ValueError(f"generator name clash: {nn}")
        bmap[n] = nn
        gens.append((nn, d))
    T = CdgaPresentation(gens, diff, name=f"{A.name}(x){B.name}")

    def push(p):
        return Element(
            {
                T.ring.monomial([(bmap[n], e) for n, e in mono]): c
                for mono, c in p.items()
            }
        )

    diff2 = dict(diff)
    for n, _ in B.ring.gens:
        diff2[bmap[n]] = push(B.diff[n])
    T = CdgaPresentation(gens, diff2, name=f"{A.name}(x){B.name}")
    T.tensor_bmap = bmap
    return T


def graph_morphism(f):
    """The graph of f: A -> B, as g: A (x) B -> B with g(a(x)1)=f(a), g(1(x)b)=b.

    Returns (T, g, ideal_gens) where ideal_gens generate ker(g) for semi-free
    inputs: a (x) 1 - 1 (x) f(a) over the A-generators.
    """
    A, B = f.source, f.target
    rename = {}
    for n, _ in B.ring.gens:
        if n in A.ring.order:
            rename[n] = n + "'"
    T = tensor_presentation(A, B, rename)
    bmap = T.tensor_bmap

    def emb_b(p):
        return Element(
            {
                T.ring.monomial([(bmap[n], e) for n, e in mono]): c
                for mono, c in p.items()
            }
        )

    images = {}
    for n, _ in A.ring.gens:
        images[n] = f.images[n]
    for n, _ in B.ring.gens:
        images[bmap[n]] = B.gen(n)
    g = CdgaMorphism(T, B, images)
    ideal = []
    for n, _ in A.ring.gens:
        ideal.append(T.gen(n) - emb_b(f.images[n]))
    return T, g, ideal


def _length_homogeneous(A, p):
    lens = {A.ring.mono_length(m) for m, _ in p.items()}
    return len(lens) == 1


def ideal_membership(A, p, gens, max_length):
    """Decide p in (gens) by bounded-length linear algebra.

    Returns True / False / None. When all ideal generators are homogeneous in
    both cohomological degree and monomial length, membership splits along the
    bigrading and a failed solve at a sufficient bound is a definite no;
    otherwise failure is reported as None (undecided at the bound).
    """
    if not p:
        return True
    exact = all(
        A.ring.is_homogeneous(s) and _length_homogeneous(A, s) for s in gens
    )
    pieces = {}
    for m, c in p.items():
        key = (A.ring.mono_degree(m), A.ring.mono_length(m))
        pieces.setdefault(key, {})[m] = c
    if len(pieces) > 1:
        results = [
            ideal_membership(A, Element(d), gens, max_length)
            for d in pieces.values()
        ]
        if all(r is True for r in results):
            return True
        if exact and any(r is False for r in results):
            return False
        if any(r is False for r in results):
            return False
        return None
    (degree, plen), = pieces.keys()
    if plen > max_length:
        return None
    basis = [
        m
        for m in A.basis(max_length, degree)
        if not exact or A.ring.mono_length(m) == plen
    ]
    idx = {m: i for i, m in enumerate(basis)}
    cols = []
    for s in gens:
        s_len = min(A.ring.mono_length(m) for m, _ in s.items())
        for m in A.ring.monomials(max_length - s_len):
            prod = A.ring.poly_mul(Element.basis(m), s)
            if not prod:
                continue
            col = [ZERO] * len(basis)
            usable = False
            for mm, c in prod.items():
                if mm in idx:
                    col[idx[mm]] = c
                    usable = True
                else:
                    usable = False
                    break
            if usable:
                cols.append(col)
    rhs = [ZERO] * len(basis)
    for m, c in p.items():
        rhs[idx[m]] = c
    if not cols:
        return False if exact else None
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(basis))]
    sol = kernels.solve(rows, rhs, len(cols))
    if sol is not None:
        return True
    return False if exact else None
