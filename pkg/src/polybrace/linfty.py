"""Weight-filtered (curved) L-infinity algebras, Maurer-Cartan residuals,
twisting, and split fiber twists, all truncated at an explicit weight cap.

Brackets are graded-antisymmetric of degree 2-k in arity k and obey the
admissible weight containment wt([a_1..a_k]) = sum(wt) + 1 - k. Elements are
`gradedlin.Element` over labels carrying (degree, weight); evaluation drops
terms above the weight cap, which realizes the nilpotent quotient.
"""

import itertools
from fractions import Fraction

from polybrace.gradedlin import BasisSpace, Element, LinearMap, kernel_basis, koszul_sign


def factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


class WeightFilteredLinfty:
    """An L-infinity algebra with finite bracket arities and a weight cap.

    brackets: dict arity -> fn(label_tuple) -> Element; must be defined on
    every ordered tuple (use `antisymmetrize_table` for table input).
    degree_of/weight_of give the bigrading of labels; space is an optional
    BasisSpace enabling kernel computations.
    """

    def __init__(
        self,
        brackets,
        degree_of,
        weight_of,
        weight_cap,
        curvature=None,
        space=None,
        name="g",
    ):
        self.brackets = dict(brackets)
        self.degree_of = degree_of
        self.weight_of = weight_of
        self.weight_cap = weight_cap
        self.curvature = curvature if curvature is not None else Element.zero()
        self.space = space
        self.name = name

    def max_arity(self):
        return max(self.brackets, default=0)

    def truncate(self, el):
        return Element(
            {l: c for l, c in el.items() if self.weight_of(l) <= self.weight_cap}
        )

    def element_degrees(self, el):
        return sorted({self.degree_of(l) for l, _ in el.items()})

    def bracket(self, *elements):
        """Multilinear evaluation of the arity-len(elements) bracket."""
        k = len(elements)
        fn = self.brackets.get(k)
        if fn is None:
            return Element.zero()
        acc = Element.zero()
        for combo in itertools.product(*[list(e.items()) for e in elements]):
            labels = tuple(l for l, _ in combo)
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            if not coeff:
                continue
            acc = acc + fn(labels) * coeff
        return self.truncate(acc)

    def d(self, el):
        return self.bracket(el)

    def mc_residual(self, x):
        """curvature + d x + sum_{k>=2} (1/k!) [x,..,x]_k, exactly."""
        ws = sorted({self.weight_of(l) for l, _ in x.items()})
        if any(w < 2 for w in ws):
            raise ValueError(f"MC candidates live in weights >= 2, got {ws}")
        acc = self.truncate(self.curvature) + self.d(x)
        for k in range(2, self._mc_arity_bound(ws)):
            fn = self.brackets.get(k)
            if fn is None:
                continue
            term = self.bracket(*([x] * k))
            if term:
                acc = acc + term * Fraction(1, factorial(k))
        return acc

    def _mc_arity_bound(self, weights):
        # arity-k insertion of weight->=2 elements has weight >= k+1
        if not weights:
            return 2
        return max(self.max_arity() + 1, self.weight_cap)

    def twist(self, x, check=True):
        """The same space with brackets [y_1..y_n]' = sum_k (1/k!)[x^k, y*]."""
        if check:
            res = self.mc_residual(x)
            if res:
                raise ValueError(f"twist by non-MC element; residual {res!r}")
        outer = self

        def make(n):
            def fn(labels):
                acc = Element.zero()
                for k in range(0, outer.max_arity() - n + 1):
                    bfn = outer.brackets.get(n + k)
                    if bfn is None:
                        continue
                    args = [x] * k + [Element.basis(l) for l in labels]
                    term = outer.bracket_multi(n + k, args)
                    if term:
                        acc = acc + term * Fraction(1, factorial(k))
                return acc

            return fn

        arities = sorted(self.brackets)
        new_brackets = {n: make(n) for n in range(1, max(arities) + 1)}
        return WeightFilteredLinfty(
            new_brackets,
            self.degree_of,
            self.weight_of,
            self.weight_cap,
            curvature=Element.zero(),
            space=self.space,
            name=self.name + f"^{{{x!r}}}"[:24],
        )

    def bracket_multi(self, k, elements):
        fn = self.brackets.get(k)
        if fn is None or len(elements) != k:
            return Element.zero()
        acc = Element.zero()
        for combo in itertools.product(*[list(e.items()) for e in elements]):
            labels = tuple(l for l, _ in combo)
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            acc = acc + fn(labels) * coeff
        return self.truncate(acc)


def antisymmetrize_table(table, degree_of):
    """Bracket function from values on canonically sorted label tuples.

    Lookup reorders inputs into sorted order, with the graded-antisymmetry
    sign koszul(perm) * sgn(perm); repeated even-degree labels annihilate.
    """

    def fn(labels):
        order = sorted(range(len(labels)), key=lambda i: (repr(labels[i]), i))
        key = tuple(labels[i] for i in order)
        # repeated labels: even degree kills the bracket (antisymmetry)
        for a, b in zip(key, key[1:]):
            if a == b and degree_of(a) % 2 == 0:
                return Element.zero()
        val = table.get(key)
        if val is None or not val:
            return Element.zero()
        perm = [0] * len(labels)
        for newpos, old in enumerate(order):
            perm[old] = newpos
        degs = [degree_of(l) for l in labels]
        sign = koszul_sign(perm, degs)
        parity = _perm_parity(perm)
        return val * (sign * parity)

    return fn


def _perm_parity(perm):
    seen = [False] * len(perm)
    parity = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            parity = -parity
    return parity


def check_admissibility(g, labels=None):
    """Assert the weight containment on basis brackets; returns violations."""
    labels = labels if labels is not None else (g.space.labels if g.space else [])
    bad = []
    for k, fn in g.brackets.items():
        for combo in itertools.combinations_with_replacement(labels, k):
            out = fn(tuple(combo))
            want = sum(g.weight_of(l) for l in combo) + 1 - k
            for l, _ in out.items():
                if g.weight_of(l) != want:
                    bad.append((k, combo, l))
    return bad


def check_jacobi(g, labels, max_arity=4):
    """Generalized Jacobi identities up to the given arity on label tuples.

    sum over (i, n-i) unshuffles of +/- [ [x_sigma(1..i)], x_sigma(i+1..n) ]
    = 0, with graded-antisymmetric Koszul-sgn signs. Returns violations.
    """
    bad = []
    for n in range(1, max_arity + 1):
        for combo in itertools.combinations(labels, n):
            acc = Element.zero()
            degs = [g.degree_of(l) for l in combo]
            for i in range(1, n + 1):
                j = n - i + 1
                split_sign = -1 if (i * (j - 1)) % 2 else 1
                for subset in itertools.combinations(range(n), i):
                    rest = [k for k in range(n) if k not in subset]
                    order = list(subset) + rest
                    perm = [0] * n
                    for newpos, old in enumerate(order):
                        perm[old] = newpos
                    sign = koszul_sign(perm, degs) * _perm_parity(perm) * split_sign
                    inner = g.bracket(*[Element.basis(combo[k]) for k in subset])
                    if not inner:
                        continue
                    outer_args = [inner] + [Element.basis(combo[k]) for k in rest]
                    term = g.bracket(*outer_args)
                    if term:
                        acc = acc + term * sign
            if acc:
                bad.append((combo, acc))
    return bad


def fiber_twist(g1, g2, p_map, i_map, x):
    """ker(p) twisted by i(x), for a split strict surjection p with section i.

    p_map, i_map: LinearMap between the spaces of g1 and g2 (degree 0,
    weight 0) with p o i = id. x: MC element of g2. Returns (twisted kernel
    L-infinity with space spanned by the kernel basis, the kernel basis).
    """
    comp = p_map.compose(i_map)
    for l in g2.space.labels:
        if comp.apply(Element.basis(l)) != Element.basis(l):
            raise ValueError("p o i is not the identity")
    ix = i_map.apply(x)
    ker = kernel_basis(p_map)
    twisted = g1.twist(ix, check=False)
    if g2.mc_residual(x):
        raise ValueError("x is not Maurer-Cartan in the base")
    return twisted, ker


def mc_solutions_on_grid(g, span, coeff_range):
    """All MC elements of the form sum c_i v_i with c_i in coeff_range."""
    out = []
    for coeffs in itertools.product(coeff_range, repeat=len(span)):
        cand = Element.zero()
        for c, v in zip(coeffs, span):
            cand = cand + v * c
        try:
            res = g.mc_residual(cand)
        except ValueError:
            continue
        if not res:
            out.append((coeffs, cand))
    return out
