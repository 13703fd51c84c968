"""Exact scalar arithmetic and bigraded linear algebra with Koszul signs.

Scalars are `fractions.Fraction` (exact, always in lowest terms). Elements are
finitely supported Q-linear combinations of hashable basis labels; each label
carries a cohomological degree and a weight through its owning `BasisSpace`
(or through the label itself, see `label_degree`). Differentials raise degree
by +1 throughout the package.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def koszul_sign(perm, degrees):
    """Sign of permuting homogeneous objects past each other.

    perm[i] is the target position of the object currently at position i;
    degrees[i] its cohomological degree. The sign is the product over
    inversions (i < j with perm[i] > perm[j]) of (-1)^(deg_i * deg_j).
    """
    n = len(perm)
    if len(degrees) != n:
        raise ValueError("permutation and degree sequence lengths differ")
    if sorted(perm) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    sign = 1
    for i in range(n):
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if perm[i] > perm[j] and degrees[j] % 2:
                sign = -sign
    return sign


def sort_with_sign(items, degrees, key):
    """Stable-sort items by key, tracking the Koszul sign of the shuffle.

    Returns (sorted_items, sign). sign is 0 when two items with equal keys
    and odd degree collide (the element is then its own negative).
    """
    indexed = sorted(range(len(items)), key=lambda i: (key(items[i]), i))
    perm = [0] * len(items)
    for newpos, old in enumerate(indexed):
        perm[old] = newpos
    sign = koszul_sign(perm, degrees)
    for a, b in zip(indexed, indexed[1:]):
        if key(items[a]) == key(items[b]) and degrees[a] % 2:
            return [items[i] for i in indexed], 0
    return [items[i] for i in indexed], sign


class Element:
    """A finitely supported linear combination of basis labels."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            for label, c in (terms.items() if isinstance(terms, dict) else terms):
                c = Fraction(c)
                if c:
                    c0 = d.get(label)
                    if c0 is None:
                        d[label] = c
                    else:
                        c0 += c
                        if c0:
                            d[label] = c0
                        else:
                            del d[label]
        self.terms = d

    @classmethod
    def basis(cls, label, coeff=ONE):
        return cls({label: coeff})

    @classmethod
    def zero(cls):
        return cls()

    def items(self):
        return self.terms.items()

    def coeff(self, label):
        return self.terms.get(label, ZERO)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        d = dict(self.terms)
        for label, c in other.terms.items():
            c0 = d.get(label)
            if c0 is None:
                d[label] = c
            else:
                c0 += c
                if c0:
                    d[label] = c0
                else:
                    del d[label]
        out = Element.__new__(Element)
        out.terms = d
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = Element.__new__(Element)
        out.terms = {l: -c for l, c in self.terms.items()}
        return out

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        out = Element.__new__(Element)
        out.terms = {} if not scalar else {l: c * scalar for l, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def map_labels(self, f):
        """Linear extension of a label-to-Element map."""
        acc = Element.zero()
        for label, c in self.terms.items():
            acc = acc + f(label) * c
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: repr(t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{label!r}" for label, c in self.sorted_terms())


def label_degree(label):
    """Degree of a label: its `.degree` attribute, or 0 for plain labels."""
    return getattr(label, "degree", 0)


def label_weight(label):
    return getattr(label, "weight", 0)


class BasisSpace:
    """An ordered finite basis with a bigrading (degree, weight) per label."""

    def __init__(self, labels, degrees=None, weights=None):
        self.labels = list(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self._index = {l: i for i, l in enumerate(self.labels)}
        if degrees is None:
            self._deg = {l: label_degree(l) for l in self.labels}
        else:
            self._deg = dict(zip(self.labels, degrees))
        if weights is None:
            self._wt = {l: label_weight(l) for l in self.labels}
        else:
            self._wt = dict(zip(self.labels, weights))

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self._index

    def index(self, label):
        return self._index[label]

    def degree(self, label):
        return self._deg[label]

    def weight(self, label):
        return self._wt[label]

    def vector(self, element):
        """Coordinates of an Element in this basis (column vector)."""
        v = [ZERO] * len(self.labels)
        for label, c in element.items():
            v[self._index[label]] = c
        return v

    def element(self, coords):
        return Element(
            {l: c for l, c in zip(self.labels, coords) if c}
        )


class LinearMap:
    """A degree/weight-homogeneous linear map between based spaces.

    columns maps each source label to an Element of the target space; every
    image term must have (degree, weight) equal to the source label's shifted
    by (degree_shift, weight_shift).
    """

    def __init__(self, source, target, columns, degree_shift=0, weight_shift=0):
        self.source = source
        self.target = target
        self.degree_shift = degree_shift
        self.weight_shift = weight_shift
        self.columns = {}
        for label in source.labels:
            img = columns.get(label, Element.zero())
            for tl, _ in img.items():
                if tl not in target:
                    raise ValueError(f"image label {tl!r} not in target basis")
                if target.degree(tl) != source.degree(label) + degree_shift:
                    raise ValueError(
                        f"degree mismatch on {label!r} -> {tl!r}: "
                        f"{target.degree(tl)} != {source.degree(label)} + {degree_shift}"
                    )
                if target.weight(tl) != source.weight(label) + weight_shift:
                    raise ValueError(
                        f"weight mismatch on {label!r} -> {tl!r}"
                    )
            self.columns[label] = img

    def apply(self, element):
        acc = Element.zero()
        for label, c in element.items():
            acc = acc + self.columns[label] * c
        return acc

    __call__ = apply

    def compose(self, other):
        """self after other; shifts add."""
        if other.target is not self.source and other.target.labels != self.source.labels:
            raise ValueError("basis mismatch in composition")
        cols = {l: self.apply(img) for l, img in other.columns.items()}
        return LinearMap(
            other.source,
            self.target,
            cols,
            self.degree_shift + other.degree_shift,
            self.weight_shift + other.weight_shift,
        )

    def matrix(self):
        """Dense matrix, rows = target labels, cols = source labels."""
        rows = [[ZERO] * len(self.source) for _ in range(len(self.target))]
        for label, img in self.columns.items():
            j = self.source.index(label)
            for tl, c in img.items():
                rows[self.target.index(tl)][j] = c
        return rows

    def is_zero(self):
        return all(not img for img in self.columns.values())


def compose_linear(f, g):
    """Exact composite f o g (target of g equals source of f)."""
    return f.compose(g)


def kernel_basis(linmap):
    """Exact Q-basis of ker(linmap), echelonized by the source basis order."""
    from polybrace import kernels

    m = linmap.matrix()
    n = len(linmap.source)
    if not m:
        m = [[ZERO] * n]
    vecs = kernels.nullspace(m, n)
    return [linmap.source.element(v) for v in vecs]


def rank_of(linmap):
    from polybrace import kernels

    m = linmap.matrix()
    if not m:
        return 0
    return kernels.rank(m, len(linmap.source))
