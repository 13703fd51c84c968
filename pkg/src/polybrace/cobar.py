"""The cobar construction: free operad on desuspended cogenerators with the
splitting differential, plus the d^2 = 0 certification report.

Free-operad elements are Q-combinations of labeled trees. A tree is either a
leaf ("L", i) or a vertex ("V", label, children); vertex labels name
generators (for the cobar: s X with X a cogenerator word). The tensor factors
of a tree are ordered by depth-first traversal; canonicalization sorts the
children of every vertex and tracks the Koszul sign of the induced label
shuffle, collapsing trees with equal odd-degree siblings to zero.

Differential on a generator s X of arity m:
    d(s X) = - sum over upper-leaf subsets S (2 <= |S| <= m-1) and splitting
      constants X -> X_(root) (x) X_(up) of (-1)^(deg X_(root)) times the
      two-vertex tree [root = s X_(root); first child = upper vertex s X_(up)
      on the S-leaves; remaining leaves ascending]
    + theta(X) * identity when the cooperad is curved and m = 1,
extended to trees as a derivation. The sign conventions are certified by the
d^2 = 0 reports, not imported.
"""

import itertools
from fractions import Fraction

from polybrace.gradedlin import Element, koszul_sign

LEAF = "L"
VERT = "V"


def leaf(i):
    return (LEAF, i)


def node(label, children):
    return (VERT, label, tuple(children))


def is_leaf(t):
    return t[0] == LEAF


def tree_leaves(t):
    if is_leaf(t):
        return [t[1]]
    out = []
    for c in t[2]:
        out.extend(tree_leaves(c))
    return out


def tree_labels(t):
    """Vertex labels in depth-first order (root first)."""
    if is_leaf(t):
        return []
    out = [t[1]]
    for c in t[2]:
        out.extend(tree_labels(c))
    return out


def tree_degree(t, deg_of):
    return sum(deg_of(lab) for lab in tree_labels(t))


def identity_tree():
    return leaf(1)


def canonical_element(t, deg_of, act):
    """Expand a labeled tree in the shuffle-tree basis.

    Children of every vertex are sorted by minimal leaf; the slot shuffle
    acts on the vertex label through the cooperad action `act(m, sigma,
    label) -> Element` and contributes the Koszul sign of permuting the
    subtree blocks (generator parities). Returns an Element over trees.
    """
    if is_leaf(t):
        return Element.basis(t)
    kid_elts = [canonical_element(c, deg_of, act) for c in t[2]]
    m = len(kid_elts)
    acc = Element.zero()
    for combo in _expand(kid_elts):
        kids, coeff = combo
        mins = [min(tree_leaves(c), default=10**6) for c in kids]
        order = sorted(range(m), key=lambda i: mins[i])
        if order == list(range(m)):
            acc = acc + Element.basis(node(t[1], kids), coeff)
            continue
        degs = [tree_degree(c, deg_of) for c in kids]
        perm = [0] * m
        for newpos, old in enumerate(order):
            perm[old] = newpos
        ks = koszul_sign(perm, degs)
        # slot j of the sorted vertex holds the old slot order[j]; the label
        # transforms by that slot permutation
        sigma = tuple(order[j] + 1 for j in range(m))
        acted = act(m, sigma, t[1])
        new_kids = [kids[i] for i in order]
        for lab2, c2 in acted.items():
            acc = acc + Element.basis(node(lab2, new_kids), coeff * c2 * ks)
    return acc


def _expand(elts):
    """Cartesian expansion of child Elements into (children, coeff) pairs."""
    if not elts:
        yield [], Fraction(1)
        return
    for t0, c0 in elts[0].items():
        for rest, c in _expand(elts[1:]):
            yield [t0] + rest, c0 * c


def _encode(t):
    if is_leaf(t):
        return ("L", t[1])
    return ("V", repr(t[1]), tuple(_encode(c) for c in t[2]))


def encode_tree(t):
    """Stable text encoding for golden files and reports."""
    if is_leaf(t):
        return str(t[1])
    inner = ",".join(encode_tree(c) for c in t[2])
    return f"[{t[1]}|{inner}]"


def graft_labeled(host, position, scion, deg_of):
    """host o_position scion on labeled trees, with the Koszul sign from
    moving the scion's label block past the host labels that come after the
    grafted leaf in depth-first order. Leaves renumbered standard-style."""
    b = len(tree_leaves(scion))

    def renumber(t, mapping):
        if is_leaf(t):
            return leaf(mapping[t[1]])
        return node(t[1], [renumber(c, mapping) for c in t[2]])

    host_leaves = tree_leaves(host)
    if position not in host_leaves:
        raise ValueError(f"no leaf {position} in host")
    # degree of host labels after the grafted leaf in DFS order
    after = _labels_after_leaf(host, position, deg_of)
    sd = tree_degree(scion, deg_of)
    sign = -1 if (after % 2 and sd % 2) else 1

    smap = {l: l + 1000 for l in tree_leaves(scion)}
    scion2 = renumber(scion, smap)

    def replace(t):
        if is_leaf(t):
            return scion2 if t[1] == position else t
        return node(t[1], [replace(c) for c in t[2]])

    merged = replace(host)
    mapping = {}
    for l in sorted(host_leaves):
        if l < position:
            mapping[l] = l
        elif l == position:
            for j in sorted(smap.values()):
                mapping[j] = position + (j - 1001)
        else:
            mapping[l] = l + b - 1
    return renumber(merged, mapping), sign


def _labels_after_leaf(t, position, deg_of):
    """Sum of label degrees strictly after the leaf in DFS order."""
    state = {"found": False, "after": 0}

    def dfs(u):
        if is_leaf(u):
            if u[1] == position:
                state["found"] = True
            return
        if state["found"]:
            state["after"] += deg_of(u[1])
        for c in u[2]:
            dfs(c)

    dfs(t)
    return state["after"]


class CobarOperad:
    """Omega(C) for a cooperad with per-arity bases and splitting tables.

    Elements live in the shuffle-tree basis (children sorted by minimal
    leaf); slot shuffles act on vertex labels through the cooperad action.
    """

    def __init__(self, C, cap):
        self.C = C
        self.cap = cap
        self._dgen_cache = {}

    def generators(self):
        out = []
        for m in range(0, self.cap + 1):
            for X in self.C.reduced_labels(m):
                out.append((m, X))
        return out

    def gen_degree(self, gen):
        m, X = gen
        return self.C.degree(m, X) + 1

    def corolla(self, gen):
        m, X = gen
        return node((m, X), [leaf(i) for i in range(1, m + 1)])

    def word_degree(self, m, X):
        wd = getattr(self.C, "word_degree", None)
        if wd is None:
            return self.C.degree(m, X)
        return wd(m, X)

    def deg_of(self, label):
        """Parity for tree-tensor reorderings: one plus the dual-word degree
        (a suspension symbol rides on each vertex). The d^2 certifications
        pin this convention together with the splitting sign below."""
        m, X = label
        return self.word_degree(m, X) + 1

    def act_label(self, m, sigma, label):
        """Slot shuffle acting on a vertex label, via the cooperad action.

        The inverse permutation acts (slots move, labels follow); fixed by
        the d^2 = 0 certifications together with the splitting geometry.
        """
        _, X = label
        inv = [0] * m
        for j in range(1, m + 1):
            inv[sigma[j - 1] - 1] = j
        acted = self.C.act(m, tuple(inv), X)
        return Element({(m, X2): c for X2, c in acted.items()})

    def canonicalize(self, t):
        return canonical_element(t, self.deg_of, self.act_label)

    def canonicalize_elt(self, el):
        acc = Element.zero()
        for t, c in el.items():
            acc = acc + self.canonicalize(t) * c
        return acc

    def d_generator(self, gen):
        """Differential of one generator, as a shuffle-tree element."""
        if gen in self._dgen_cache:
            return self._dgen_cache[gen]
        m, X = gen
        acc = Element.zero()
        for size in range(2, m):
            for S in itertools.combinations(range(1, m + 1), size):
                rest = [j for j in range(1, m + 1) if j not in S]
                for X1, X2, c in self.C.cosplit(m, X, S):
                    up = node((size, X2), [leaf(j) for j in S])
                    t = node(
                        (len(rest) + 1, X1), [up] + [leaf(j) for j in rest]
                    )
                    exp = self.word_degree(m - size + 1, X1)
                    sign = -1 if exp % 2 else 1
                    acc = acc + self.canonicalize(t) * (Fraction(-1) * sign * c)
        theta = getattr(self.C, "theta", None)
        if theta is not None and m == 1:
            tc = theta(m, X)
            if tc:
                acc = acc + Element.basis(identity_tree(), -tc)
        self._dgen_cache[gen] = acc
        return acc

    def d(self, el):
        """Derivation extension over shuffle trees."""
        acc = Element.zero()
        for t, c in el.items():
            acc = acc + self._d_tree(t) * c
        return acc

    def _d_tree(self, t):
        if is_leaf(t):
            return Element.zero()
        acc = Element.zero()
        nverts = len(tree_labels(t))
        for pos in range(nverts):
            acc = acc + self._apply_at(t, pos, [0])
        return acc

    def _apply_at(self, t, pos, counter):
        """d applied at the pos-th vertex in DFS order, with the derivation
        prefix sign over the generator degrees passed on the way."""
        acc = Element.zero()
        state = {"i": -1, "prefix": 0}

        def walk(u):
            # returns Element over trees (relative subtree expansions)
            if is_leaf(u):
                return Element.basis(u)
            state["i"] += 1
            here = state["i"] == pos
            my_label = u[1]
            if not here:
                state["prefix"] += self.deg_of(my_label)
            prefix_here = state["prefix"]
            kid_elts = [walk(c) for c in u[2]]
            out = Element.zero()
            if here:
                dg = self.d_generator(my_label)
                sign = -1 if prefix_here % 2 else 1
                for combo, coeff in _expand(kid_elts):
                    for dt, dc in dg.items():
                        if is_leaf(dt):
                            if len(combo) != 1:
                                raise AssertionError("identity d-term arity")
                            out = out + Element.basis(combo[0], dc * coeff * sign)
                            continue
                        assembled, asign = _plug(dt, combo, self.deg_of)
                        out = out + Element.basis(assembled, dc * coeff * asign * sign)
            else:
                for combo, coeff in _expand(kid_elts):
                    out = out + Element.basis(node(my_label, combo), coeff)
            return out

        raw = walk(t)
        return self.canonicalize_elt(raw)

    # -- certification ---------------------------------------------------------

    def check_d_squared(self):
        """Expand d^2 on every generator; returns (ok, report dict)."""
        report = {}
        ok = True
        for gen in self.generators():
            m, X = gen
            if m < 1:
                continue
            first = self.d_generator(gen)
            second = self.d(first)
            if second:
                ok = False
                report[gen] = sorted(
                    (encode_tree(t), str(c)) for t, c in second.items()
                )
            else:
                report[gen] = []
        return ok, report


def _plug(dtree, children, deg_of):
    """Replace the leaves of a d-term by the original child subtrees.

    Tensor order: [d-term labels] then [children in slot order]; the target
    is the assembled tree's DFS order. The Koszul sign moves the child
    blocks into place (generator parities).
    """
    labels_d = tree_labels(dtree)
    child_degs = [tree_degree(c, deg_of) for c in children]
    order = []

    def walk(u):
        if is_leaf(u):
            order.append(("c", u[1] - 1))
            return
        order.append(("d", None))
        for c in u[2]:
            walk(c)

    walk(dtree)
    tgt = []
    di = 0
    for o in order:
        if o[0] == "d":
            tgt.append(("d", di))
            di += 1
        else:
            tgt.append(("c", o[1]))
    orig = [("d", i) for i in range(len(labels_d))] + [
        ("c", j) for j in range(len(children))
    ]
    pos_of = {item: k for k, item in enumerate(tgt)}
    perm = [pos_of[item] for item in orig]
    degs = [deg_of(l) for l in labels_d] + child_degs
    sign = koszul_sign(perm, degs)

    def assemble(u):
        if is_leaf(u):
            return children[u[1] - 1]
        return node(u[1], [assemble(c) for c in u[2]])

    return assemble(dtree), sign


def cobar(C, cap):
    """The cobar operad of a (curved) cooperad, truncated at the arity cap."""
    return CobarOperad(C, cap)


def certification_text(name, ok, report):
    lines = [f"cobar-check {name}: {'PASS' if ok else 'FAIL'}"]
    for gen in sorted(report, key=repr):
        residual = report[gen]
        if residual:
            lines.append(f"  generator {gen}: residual {residual}")
        else:
            lines.append(f"  generator {gen}: 0")
    return "\n".join(lines)
