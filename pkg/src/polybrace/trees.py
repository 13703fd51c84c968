"""Rooted-tree combinatorics: canonical forms, the two-vertex (shuffle) and
pitchfork enumerations, and grafting.

A tree is a nested immutable structure:
  leaf(i)                    -> ("l", i, color)
  vertex(children, ...)      -> ("v", kind, color, (child, ...))
colors tag the OUTGOING edge of a node ("s" solid / "d" dashed); kind tags a
vertex as external/internal/square where a construction needs it. Canonical
form sorts the children of every vertex by their encoded subtree, which fixes
one representative per isomorphism class (morphisms need not be planar).
"""

import itertools

SOLID = "s"
DASHED = "d"


def leaf(i, color=SOLID):
    return ("l", i, color)


def vertex(children, kind=None, color=SOLID):
    return ("v", kind, color, tuple(children))


def is_leaf(t):
    return t[0] == "l"


def node_color(t):
    return t[2]


def node_kind(t):
    return t[1]


def children(t):
    return t[3]


def leaves(t):
    if is_leaf(t):
        return [t[1]]
    out = []
    for c in children(t):
        out.extend(leaves(c))
    return out


def count_vertices(t):
    if is_leaf(t):
        return 0
    return 1 + sum(count_vertices(c) for c in children(t))


def arity_of_vertex(t):
    return len(children(t))


def canonical(t):
    """Canonical representative: children sorted by (encoding, min leaf)."""
    if is_leaf(t):
        return t
    cs = [canonical(c) for c in children(t)]
    cs.sort(key=_child_key)
    return ("v", t[1], t[2], tuple(cs))


def _child_key(c):
    ls = leaves(c)
    return (encode(c), min(ls) if ls else -1)


def encode(t):
    """Deterministic textual encoding used in golden tests."""
    if is_leaf(t):
        return f"{t[1]}" if t[2] == SOLID else f"{t[1]}:{t[2]}"
    kind = t[1] or ""
    color = "" if t[2] == SOLID else t[2]
    inner = ",".join(encode(c) for c in children(t))
    tag = f"{kind}{':' + color if color else ''}"
    return f"({tag}|{inner})" if tag else f"({inner})"


def relabel_leaves(t, mapping):
    if is_leaf(t):
        return ("l", mapping[t[1]], t[2])
    return ("v", t[1], t[2], tuple(relabel_leaves(c, mapping) for c in children(t)))


def enumerate_tree2(n, allow_empty_upper=True):
    """Canonical representatives of the two-vertex tree components.

    Components are indexed by the subset of leaves carried by the upper
    vertex; the child edge occupies the first input slot of the root.
    allow_empty_upper keeps the subset empty (arity-0 upper vertex).
    """
    out = []
    labels = list(range(1, n + 1))
    for r in range(0 if allow_empty_upper else 1, n + 1):
        for S in itertools.combinations(labels, r):
            rest = [i for i in labels if i not in S]
            upper = vertex([leaf(i) for i in S])
            t = vertex([upper] + [leaf(i) for i in rest])
            out.append((frozenset(S), canonical(t)))
    return out


def enumerate_pitchforks(n, r):
    """Pitchforks with n leaves and r top vertices over one root.

    Every leaf is attached to one of the r top vertices (never to the root),
    and top vertices are unordered; representatives are canonical forms.
    """
    if r < 1:
        raise ValueError("pitchforks need at least one top vertex")
    out = []
    seen = set()
    labels = list(range(1, n + 1))
    for assignment in itertools.product(range(r), repeat=n):
        groups = [[] for _ in range(r)]
        for lab, g in zip(labels, assignment):
            groups[g].append(lab)
        tops = [vertex([leaf(i) for i in grp]) for grp in groups]
        t = canonical(vertex(tops))
        key = encode(t)
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out


def pitchfork_groups(t):
    """Leaf sets of the top vertices of a pitchfork, in canonical order."""
    return [tuple(leaves(c)) for c in children(t)]


def graft(host, position, scion):
    """Graft the scion's root into the host at a leaf position.

    position is the leaf number being replaced. Leaves are renumbered
    deterministically afterwards: host leaves keep relative order, with the
    scion's block inserted at the grafted position. Edge colors must agree.
    """
    host_leaves = sorted(leaves(host))
    if position not in host_leaves:
        raise ValueError(f"no leaf numbered {position}")
    scion_leaves = sorted(leaves(scion))

    col = _leaf_color(host, position)
    if col != node_color(scion):
        raise StructureError(
            f"color clash grafting {node_color(scion)!r} into {col!r} edge"
        )

    # build on disjoint labels, then renumber
    offset = max(host_leaves + scion_leaves) + 1
    scion_shift = relabel_leaves(scion, {i: i + offset for i in scion_leaves})

    def replace(t):
        if is_leaf(t):
            return scion_shift if t[1] == position else t
        return ("v", t[1], t[2], tuple(replace(c) for c in children(t)))

    merged = replace(host)
    # renumber: host leaves < position, then scion block, then the rest
    order = []
    for i in host_leaves:
        if i == position:
            order.extend(j + offset for j in scion_leaves)
        else:
            order.append(i)
    mapping = {old: k + 1 for k, old in enumerate(order)}
    return canonical(relabel_leaves(merged, mapping))


def _leaf_color(t, number):
    if is_leaf(t):
        return t[2] if t[1] == number else None
    for c in children(t):
        col = _leaf_color(c, number)
        if col is not None:
            return col
    return None


class StructureError(ValueError):
    pass
