"""Multilinear words in free shifted-Poisson algebras, in normal form.

Context: the operad of Poisson algebras with bracket of degree 1-N and
commutative product of degree 0, over letters with assigned degrees (degree 0
for operad components). A normal monomial is a product of Lie blocks; a block
is a left-normed bracket word [[..[x_a, x_b], ..], x_c] whose first letter is
the minimal letter of the block, encoded as the tuple (a, b, .., c). A
monomial is a tuple of blocks sorted by first letter. Multilinearity: every
letter appears exactly once per word.

Lie-block arithmetic runs inside the free associative algebra on letters
suspended by N-1: a block expands to its commutator polynomial, brackets are
shifted commutators with the decalage sign (-1)^((N-1)|u|), and coordinates
are read off the words that start with the minimal letter. The product and
the biderivation expansion move whole blocks with intrinsic Poisson degrees.
All sign conventions are certified by the antisymmetry/Jacobi/Leibniz tests.
"""

from fractions import Fraction

from polybrace.gradedlin import Element, ZERO


class WordContext:
    """Free Poisson-word calculus for one bracket shift and letter grading."""

    def __init__(self, bracket_shift_N, letter_degrees):
        self.N = bracket_shift_N
        self.letter_degrees = dict(letter_degrees)

    # -- degrees -------------------------------------------------------------

    def letter_degree(self, letter):
        return self.letter_degrees[letter]

    def sdeg(self, letter):
        """Suspended degree used inside the associative model."""
        return self.letter_degrees[letter] + self.N - 1

    def block_degree(self, block):
        return sum(self.letter_degrees[l] for l in block) + (len(block) - 1) * (
            1 - self.N
        )

    def block_sdegree(self, block):
        return sum(self.sdeg(l) for l in block)

    def mono_degree(self, mono):
        return sum(self.block_degree(b) for b in mono)

    def mono_brackets(self, mono):
        return sum(len(b) - 1 for b in mono)

    def mono_letters(self, mono):
        out = []
        for b in mono:
            out.extend(b)
        return out

    # -- associative model for Lie blocks -------------------------------------

    def _expand_block(self, block):
        """Left-normed word -> commutator polynomial {assoc word: coeff}."""
        poly = {(block[0],): Fraction(1)}
        deg = self.sdeg(block[0])
        for letter in block[1:]:
            dl = self.sdeg(letter)
            new = {}
            for word, c in poly.items():
                w1 = word + (letter,)
                new[w1] = new.get(w1, ZERO) + c
                w2 = (letter,) + word
                sign = -1 if (deg * dl) % 2 else 1
                new[w2] = new.get(w2, ZERO) - c * sign
            poly = {w: c for w, c in new.items() if c}
            deg += dl
        return poly

    def _extract_block(self, poly, letters):
        """Coordinates of a Lie-subspace element in the left-normed basis."""
        if not poly:
            return {}
        mn = min(letters)
        out = {}
        for word, c in poly.items():
            if word[0] == mn and c:
                out[word] = c
        return out

    def _commutator(self, p1, d1, p2, d2):
        sign = -1 if (d1 * d2) % 2 else 1
        out = {}
        for w1, c1 in p1.items():
            for w2, c2 in p2.items():
                w = w1 + w2
                out[w] = out.get(w, ZERO) + c1 * c2
                w = w2 + w1
                out[w] = out.get(w, ZERO) - sign * (c1 * c2)
        return {w: c for w, c in out.items() if c}

    def lie_bracket_blocks(self, b1, b2):
        """{b1, b2} as a combination of left-normed blocks.

        The suspended commutator needs no decalage factor here: a block and
        its hat differ in parity by exactly N-1, so the commutator's Koszul
        exponents already realize the shifted antisymmetry and Jacobi rules.
        """
        p1, p2 = self._expand_block(b1), self._expand_block(b2)
        d1, d2 = self.block_sdegree(b1), self.block_sdegree(b2)
        comm = self._commutator(p1, d1, p2, d2)
        return self._extract_block(comm, b1 + b2)

    # -- monomial-level operations --------------------------------------------

    def sort_blocks(self, blocks):
        """Sort blocks by first letter; Koszul sign from intrinsic degrees."""
        idx = sorted(range(len(blocks)), key=lambda i: blocks[i][0])
        sign = 1
        degs = [self.block_degree(b) for b in blocks]
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if idx[i] > idx[j] and degs[idx[i]] % 2 and degs[idx[j]] % 2:
                    sign = -sign
        return tuple(blocks[i] for i in idx), sign

    def product_monos(self, m1, m2):
        blocks = list(m1) + list(m2)
        seen = set()
        for b in blocks:
            for l in b:
                if l in seen:
                    raise ValueError(f"letter {l} repeated in product")
                seen.add(l)
        mono, sign = self.sort_blocks(blocks)
        return Element.basis(mono, sign)

    def product(self, e1, e2):
        acc = Element.zero()
        for m1, c1 in e1.items():
            for m2, c2 in e2.items():
                acc = acc + self.product_monos(m1, m2) * (c1 * c2)
        return acc

    def bracket(self, e1, e2):
        acc = Element.zero()
        for m1, c1 in e1.items():
            for m2, c2 in e2.items():
                acc = acc + self._bracket_monos(m1, m2) * (c1 * c2)
        return acc

    def _bracket_monos(self, m1, m2):
        return self._bracket_rec(list(m1), list(m2))

    def _bracket_rec(self, bs1, bs2):
        """Biderivation recursion; s = N - 1 plays the role of the shift."""
        s = self.N - 1
        if not bs1 or not bs2:
            return Element.zero()
        if len(bs1) > 1:
            # [p.P', Q] = p.[P', Q] + (-1)^(|P'|(|Q|+s)) [p, Q].P'
            p, rest = bs1[0], bs1[1:]
            drest = sum(self.block_degree(b) for b in rest)
            dq = sum(self.block_degree(b) for b in bs2)
            t1 = self.product(
                Element.basis((p,)), self._bracket_rec(rest, bs2)
            )
            sign = -1 if (drest * (dq + s)) % 2 else 1
            t2 = self.product(
                self._bracket_rec([p], bs2),
                Element.basis(tuple(rest)) if rest else Element.basis(()),
            )
            return t1 + t2 * sign
        if len(bs2) > 1:
            # [p, q.Q'] = [p, q].Q' + (-1)^((|p|+s)|q|) q.[p, Q']
            p = bs1[0]
            q, rest = bs2[0], bs2[1:]
            t1 = self.product(
                self._bracket_rec([p], [q]), Element.basis(tuple(rest))
            )
            sign = -1 if ((self.block_degree(p) + s) * self.block_degree(q)) % 2 else 1
            t2 = self.product(
                Element.basis((q,)), self._bracket_rec([p], rest)
            )
            return t1 + t2 * sign
        coords = self.lie_bracket_blocks(bs1[0], bs2[0])
        return Element({(blk,): c for blk, c in coords.items()})

    def generator(self, letter):
        return Element.basis(((letter,),))

    def one(self):
        return Element.basis(())

    # -- substitution and relabeling ------------------------------------------

    def relabel(self, e, mapping, target_ctx=None):
        """Rename letters. Blocks are re-extracted through the associative
        model, so reordering signs come out automatically."""
        tgt = target_ctx or self
        acc = Element.zero()
        for mono, c in e.items():
            term = tgt.one()
            for block in mono:
                poly = self._expand_block(block)
                renamed = {
                    tuple(mapping[l] for l in w): cc for w, cc in poly.items()
                }
                coords = tgt._extract_block(
                    renamed, tuple(mapping[l] for l in block)
                )
                term = tgt.product(
                    term, Element({(blk,): cc for blk, cc in coords.items()})
                )
            acc = acc + term * c
        return acc

    def substitute(self, e, letter, repl, target_ctx=None):
        """Plug the element repl into one letter slot, multilinearly.

        Letters of repl must be disjoint from the remaining letters of e.
        The result lives in target_ctx (default: self, whose letter table
        must cover the union).
        """
        tgt = target_ctx or self
        acc = Element.zero()
        for mono, c in e.items():
            acc = acc + tgt_eval_mono(self, tgt, mono, letter, repl) * c
        return acc

    def monomials(self, letters):
        """All normal monomials on the letter set (deterministic order)."""
        import itertools as _it

        letters = sorted(letters)
        out = []

        def partitions(items):
            if not items:
                yield []
                return
            first, rest = items[0], items[1:]
            for r in range(len(rest) + 1):
                for combo in _it.combinations(rest, r):
                    block_set = (first,) + combo
                    remaining = [x for x in rest if x not in combo]
                    for tail in partitions(remaining):
                        yield [block_set] + tail

        for part in partitions(letters):
            word_choices = []
            for blk in part:
                mn, rest = blk[0], blk[1:]
                word_choices.append(
                    [(mn,) + perm for perm in _it.permutations(rest)]
                )
            for words in _it.product(*word_choices):
                mono, _ = self.sort_blocks(list(words))
                out.append(mono)
        out.sort()
        return out


def tgt_eval_mono(ctx, tgt, mono, letter, repl):
    """Evaluate one monomial with `letter` replaced by `repl`."""
    factors = []
    for block in mono:
        if letter in block:
            factors.append(_eval_block(ctx, tgt, block, letter, repl))
        else:
            factors.append(Element.basis((block,)))
    acc = tgt.one()
    for f in factors:
        acc = tgt.product(acc, f)
    return acc


def _eval_block(ctx, tgt, block, letter, repl):
    """Substitute into a left-normed block by re-bracketing in the target."""
    acc = None
    for i, l in enumerate(block):
        piece = repl if l == letter else tgt.generator(l)
        acc = piece if acc is None else tgt.bracket(acc, piece)
    return acc
