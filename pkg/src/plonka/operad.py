"""Operad presentations: coefficient label sets with actions and substitution.

An operad here is presented by per-arity ordered label sets together with
a left symmetric-group action, (in regular mode) an action of elementary
merge surjections, a unit label in arity 1, and a substitution operation.
Built-in theories are generated lazily from closed forms; user theories
are explicit tables loaded from JSON and validated exhaustively.

Labels are plain strings.  A label's arity always travels alongside it in
signatures, since nothing forces names to be unique across arities.
"""
from __future__ import annotations

import itertools

from .fincore import FinMap, Perm, all_perms, surjection_generators

BUILTIN_NAMES = ("L", "Lprime", "C", "Cprime", "ASSOC", "MAGMA", "MAYBE", "ID")


class TruncationError(Exception):
    """An operation fell outside the arity caps (not an invalid input)."""


class Operad:
    """Base class; concrete operads fill in labels, actions and subst."""

    mode = "regular"  # or "symmetric"
    name = "?"

    def __init__(self, max_arity: int):
        if max_arity < 1:
            raise ValueError("max_arity must be >= 1")
        self.max_arity = max_arity

    # -- presentation ------------------------------------------------

    def labels(self, n: int) -> tuple[str, ...]:
        raise NotImplementedError

    def label_index(self, n: int, r: str) -> int:
        try:
            return self.labels(n).index(r)
        except ValueError:
            raise ValueError("label %r not in arity %d of %s" % (r, n, self.name)) from None

    @property
    def unit(self) -> str:
        raise NotImplementedError

    # -- actions -----------------------------------------------------

    def perm_action(self, sigma: Perm, r: str) -> str:
        """Left action of S_n on arity-n labels, n = sigma.n."""
        raise NotImplementedError

    def merge_action(self, n: int, i: int, r: str) -> str:
        """Action of the elementary merge (n] -> (n-1] collapsing i, i+1."""
        raise NotImplementedError

    def surjection_action(self, s: FinMap, r: str) -> str:
        """Functorial action of a surjection between ordinals on labels."""
        n = len(s.dom)
        if n > self.max_arity:
            raise TruncationError("arity %d exceeds cap %d" % (n, self.max_arity))
        if not s.is_surjective:
            raise ValueError("surjection_action needs a surjective map")
        if self.mode == "symmetric" and not s.is_injective:
            raise ValueError("symmetric operads act by bijections only")
        perm, merges = surjection_generators(s)
        if not perm.is_identity():
            r = self.perm_action(perm, r)
        arity = n
        for i in merges:
            r = self.merge_action(arity, i, r)
            arity -= 1
        return r

    # -- substitution --------------------------------------------------

    def subst(self, outer: str, inners, arities) -> str:
        """Substitute ``inners[i]`` (of arity ``arities[i]``) into slot i.

        The result has arity ``sum(arities)``; exceeding the cap raises
        ``TruncationError``.
        """
        raise NotImplementedError

    def check_total(self, total: int):
        if total > self.max_arity:
            raise TruncationError(
                "substitution arity %d exceeds cap %d of %s" % (total, self.max_arity, self.name))

    def __repr__(self):
        return "<%s operad %s, cap %d>" % (self.mode, self.name, self.max_arity)


class TerminalOperad(Operad):
    """The L/L'/C/C' family: one label mu_n per arity, trivial actions.

    ``with_bottom`` decides whether arity 0 is inhabited; the mode decides
    whether this presents the sup-semilattice or commutative-monoid side.
    """

    trivial_perm_action = True
    uniform_labels = True

    def __init__(self, name, mode, with_bottom, max_arity):
        super().__init__(max_arity)
        self.name = name
        self.mode = mode
        self.with_bottom = with_bottom

    def labels(self, n):
        if n > self.max_arity or n < 0:
            return ()
        if n == 0 and not self.with_bottom:
            return ()
        return ("mu%d" % n,)

    @property
    def unit(self):
        return "mu1"

    def perm_action(self, sigma, r):
        return r

    def merge_action(self, n, i, r):
        assert r == "mu%d" % n
        return "mu%d" % (n - 1)

    def surjection_action(self, s, r):
        if self.mode == "symmetric" and not s.is_injective:
            raise ValueError("symmetric operads act by bijections only")
        return "mu%d" % len(s.cod)

    def subst(self, outer, inners, arities):
        total = sum(arities)
        self.check_total(total)
        if not self.with_bottom and total == 0:
            raise ValueError("%s has no arity-0 label" % self.name)
        return "mu%d" % total


def _parse_word(r: str) -> tuple[int, ...]:
    assert r[0] == "e"
    return tuple(int(c) for c in r[1:])


def _format_word(seq) -> str:
    return "e" + "".join(str(i) for i in seq)


class AssocOperad(Operad):
    """Symmetric operad for monoids: arity-n labels are orderings of (n].

    The label ``e<d1..dn>`` stands for the word x_{d1} x_{d2} .. x_{dn};
    the empty word ``e`` is the monoid unit in arity 0.
    """

    mode = "symmetric"
    name = "ASSOC"

    def labels(self, n):
        if n > self.max_arity or n < 0:
            return ()
        if n == 0:
            return ("e",)
        return tuple(_format_word(p) for p in itertools.permutations(range(1, n + 1)))

    @property
    def unit(self):
        return "e1"

    def perm_action(self, sigma, r):
        word = _parse_word(r)
        assert sigma.n == len(word)
        return _format_word(sigma(d - 1) + 1 for d in word)

    def subst(self, outer, inners, arities):
        total = sum(arities)
        self.check_total(total)
        offsets = [0]
        for a in arities:
            offsets.append(offsets[-1] + a)
        out = []
        for slot in _parse_word(outer):
            i = slot - 1
            out.extend(offsets[i] + d for d in _parse_word(inners[i]))
        return _format_word(out)


def _parse_tree(r: str):
    """Parse "(l*r)" / digit syntax into nested (left, right) tuples."""
    pos = 0

    def node():
        nonlocal pos
        if r[pos] == "(":
            pos += 1
            left = node()
            assert r[pos] == "*"
            pos += 1
            right = node()
            assert r[pos] == ")"
            pos += 1
            return (left, right)
        start = pos
        while pos < len(r) and r[pos].isdigit():
            pos += 1
        return int(r[start:pos])

    t = node()
    assert pos == len(r)
    return t


def _format_tree(t) -> str:
    if isinstance(t, int):
        return str(t)
    return "(%s*%s)" % (_format_tree(t[0]), _format_tree(t[1]))


def _tree_leaves(t):
    if isinstance(t, int):
        return [t]
    return _tree_leaves(t[0]) + _tree_leaves(t[1])


def _tree_map(t, f):
    if isinstance(t, int):
        return f(t)
    return (_tree_map(t[0], f), _tree_map(t[1], f))


def _tree_shapes(n):
    """All planar binary tree shapes with n leaves (leaves numbered 1..n
    in planar order)."""
    if n == 1:
        return [1]
    out = []
    for k in range(1, n):
        for left in _tree_shapes(k):
            shifted = [_tree_map(right, lambda d: d + k) for right in _tree_shapes(n - k)]
            out.extend((left, r) for r in shifted)
    return out


class MagmaOperad(Operad):
    """Symmetric operad of the free magma: leaf-labelled binary trees.

    A label is a planar binary tree whose n leaves carry a bijective
    labelling by (n]; leaf p labelled d stands for the variable x_d.
    Substitution is grafting.
    """

    mode = "symmetric"
    name = "MAGMA"

    def __init__(self, max_arity):
        super().__init__(max_arity)
        self._label_cache = {}

    def labels(self, n):
        if n > self.max_arity or n < 1:
            return ()
        if n not in self._label_cache:
            out = []
            for shape in _tree_shapes(n):
                for sigma in itertools.permutations(range(1, n + 1)):
                    out.append(_format_tree(_tree_map(shape, lambda d: sigma[d - 1])))
            self._label_cache[n] = tuple(out)
        return self._label_cache[n]

    @property
    def unit(self):
        return "1"

    def perm_action(self, sigma, r):
        return _format_tree(_tree_map(_parse_tree(r), lambda d: sigma(d - 1) + 1))

    def subst(self, outer, inners, arities):
        total = sum(arities)
        self.check_total(total)
        offsets = [0]
        for a in arities:
            offsets.append(offsets[-1] + a)
        grafts = [_tree_map(_parse_tree(u), lambda d, i=i: d + offsets[i])
                  for i, u in enumerate(inners)]

        def replace(t):
            if isinstance(t, int):
                return grafts[t - 1]
            return (replace(t[0]), replace(t[1]))

        return _format_tree(replace(_parse_tree(outer)))


class MaybeOperad(Operad):
    """Regular operad of pointed sets: one constant, no real operations."""

    mode = "regular"
    name = "MAYBE"
    trivial_perm_action = True

    def labels(self, n):
        if n == 0:
            return ("star",)
        if n == 1:
            return ("iota",)
        return ()

    @property
    def unit(self):
        return "iota"

    def perm_action(self, sigma, r):
        return r

    def merge_action(self, n, i, r):
        raise ValueError("MAYBE has no labels of arity >= 2")

    def subst(self, outer, inners, arities):
        self.check_total(sum(arities))
        if outer == "star":
            return "star"
        return inners[0]


class IdOperad(Operad):
    """The identity monad's operad: only the unit."""

    mode = "regular"
    name = "ID"
    trivial_perm_action = True

    def labels(self, n):
        return ("iota",) if n == 1 else ()

    @property
    def unit(self):
        return "iota"

    def perm_action(self, sigma, r):
        return r

    def merge_action(self, n, i, r):
        raise ValueError("ID has no labels of arity >= 2")

    def subst(self, outer, inners, arities):
        self.check_total(sum(arities))
        return inners[0]


def builtin(name: str, max_arity: int) -> Operad:
    """Construct a built-in theory by name."""
    if name == "L":
        return TerminalOperad("L", "regular", True, max_arity)
    if name == "Lprime":
        return TerminalOperad("Lprime", "regular", False, max_arity)
    if name == "C":
        return TerminalOperad("C", "symmetric", True, max_arity)
    if name == "Cprime":
        return TerminalOperad("Cprime", "symmetric", False, max_arity)
    if name == "ASSOC":
        return AssocOperad(max_arity)
    if name == "MAGMA":
        return MagmaOperad(max_arity)
    if name == "MAYBE":
        return MaybeOperad(max_arity)
    if name == "ID":
        return IdOperad(max_arity)
    raise ValueError("unknown builtin operad %r (expected one of %s)"
                     % (name, ", ".join(BUILTIN_NAMES)))


class TableOperad(Operad):
    """An operad presented by explicit finite tables.

    Actions are generated from adjacent transpositions (and, in regular
    mode, elementary merges); substitution is a total table within the
    cap.  Nothing is assumed about the tables until ``validate_operad``
    has gone through them.
    """

    def __init__(self, name, mode, max_arity, coeff, unit,
                 perm_table, merge_table, subst_table):
        super().__init__(max_arity)
        self.name = name
        self.mode = mode
        self.coeff = {int(n): tuple(ls) for n, ls in coeff.items()}
        self._unit = unit
        self.perm_table = perm_table    # {(n, i): {label: label}}, swap of i, i+1
        self.merge_table = merge_table  # {(n, i): {label: label}}, merge of i, i+1
        self.subst_table = subst_table  # {(outer, ((n1, l1), ...)): label}

    def labels(self, n):
        return self.coeff.get(n, ())

    @property
    def unit(self):
        return self._unit

    def _transposition(self, n, i, r):
        try:
            return self.perm_table[(n, i)][r]
        except KeyError:
            raise ValueError("missing perm action entry (n=%d, i=%d, %r)" % (n, i, r)) from None

    def perm_action(self, sigma, r):
        n = sigma.n
        images = list(sigma.images)
        # peel adjacent transpositions: sigma = t_{s_m} . .. . t_{s_1},
        # and the left action applies R(t_{s_1}) first
        while True:
            for i in range(n - 1):
                if images[i] > images[i + 1]:
                    images[i], images[i + 1] = images[i + 1], images[i]
                    r = self._transposition(n, i, r)
                    break
            else:
                return r

    def merge_action(self, n, i, r):
        try:
            return self.merge_table[(n, i)][r]
        except KeyError:
            raise ValueError("missing merge action entry (n=%d, i=%d, %r)" % (n, i, r)) from None

    def subst(self, outer, inners, arities):
        total = sum(arities)
        self.check_total(total)
        key = (outer, tuple(zip(arities, inners)))
        try:
            return self.subst_table[key]
        except KeyError:
            raise ValueError("missing substitution entry %r" % (key,)) from None


def as_table(op: Operad, max_arity: int | None = None) -> TableOperad:
    """Materialize any operad as an explicit table up to ``max_arity``."""
    cap = op.max_arity if max_arity is None else max_arity
    coeff = {n: op.labels(n) for n in range(cap + 1) if op.labels(n)}
    perm_table = {}
    merge_table = {}
    for n, ls in coeff.items():
        for i in range(n - 1):
            images = list(range(n))
            images[i], images[i + 1] = images[i + 1], images[i]
            sw = Perm(images)
            perm_table[(n, i)] = {r: op.perm_action(sw, r) for r in ls}
            if op.mode == "regular":
                merge_table[(n, i)] = {r: op.merge_action(n, i, r) for r in ls}
    subst_table = {}
    for outer_arity, shape in _subst_shapes(coeff, cap):
        for outer in coeff.get(outer_arity, ()):
            for inners in itertools.product(*(coeff[n] for n in shape)):
                subst_table[(outer, tuple(zip(shape, inners)))] = \
                    op.subst(outer, inners, shape)
    return TableOperad(op.name, op.mode, cap, coeff, op.unit,
                       perm_table, merge_table, subst_table)


def _subst_shapes(coeff, cap):
    """All (outer_arity, inner_arity_vector) with total inner arity <= cap."""
    arities = sorted(coeff)
    out = []
    for k in arities:
        if not coeff.get(k):
            continue
        for shape in itertools.product(arities, repeat=k):
            if sum(shape) <= cap:
                out.append((k, shape))
    return out


def block_perm(sigma: Perm, arities) -> Perm:
    """The permutation of (sum arities] moving reordered blocks back home.

    Block t of the layout (arities[sigma(0)], arities[sigma(1)], ..) is
    sent identically onto block sigma(t) of the layout ``arities``.
    """
    offsets = [0]
    for a in arities:
        offsets.append(offsets[-1] + a)
    images = [0] * offsets[-1]
    pos = 0
    for t in range(sigma.n):
        i = sigma(t)
        for u in range(arities[i]):
            images[pos] = offsets[i] + u
            pos += 1
    return Perm(images)


def block_sum(perms) -> Perm:
    """Blockwise direct sum of permutations."""
    images = []
    offset = 0
    for p in perms:
        images.extend(offset + j for j in p.images)
        offset += p.n
    return Perm(images)


def validate_operad(op: Operad, cap: int | None = None) -> list[str]:
    """Exhaustively check the operad laws up to ``cap``; return violations.

    Checks unit laws, substitution associativity, equivariance of
    substitution under the symmetric-group actions, and functoriality of
    the (regular-mode) surjection action.  Every violated instance is
    reported as one message.
    """
    cap = min(op.max_arity, cap if cap is not None else op.max_arity)
    bad = []
    coeff = {n: op.labels(n) for n in range(cap + 1) if op.labels(n)}
    unit = op.unit

    for n, ls in coeff.items():
        for r in ls:
            try:
                got = op.subst(r, (unit,) * n, (1,) * n)
                if got != r:
                    bad.append("unit law: %r * (unit,..) = %r" % (r, got))
                got = op.subst(unit, (r,), (n,))
                if got != r:
                    bad.append("unit law: unit * (%r) = %r" % (r, got))
            except ValueError as exc:
                bad.append("table error in unit laws: %s" % exc)

    subst_memo = {}

    def subst(outer, inners, arities):
        key = (outer, inners, arities)
        out = subst_memo.get(key)
        if out is None:
            out = op.subst(outer, inners, arities)
            subst_memo[key] = out
        return out


    # orbit representatives per arity; with equivariance checked
    # exhaustively below, associativity only needs one outer per orbit
    orbit_reps = {}
    for n, ls in coeff.items():
        reps = []
        seen = set()
        for r in ls:
            if r in seen:
                continue
            orbit = {op.perm_action(sigma, r) for sigma in all_perms(n)}
            seen.update(orbit)
            reps.append(r)
        orbit_reps[n] = tuple(reps)

    shapes_by_arity = {
        n: [sh for sh in itertools.product(sorted(coeff), repeat=n) if sum(sh) <= cap]
        for n in coeff}

    for k, shape in _subst_shapes(coeff, cap):
      try:
        for outer in coeff.get(k, ()):
            for mids in itertools.product(*(coeff[n] for n in shape)):
                ab = subst(outer, mids, shape)
                # equivariance in the outer and inner slots
                for sigma in all_perms(k):
                    if sigma.is_identity():
                        continue
                    sa = op.perm_action(sigma, outer)
                    lhs = subst(sa, mids, shape)
                    permuted = tuple(mids[sigma(t)] for t in range(k))
                    pshape = tuple(shape[sigma(t)] for t in range(k))
                    rhs = op.perm_action(block_perm(sigma, shape),
                                         subst(outer, permuted, pshape))
                    if lhs != rhs:
                        bad.append("outer equivariance: sigma=%r outer=%r inners=%r: %r != %r"
                                   % (sigma.images, outer, mids, lhs, rhs))
                        break
                for t, nt in enumerate(shape):
                    hit = False
                    for tau in all_perms(nt):
                        if tau.is_identity():
                            continue
                        acted = list(mids)
                        acted[t] = op.perm_action(tau, mids[t])
                        lhs = subst(outer, tuple(acted), shape)
                        summands = [Perm.identity(nn) for nn in shape]
                        summands[t] = tau
                        rhs = op.perm_action(block_sum(summands), ab)
                        if lhs != rhs:
                            bad.append("inner equivariance: slot %d tau=%r outer=%r: %r != %r"
                                       % (t, tau.images, outer, lhs, rhs))
                            hit = True
                            break
                    if hit:
                        break
        # associativity, outer restricted to orbit representatives
        for outer in orbit_reps.get(k, ()):
            for mids in itertools.product(*(coeff[n] for n in shape)):
                ab = subst(outer, mids, shape)
                for bot_shape in itertools.product(*(shapes_by_arity[n] for n in shape)):
                    flat_shape = tuple(itertools.chain.from_iterable(bot_shape))
                    if sum(flat_shape) > cap:
                        continue
                    for bots in itertools.product(
                            *(itertools.product(*(coeff[n] for n in sh)) for sh in bot_shape)):
                        flat = tuple(itertools.chain.from_iterable(bots))
                        lhs = subst(ab, flat, flat_shape)
                        mids2 = tuple(subst(mids[t], bots[t], bot_shape[t])
                                      for t in range(k))
                        rhs = subst(outer, mids2, tuple(sum(sh) for sh in bot_shape))
                        if lhs != rhs:
                            bad.append("associativity: outer=%r mids=%r bots=%r: %r != %r"
                                       % (outer, mids, bots, lhs, rhs))
      except ValueError as exc:
        bad.append("table error at outer arity %d, shape %r: %s" % (k, shape, exc))

    # functoriality of actions on label sets
    from .fincore import enumerate_maps, ord_set, compose as fcompose
    for n in sorted(coeff):
        if n == 0 or not coeff[n]:
            continue
        for m in range(1, n + 1):
            if op.mode == "symmetric" and m != n:
                continue
            for s in enumerate_maps(ord_set(n), ord_set(m), "surjective"):
                for j in range(1, m + 1):
                    if op.mode == "symmetric" and j != m:
                        continue
                    for s2 in enumerate_maps(ord_set(m), ord_set(j), "surjective"):
                        st = fcompose(s2, s)
                        for r in coeff[n]:
                            try:
                                lhs = op.surjection_action(st, r)
                                rhs = op.surjection_action(s2, op.surjection_action(s, r))
                            except ValueError as exc:
                                bad.append("table error in action functoriality: %s" % exc)
                                continue
                            if lhs != rhs:
                                bad.append("action functoriality: s=%r s2=%r r=%r: %r != %r"
                                           % (s.values, s2.values, r, lhs, rhs))
    return bad
