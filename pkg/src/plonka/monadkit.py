"""Truncated monads generated by operad presentations.

A ``TruncatedMonad`` evaluates the (semi-)analytic monad of an operad
presentation on finite sets up to an arity cap: elements are canonical
orbit representatives ``TermClass(n, vars, label)``.  In regular mode the
variable map of every element is injective and functorial images merge
repeated variables through the operad's surjection action; in analytic
mode variable maps are arbitrary and nothing is merged.

The module also provides monad-law checking over the in-cap fragment,
monad morphisms given by per-arity component tables (extended to all
finite sets by naturality), the regular-part coreflection, and the
semi-cartesian / weakly-cartesian classifiers.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from .fincore import FinMap, FinSet, Perm, all_perms, enumerate_maps, ord_set
from .operad import Operad, TruncationError, builtin
from .report import CheckRecord, Report


_PERM_CACHE: dict = {}


def _perm_pairs(n: int):
    """(sigma, sigma^-1) pairs for all non-identity sigma in S_n, cached."""
    pairs = _PERM_CACHE.get(n)
    if pairs is None:
        pairs = tuple((p, p.inverse()) for p in all_perms(n) if not p.is_identity())
        _PERM_CACHE[n] = pairs
    return pairs


class TermClass(NamedTuple):
    """Canonical orbit representative of an element of T(X).

    ``vidx`` holds 0-based indices into the atom order of the underlying
    finite set; the set itself travels alongside in all operations.
    """
    n: int
    vidx: tuple
    label: str

    def encode(self) -> str:
        return "%d|%s|%s" % (self.n, ",".join(str(i + 1) for i in self.vidx), self.label)


def parse_term(s: str) -> TermClass:
    n_s, vars_s, label = s.split("|", 2)
    vidx = tuple(int(p) - 1 for p in vars_s.split(",")) if vars_s else ()
    t = TermClass(int(n_s), vidx, label)
    assert t.n == len(t.vidx)
    return t


class TruncatedMonad:
    """Arity-capped evaluation of the monad generated by an operad."""

    def __init__(self, op: Operad, n_max: int = 4):
        if op.max_arity < 2 * n_max - 1:
            raise ValueError(
                "operad cap %d too small for n_max=%d (need >= %d)"
                % (op.max_arity, n_max, 2 * n_max - 1))
        self.op = op
        self.n_max = n_max
        self.mode = "regular" if op.mode == "regular" else "analytic"
        self.subst_cap = op.max_arity
        self._eval_cache = {}
        self._carrier_cache = {}
        self._action_cache = {}
        self._label_keys = {}
        self._subst_cache = {}
        self._merge_cache = {}

    @property
    def name(self):
        return self.op.name

    def __repr__(self):
        return "<%s monad %s, n_max %d>" % (self.mode, self.name, self.n_max)

    # -- labels and canonical forms -----------------------------------

    def label_key(self, n: int, label: str) -> int:
        keys = self._label_keys.get(n)
        if keys is None:
            keys = {r: i for i, r in enumerate(self.op.labels(n))}
            self._label_keys[n] = keys
        return keys[label]

    def encode(self, t: TermClass) -> str:
        return t.encode()

    def _act(self, sigma: Perm, n: int, label: str) -> str:
        key = (n, sigma.images, label)
        out = self._action_cache.get(key)
        if out is None:
            out = self.op.perm_action(sigma, label)
            self._action_cache[key] = out
        return out

    def sort_key(self, t: TermClass):
        return (t.n, t.vidx, self.label_key(t.n, t.label))

    def canon(self, n: int, vidx: tuple, label: str) -> TermClass:
        """Least representative of the S_n-orbit of ``(vidx, label)``.

        The minimal variable tuple in the orbit is the sorted one, and
        the permutations achieving it are the sorting permutation times
        the stabilizer of the sorted tuple, so only those are tried for
        the label tie-break.
        """
        if n <= 1:
            return TermClass(n, vidx, label)
        order = sorted(range(n), key=lambda i: vidx[i])
        sorted_vidx = tuple(vidx[i] for i in order)
        # group output slots by value; slots within a group are filled by
        # the positions of that value in any order
        groups = []
        start = 0
        for j in range(1, n + 1):
            if j == n or sorted_vidx[j] != sorted_vidx[start]:
                groups.append([order[t] for t in range(start, j)])
                start = j
        if getattr(self.op, "trivial_perm_action", False):
            return TermClass(n, sorted_vidx, label)
        if all(len(g) == 1 for g in groups):
            if sorted_vidx == vidx:
                return TermClass(n, vidx, label)
            sigma = Perm(order)
            return TermClass(n, sorted_vidx, self._act(sigma.inverse(), n, label))
        best_label = None
        best_key = None
        for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
            images = tuple(itertools.chain.from_iterable(combo))
            if images == tuple(range(n)) and sorted_vidx == vidx:
                cand = label
            else:
                cand = self._act(Perm(images).inverse(), n, label)
            key = self.label_key(n, cand)
            if best_key is None or key < best_key:
                best_key = key
                best_label = cand
        return TermClass(n, sorted_vidx, best_label)

    def _normalize(self, vidx: tuple, label: str) -> TermClass:
        """Canonical element from a raw variable tuple and label.

        In regular mode repeated variables are merged: the tuple is
        epi-mono factored (image ordered by the base set's order) and the
        label is pushed through the operad's surjection action.
        """
        n = len(vidx)
        if self.mode == "regular" and len(set(vidx)) != n:
            image = sorted(set(vidx))
            m = len(image)
            if getattr(self.op, "uniform_labels", False):
                label = "mu%d" % m
            else:
                rank = {v: j for j, v in enumerate(image)}
                key = (tuple(rank[v] for v in vidx), label)
                cached = self._merge_cache.get(key)
                if cached is None:
                    mid = ord_set(m)
                    s = FinMap(ord_set(n), mid, tuple(mid.atoms[j] for j in key[0]))
                    cached = self.op.surjection_action(s, label)
                    self._merge_cache[key] = cached
                label = cached
            vidx = tuple(image)
            n = m
        if n > self.n_max:
            raise TruncationError("arity %d exceeds monad cap %d" % (n, self.n_max))
        return self.canon(n, vidx, label)

    def normalize(self, vidx: tuple, label: str) -> TermClass:
        """Public entry to canonicalization with regular-mode merging."""
        return self._normalize(vidx, label)

    # -- the monad data ------------------------------------------------

    def elements(self, X: FinSet) -> tuple[TermClass, ...]:
        """All canonical elements of T(X) within the caps.

        A canonical element always has its variable tuple sorted, so only
        sorted tuples are generated (strictly increasing in regular mode).
        """
        cached = self._eval_cache.get(X.atoms)
        if cached is not None:
            return cached
        size = len(X)
        top = min(self.n_max, size) if self.mode == "regular" else self.n_max
        seen = set()
        out = []
        for n in range(top + 1):
            labels = self.op.labels(n)
            if not labels:
                continue
            if self.mode == "regular":
                tuples = itertools.combinations(range(size), n)
            else:
                tuples = itertools.combinations_with_replacement(range(size), n)
            for vidx in tuples:
                for label in labels:
                    t = self.canon(n, vidx, label)
                    if t not in seen:
                        seen.add(t)
                        out.append(t)
        out.sort(key=self.sort_key)
        result = tuple(out)
        self._eval_cache[X.atoms] = result
        return result

    def carrier(self, X: FinSet) -> FinSet:
        """T(X) as a finite set whose atoms are canonical encodings."""
        cached = self._carrier_cache.get(X.atoms)
        if cached is None:
            cached = FinSet(t.encode() for t in self.elements(X))
            self._carrier_cache[X.atoms] = cached
        return cached

    def unit(self, X: FinSet, atom) -> TermClass:
        return TermClass(1, (X.index(atom),), self.op.unit)

    def fmap(self, f: FinMap, t: TermClass) -> TermClass:
        vidx = tuple(f.value_indices[i] for i in t.vidx)
        return self._normalize(vidx, t.label)

    def weight(self, t: TermClass) -> int:
        """Fragment weight: leaf count, with nullary operations counting
        as leaves so that budgets bound instance size."""
        return max(t.n, 1)

    def vars_used(self, t: TermClass):
        return t.vidx

    def decode_layer(self, layer: FinSet) -> dict:
        return {a: parse_term(a) for a in layer.atoms}

    def mult(self, X: FinSet, layer: FinSet, outer: TermClass, decode=None) -> TermClass:
        """Flatten ``outer`` (an element over ``layer``, whose atoms stand
        for elements over ``X``) into an element over ``X``."""
        if decode is None:
            inners = [parse_term(layer.atoms[i]) for i in outer.vidx]
        else:
            inners = [decode[layer.atoms[i]] for i in outer.vidx]
        skey = (outer.label, tuple(t.label for t in inners), tuple(t.n for t in inners))
        label = self._subst_cache.get(skey)
        if label is None:
            label = self.op.subst(*skey)
            self._subst_cache[skey] = label
        vidx = tuple(itertools.chain.from_iterable(t.vidx for t in inners))
        return self._normalize(vidx, label)

    def induced_map(self, f: FinMap) -> FinMap:
        """T(f) as a map between the term carriers of dom and cod."""
        dom_c = self.carrier(f.dom)
        cod_c = self.carrier(f.cod)
        return FinMap(dom_c, cod_c,
                      tuple(self.fmap(f, t).encode() for t in self.elements(f.dom)))

    def fragment_over(self, pairs, budget: int):
        """Canonical elements over a weighted atom list, within a budget.

        ``pairs`` is a list of (atom, weight); the returned list holds
        ``(element over FinSet(atoms), total weight)`` for every canonical
        element whose summed variable weights stay within ``budget``.
        Only sorted variable tuples are generated, with the budget pruning
        the recursion.
        """
        weights = [w for _, w in pairs]
        size = len(pairs)
        strict = self.mode == "regular"
        seen = set()
        out = []
        for n in range(self.n_max + 1):
            labels = self.op.labels(n)
            if not labels:
                continue
            if strict and n > size:
                break
            for vidx, wt in _sorted_tuples(weights, n, budget, strict):
                for label in labels:
                    t = self.canon(n, vidx, label)
                    if t not in seen:
                        seen.add(t)
                        out.append((t, max(wt, 1)))
        out.sort(key=lambda pair: self.sort_key(pair[0]))
        return out


def _sorted_tuples(weights, k, budget, strict):
    """Sorted index k-tuples with weight sum <= budget.

    Strictly increasing when ``strict``; non-decreasing otherwise.  Atoms
    are scanned in weight order so the budget prunes whole subtrees; the
    resulting multisets are mapped back to index-sorted tuples.
    """
    size = len(weights)
    order = sorted(range(size), key=lambda i: (weights[i], i))
    w = [weights[i] for i in order]
    out = []
    chosen = []

    def rec(start, wsum, slots):
        if slots == 0:
            out.append((tuple(sorted(order[t] for t in chosen)), wsum))
            return
        for t in range(start, size):
            nw = wsum + w[t]
            # remaining slots must each take weight >= w[t]
            if nw + (slots - 1) * w[t] > budget:
                break
            chosen.append(t)
            rec(t + 1 if strict else t, nw, slots - 1)
            chosen.pop()

    rec(0, 0, k)
    return out


def make_monad(name: str, n_max: int = 4) -> TruncatedMonad:
    """A built-in theory as a truncated monad (operad cap chosen to fit)."""
    return TruncatedMonad(builtin(name, max(2 * n_max - 1, 1)), n_max)


def standard_set(size: int, prefix: str = "x") -> FinSet:
    return FinSet("%s%d" % (prefix, i + 1) for i in range(size))


# ---------------------------------------------------------------------------
# monad-law checking
# ---------------------------------------------------------------------------

def check_monad_laws(monad, size_cap: int = 3, assoc_size_cap: int = 3,
                     budget: int | None = None) -> Report:
    """Exhaustively check the monad laws on the in-cap fragment.

    Unit laws and naturality run on all sets of size <= size_cap;
    associativity runs on all depth-3 instances over sets of size
    <= assoc_size_cap whose flattened arity fits the budget (default: the
    monad's arity cap), so that both evaluation orders are defined.
    """
    if budget is None:
        budget = monad.n_max
    rep = Report("check_monad_laws",
                 {"monad": monad.name, "n_max": monad.n_max,
                  "size_cap": size_cap, "assoc_size_cap": assoc_size_cap})
    unit_rec = CheckRecord("unit_laws", True)
    nat_rec = CheckRecord("naturality", True)
    assoc_rec = CheckRecord("associativity", True)

    for size in range(size_cap + 1):
        X = standard_set(size)
        level1 = monad.elements(X)
        enc1 = [monad.encode(t) for t in level1]
        decode1 = dict(zip(enc1, level1))
        layer1 = FinSet(enc1)

        # left and right unit laws
        eta = [monad.unit(X, a) for a in X.atoms]
        eta_layer = FinSet(monad.encode(t) for t in eta)
        eta_map = FinMap(X, eta_layer, eta_layer.atoms)
        eta_decode = dict(zip(eta_layer.atoms, eta))
        for t in level1:
            single = FinSet([monad.encode(t)])
            left = monad.mult(X, single, monad.unit(single, single.atoms[0]),
                              {single.atoms[0]: t})
            ok_l = left == t
            right = monad.mult(X, eta_layer, monad.fmap(eta_map, t), eta_decode)
            ok_r = right == t
            unit_rec.checked += 2
            if not ok_l:
                unit_rec.passed = False
                unit_rec.witnesses.append("left unit at %s over %r" % (monad.encode(t), X.atoms))
            if not ok_r:
                unit_rec.passed = False
                unit_rec.witnesses.append("right unit at %s over %r" % (monad.encode(t), X.atoms))

        # naturality of eta and mu along all maps into sets of size <= size_cap
        lvl2 = monad.fragment_over([(e, monad.weight(t)) for e, t in zip(enc1, level1)],
                                   budget)
        mu_lvl2 = []
        for t2, _w in lvl2:
            try:
                mu_lvl2.append((t2, monad.mult(X, layer1, t2, decode1)))
            except TruncationError:
                mu_lvl2.append((t2, None))
        for tsize in range(size_cap + 1):
            Y = standard_set(tsize, "y")
            for f in enumerate_maps(X, Y, "all"):
                for a in X.atoms:
                    nat_rec.checked += 1
                    if monad.fmap(f, monad.unit(X, a)) != monad.unit(Y, f(a)):
                        nat_rec.passed = False
                        nat_rec.witnesses.append("eta naturality at %r along %r" % (a, f.values))
                tf_terms = [monad.fmap(f, t) for t in level1]
                tf_vals = [monad.encode(t) for t in tf_terms]
                tf_decode = dict(zip(tf_vals, tf_terms))
                tf_layer = FinSet(dict.fromkeys(tf_vals))
                tf = FinMap(layer1, tf_layer, tf_vals)
                for t2, mu_t2 in mu_lvl2:
                    nat_rec.checked += 1
                    if mu_t2 is None:
                        nat_rec.out_of_fragment += 1
                        continue
                    try:
                        rhs = monad.mult(Y, tf_layer, monad.fmap(tf, t2), tf_decode)
                    except TruncationError:
                        nat_rec.out_of_fragment += 1
                        continue
                    if monad.fmap(f, mu_t2) != rhs:
                        nat_rec.passed = False
                        nat_rec.witnesses.append(
                            "mu naturality at %s along %r" % (monad.encode(t2), f.values))

        # associativity over the in-budget depth-3 fragment
        if size <= assoc_size_cap:
            pairs2 = [(monad.encode(t2), w) for t2, w in lvl2]
            layer2 = FinSet(a for a, _ in pairs2)
            decode2 = {a: t2 for (a, _), (t2, _w) in zip(pairs2, lvl2)}
            lvl3 = monad.fragment_over(pairs2, budget)
            oof = "<out-of-fragment>"
            mu2 = {}
            tmu_vals = []
            for a in layer2.atoms:
                try:
                    v = monad.mult(X, layer1, decode2[a], decode1)
                except TruncationError:
                    v = None
                mu2[a] = v
                tmu_vals.append(monad.encode(v) if v is not None else oof)
            tmu_layer = FinSet(dict.fromkeys(tmu_vals))
            tmu_map = FinMap(layer2, tmu_layer, tmu_vals)
            tmu_decode = {monad.encode(v): v for v in mu2.values() if v is not None}
            subst_cap = getattr(monad, "subst_cap", None)
            arity2 = {a: getattr(decode2[a], "n", None) for a in layer2.atoms}
            for t3, _w in lvl3:
                assoc_rec.checked += 1
                used = list(monad.vars_used(t3))
                if any(mu2[layer2.atoms[i]] is None for i in used):
                    assoc_rec.out_of_fragment += 1
                    continue
                if subst_cap is not None and all(
                        arity2[layer2.atoms[i]] is not None for i in used):
                    if sum(arity2[layer2.atoms[i]] for i in used) > subst_cap:
                        assoc_rec.out_of_fragment += 1
                        continue
                try:
                    inner_first = monad.mult(X, tmu_layer, monad.fmap(tmu_map, t3), tmu_decode)
                    outer_first = monad.mult(X, layer1,
                                             monad.mult(layer1, layer2, t3, decode2), decode1)
                except TruncationError:
                    assoc_rec.out_of_fragment += 1
                    continue
                if inner_first != outer_first:
                    assoc_rec.passed = False
                    assoc_rec.witnesses.append(
                        "associativity at %s over %r" % (monad.encode(t3), X.atoms))

    rep.add(unit_rec)
    rep.add(nat_rec)
    rep.add(assoc_rec)
    return rep

# ---------------------------------------------------------------------------
# monad morphisms
# ---------------------------------------------------------------------------

def _vars_map(t: TermClass, X: FinSet) -> FinMap:
    return FinMap(ord_set(t.n), X, tuple(X.atoms[i] for i in t.vidx))


class MonadMorphism:
    """A lax morphism of monads given by per-arity component tables.

    ``components[n]`` maps the canonical encoding of each element of
    S((n]) to an element of T((n]); the component at an arbitrary finite
    set is derived by naturality.  Nothing is assumed until ``validate``
    has checked naturality and the unit/multiplication coherence on the
    in-cap fragment.
    """

    def __init__(self, source: TruncatedMonad, target: TruncatedMonad,
                 components, name: str = "morphism"):
        self.source = source
        self.target = target
        self.components = components
        self.name = name

    def __repr__(self):
        return "<MonadMorphism %s: %s -> %s>" % (self.name, self.source.name, self.target.name)

    def apply(self, X: FinSet, t: TermClass) -> TermClass:
        generic = self.source.canon(t.n, tuple(range(t.n)), t.label)
        try:
            image = self.components[t.n][generic.encode()]
        except KeyError:
            raise ValueError("%s has no component for %s" % (self.name, generic.encode())) from None
        return self.target.fmap(_vars_map(t, X), image)

    @staticmethod
    def from_term_function(source, target, fn, name="morphism"):
        """Tabulate components from a function on elements over (n]."""
        components = {}
        for n in range(source.n_max + 1):
            table = {}
            for t in source.elements(ord_set(n)):
                table[t.encode()] = fn(n, t)
            components[n] = table
        return MonadMorphism(source, target, components, name)

    @staticmethod
    def from_label_map(source, target, label_map, name="morphism"):
        """Morphism induced by an arity-preserving coefficient map."""
        def fn(n, t):
            return target.canon(t.n, t.vidx, label_map(t.n, t.label))
        return MonadMorphism.from_term_function(source, target, fn, name)

    @staticmethod
    def identity(monad, name=None):
        return MonadMorphism.from_term_function(
            monad, monad, lambda n, t: t, name or ("id_%s" % monad.name))

    def then(self, other: "MonadMorphism", name=None) -> "MonadMorphism":
        assert self.target is other.source or self.target.name == other.source.name
        return MonadMorphism.from_term_function(
            self.source, other.target,
            lambda n, t: other.apply(ord_set(n), self.apply(ord_set(n), t)),
            name or ("%s;%s" % (self.name, other.name)))

    @property
    def is_label_induced(self) -> bool:
        """True when every component preserves arity and variables."""
        for n, table in self.components.items():
            for enc, image in table.items():
                t = parse_term(enc)
                if image.n != t.n or image.vidx != t.vidx:
                    return False
        return True

    def label_map(self, n: int, label: str) -> str:
        """The coefficient map of a label-induced morphism.

        Uses the identity-variables representative, which is always its
        own canonical form, so the image label is read off directly.
        """
        t0 = TermClass(n, tuple(range(n)), label)
        image = self.components[n][t0.encode()]
        if image.n != n or image.vidx != t0.vidx:
            raise ValueError("%s is not label-induced at %r" % (self.name, label))
        return image.label

    def validate(self, size_cap: int = 3, budget: int | None = None) -> Report:
        """Check naturality and the monad-morphism laws exhaustively."""
        if budget is None:
            budget = min(self.source.n_max, self.target.n_max)
        rep = Report("validate_morphism", {"morphism": self.name, "size_cap": size_cap})
        nat = CheckRecord("naturality", True)
        unit = CheckRecord("unit_coherence", True)
        mult = CheckRecord("mult_coherence", True)
        S, T = self.source, self.target
        for size in range(size_cap + 1):
            X = standard_set(size)
            sx = S.elements(X)
            for a in X.atoms:
                unit.checked += 1
                if self.apply(X, S.unit(X, a)) != T.unit(X, a):
                    unit.passed = False
                    unit.witnesses.append("eta at %r" % a)
            for tsize in range(size_cap + 1):
                Y = standard_set(tsize, "y")
                for f in enumerate_maps(X, Y, "all"):
                    for t in sx:
                        nat.checked += 1
                        if self.apply(Y, S.fmap(f, t)) != T.fmap(f, self.apply(X, t)):
                            nat.passed = False
                            nat.witnesses.append(
                                "naturality at %s along %r" % (t.encode(), f.values))
            # mu coherence: tau . mu_S == mu_T . tau_T(X) . S(tau_X)
            enc1 = [t.encode() for t in sx]
            s_layer = FinSet(enc1)
            decode1 = dict(zip(enc1, sx))
            tau_terms = [self.apply(X, t) for t in sx]
            t_layer_vals = [t.encode() for t in tau_terms]
            t_layer = FinSet(dict.fromkeys(t_layer_vals))
            s_tau = FinMap(s_layer, t_layer, t_layer_vals)
            t_decode = dict(zip(t_layer_vals, tau_terms))
            for t2, _w in S.fragment_over(
                    [(e, S.weight(t)) for e, t in zip(enc1, sx)], budget):
                mult.checked += 1
                try:
                    lhs = self.apply(X, S.mult(X, s_layer, t2, decode1))
                    rhs = T.mult(X, t_layer, self.apply(t_layer, S.fmap(s_tau, t2)), t_decode)
                except TruncationError:
                    mult.out_of_fragment += 1
                    continue
                if lhs != rhs:
                    mult.passed = False
                    mult.witnesses.append("mu coherence at %s" % t2.encode())
        rep.add(nat)
        rep.add(unit)
        rep.add(mult)
        return rep


def terminal_morphism(monad: TruncatedMonad, target: TruncatedMonad | None = None,
                      name: str | None = None) -> MonadMorphism:
    """The canonical coefficient-induced map into the terminal theory.

    Regular-mode monads map into L (or L' when the source has no arity-0
    labels); analytic ones map into C (or C').
    """
    if target is None:
        has_bottom = bool(monad.op.labels(0))
        if monad.mode == "regular":
            tname = "L" if has_bottom else "Lprime"
        else:
            tname = "C" if has_bottom else "Cprime"
        target = make_monad(tname, monad.n_max)
    return MonadMorphism.from_label_map(
        monad, target, lambda n, r: "mu%d" % n,
        name or ("%s->%s" % (monad.name, target.name)))


# ---------------------------------------------------------------------------
# the regular-part coreflection
# ---------------------------------------------------------------------------

class RegularPartOperad(Operad):
    """Regular operad whose arity-n labels are the support-exactly-n
    elements of a monad evaluated on (n].

    For the operad-generated monads handled here an element has support
    exactly n precisely when its variable tuple hits all of (n]; that is
    the same as not being the functorial image along any proper
    injection.  Actions are the monad's functorial action, substitution
    is its multiplication.
    """

    mode = "regular"

    def __init__(self, monad: TruncatedMonad):
        super().__init__(monad.n_max)
        self.base = monad
        self.name = "reg(%s)" % monad.name
        self._labels = {}

    def labels(self, n):
        if n > self.max_arity or n < 0:
            return ()
        if n not in self._labels:
            full = range(n)
            self._labels[n] = tuple(
                t.encode() for t in self.base.elements(ord_set(n))
                if set(t.vidx) == set(full))
        return self._labels[n]

    @property
    def unit(self):
        return self.base.unit(ord_set(1), "1").encode()

    def _push(self, f: FinMap, r: str) -> str:
        return self.base.fmap(f, parse_term(r)).encode()

    def perm_action(self, sigma, r):
        n = sigma.n
        s = ord_set(n)
        return self._push(FinMap(s, s, tuple(s.atoms[sigma(i)] for i in range(n))), r)

    def merge_action(self, n, i, r):
        from .fincore import elementary_merge
        return self._push(elementary_merge(n, i), r)

    def subst(self, outer, inners, arities):
        total = sum(arities)
        self.check_total(total)
        whole = ord_set(total)
        offsets = [0]
        for a in arities:
            offsets.append(offsets[-1] + a)
        shifted = []
        for i, u in enumerate(inners):
            ut = parse_term(u)
            inc = FinMap(ord_set(arities[i]), whole,
                         tuple(whole.atoms[offsets[i] + j] for j in range(arities[i])))
            shifted.append(self.base.fmap(inc, ut))
        encs = [t.encode() for t in shifted]
        layer = FinSet(dict.fromkeys(encs))
        decode = {e: t for e, t in zip(encs, shifted)}
        ot = parse_term(outer)
        over_layer = TermClass(ot.n, tuple(layer.index(encs[i]) for i in ot.vidx), ot.label)
        return self.base.mult(whole, layer, over_layer, decode).encode()


def regular_part(monad: TruncatedMonad, n_max: int | None = None):
    """The regular (semi-analytic) part of a monad, with its counit.

    Returns ``(reg, counit)`` where ``reg`` is a regular-mode truncated
    monad with coefficient sets the support-exactly-n elements, and
    ``counit: reg -> monad`` is the coefficient-interpreting morphism.
    """
    if n_max is None:
        n_max = (monad.n_max + 1) // 2
    reg = TruncatedMonad(RegularPartOperad(monad), n_max)

    def fn(n, t):
        return monad.fmap(_vars_map(t, ord_set(n)), parse_term(t.label))

    counit = MonadMorphism.from_term_function(reg, monad, fn, "counit_reg(%s)" % monad.name)
    return reg, counit


# ---------------------------------------------------------------------------
# semi-cartesian / weakly cartesian classification
# ---------------------------------------------------------------------------

def _gap_analysis(tau: MonadMorphism, u: FinMap):
    """Gap map of the naturality square of tau at the injection u."""
    S, T = tau.source, tau.target
    X, Y = u.dom, u.cod
    pullback = set()
    for s2 in S.elements(Y):
        key = tau.apply(Y, s2)
        for t in T.elements(X):
            if T.fmap(u, t) == key:
                pullback.add((s2, t))
    gap = {}
    collision = None
    for s in S.elements(X):
        image = (S.fmap(u, s), tau.apply(X, s))
        if image in gap:
            collision = (gap[image], s, image)
        gap[image] = s
    missing = sorted(pullback - set(gap),
                     key=lambda p: (S.sort_key(p[0]), T.sort_key(p[1])))
    spurious = sorted(set(gap) - pullback,
                      key=lambda p: (S.sort_key(p[0]), T.sort_key(p[1])))
    return collision, missing, spurious


def _check_cartesian(tau: MonadMorphism, size_cap: int, weak: bool):
    checked = 0
    for b in range(size_cap + 1):
        Y = standard_set(b)
        for a in range(b + 1):
            X = standard_set(a)
            for u in enumerate_maps(X, Y, "injective"):
                checked += 1
                collision, missing, spurious = _gap_analysis(tau, u)
                if spurious:
                    s2, t = spurious[0]
                    return False, checked, (
                        "naturality fails at u=%r: (%s, %s) not in pullback"
                        % (u.values, s2.encode(), t.encode()))
                if missing:
                    s2, t = missing[0]
                    return False, checked, (
                        "gap not surjective at u=%r: fiber element (%s, %s) not hit"
                        % (u.values, s2.encode(), t.encode()))
                if not weak and collision is not None:
                    s_a, s_b, _ = collision
                    return False, checked, (
                        "gap not injective at u=%r: %s and %s collide"
                        % (u.values, s_a.encode(), s_b.encode()))
    return True, checked, None


def check_semicartesian(tau: MonadMorphism, size_cap: int = 3):
    """Verdict on whether tau's naturality squares at injections are
    pullbacks, with a witness on failure."""
    ok, checked, witness = _check_cartesian(tau, size_cap, weak=False)
    rec = CheckRecord("semicartesian(%s)" % tau.name, ok, checked,
                      witnesses=[witness] if witness else [])
    return ok, witness, rec


def check_weakly_cartesian(tau: MonadMorphism, size_cap: int = 3):
    """Verdict on whether tau's naturality squares at injections are weak
    pullbacks (gap maps surjective)."""
    ok, checked, witness = _check_cartesian(tau, size_cap, weak=True)
    rec = CheckRecord("weakly_cartesian(%s)" % tau.name, ok, checked,
                      witnesses=[witness] if witness else [])
    return ok, witness, rec
