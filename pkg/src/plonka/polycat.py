"""Categories of regular and linear polynomials over an algebra.

Objects are the elements of a finite algebra; a morphism is a canonical
triple (variables, position, label): it points from the variable at the
marked position to the value of the whole term.  Composition splices the
inner term into the marked slot of the outer one, normalizing through
the epi-mono factorization in the regular case (linear polynomials need
no normalization).
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from .emalg import AlgebraHom, EMAlgebra, em_functor
from .fincore import FinSet, Perm
from .monadkit import TermClass, _perm_pairs
from .operad import TruncationError
from .report import CheckRecord, Report


class PolyMorphism(NamedTuple):
    n: int
    vidx: tuple
    pos: int
    label: str

    def encode(self) -> str:
        return "%d|%s|%d|%s" % (self.n, ",".join(str(i + 1) for i in self.vidx),
                                self.pos + 1, self.label)


def parse_poly(s: str) -> PolyMorphism:
    n_s, vars_s, pos_s, label = s.split("|", 3)
    vidx = tuple(int(p) - 1 for p in vars_s.split(",")) if vars_s else ()
    return PolyMorphism(int(n_s), vidx, int(pos_s) - 1, label)


class PolyCategory:
    """The category of (regular|linear) polynomials over a finite algebra."""

    def __init__(self, base: EMAlgebra):
        self.base = base
        self.monad = base.monad
        self.op = base.monad.op
        self.kind = "regular" if base.monad.mode == "regular" else "linear"
        self._morphisms = None

    @property
    def objects(self):
        return self.base.carrier.atoms

    def __repr__(self):
        return "<CP_%s(%s), %d objects>" % (self.kind[0], self.base.name, len(self.objects))

    # -- canonical forms ----------------------------------------------

    def canon(self, n: int, vidx: tuple, pos: int, label: str) -> PolyMorphism:
        """Least representative of the triple orbit; the position moves
        contravariantly with the permutation."""
        if n <= 1:
            return PolyMorphism(n, vidx, pos, label)
        monad = self.monad
        best = None
        best_key = None
        order = sorted(range(n), key=lambda i: vidx[i])
        sorted_vidx = tuple(vidx[i] for i in order)
        for sigma, sigma_inv in itertools.chain([(Perm(tuple(range(n))),
                                                  Perm(tuple(range(n))))],
                                                _perm_pairs(n)):
            images = sigma.images
            cand = tuple(vidx[images[i]] for i in range(n))
            if cand != sorted_vidx:
                continue
            cand_label = label if sigma.is_identity() else monad._act(sigma_inv, n, label)
            cand_pos = sigma_inv(pos)
            key = (monad.label_key(n, cand_label), cand_pos)
            if best_key is None or key < best_key:
                best_key = key
                best = PolyMorphism(n, cand, cand_pos, cand_label)
        return best

    # -- structure -----------------------------------------------------

    def source(self, m: PolyMorphism):
        return self.base.carrier.atoms[m.vidx[m.pos]]

    def target(self, m: PolyMorphism):
        return self.base.apply(self.monad.canon(m.n, m.vidx, m.label))

    def identity(self, atom) -> PolyMorphism:
        i = self.base.carrier.index(atom)
        return PolyMorphism(1, (i,), 0, self.op.unit)

    def compose(self, g: PolyMorphism, f: PolyMorphism) -> PolyMorphism:
        """The splice composite ``g . f`` (f first)."""
        if self.target(f) != self.source(g):
            raise ValueError("cannot compose: target(%s) != source(%s)"
                             % (f.encode(), g.encode()))
        n, m = f.n, g.n
        j = g.pos
        spliced = g.vidx[:j] + f.vidx + g.vidx[j + 1:]
        inners = ["%s" % self.op.unit] * m
        arities = [1] * m
        inners[j] = f.label
        arities[j] = n
        label = self.op.subst(g.label, tuple(inners), tuple(arities))
        pos = f.pos + j
        if self.kind == "regular" and len(set(spliced)) != len(spliced):
            image = sorted(set(spliced))
            rank = {v: t for t, v in enumerate(image)}
            from .fincore import FinMap, ord_set
            mid = ord_set(len(image))
            s = FinMap(ord_set(len(spliced)), mid,
                       tuple(mid.atoms[rank[v]] for v in spliced))
            label = self.op.surjection_action(s, label)
            pos = rank[spliced[pos]]
            spliced = tuple(image)
        if len(spliced) > self.monad.n_max and self.kind == "regular":
            raise TruncationError("composite arity %d exceeds cap" % len(spliced))
        if self.kind == "linear" and len(spliced) > self.op.max_arity:
            raise TruncationError("composite arity %d exceeds operad cap" % len(spliced))
        return self.canon(len(spliced), tuple(spliced), pos, label)

    def morphisms(self) -> tuple[PolyMorphism, ...]:
        """Every canonical morphism within the caps, exactly once."""
        if self._morphisms is not None:
            return self._morphisms
        size = len(self.base.carrier)
        top = self.monad.n_max
        if self.kind == "regular":
            top = min(top, size)
        seen = set()
        out = []
        for n in range(1, top + 1):
            labels = self.op.labels(n)
            if not labels:
                continue
            if self.kind == "regular":
                tuples = itertools.combinations(range(size), n)
            else:
                tuples = itertools.combinations_with_replacement(range(size), n)
            for vidx in tuples:
                for label in labels:
                    for pos in range(n):
                        p = self.canon(n, vidx, pos, label)
                        if p not in seen:
                            seen.add(p)
                            out.append(p)
        out.sort(key=lambda p: (p.n, p.vidx, self.monad.label_key(p.n, p.label), p.pos))
        self._morphisms = tuple(out)
        return self._morphisms

    def hom(self, a, b) -> list[PolyMorphism]:
        return [m for m in self.morphisms()
                if self.source(m) == a and self.target(m) == b]


def check_category(cat: PolyCategory) -> Report:
    """Identity and associativity laws over all enumerable instances."""
    rep = Report("check_category", {"base": cat.base.name, "kind": cat.kind})
    ident = CheckRecord("identity_laws", True)
    assoc = CheckRecord("associativity", True)
    endpoint = CheckRecord("endpoints", True)
    morphisms = cat.morphisms()
    for m in morphisms:
        endpoint.checked += 1
        src, tgt = cat.source(m), cat.target(m)
        ident.checked += 2
        if cat.compose(m, cat.identity(src)) != m:
            ident.passed = False
            ident.witnesses.append("m . id != m at %s" % m.encode())
        if cat.compose(cat.identity(tgt), m) != m:
            ident.passed = False
            ident.witnesses.append("id . m != m at %s" % m.encode())
    by_source = {}
    for m in morphisms:
        by_source.setdefault(cat.source(m), []).append(m)
    for f in morphisms:
        for g in by_source.get(cat.target(f), ()):
            try:
                gf = cat.compose(g, f)
            except TruncationError:
                assoc.out_of_fragment += 1
                continue
            for h in by_source.get(cat.target(g), ()):
                assoc.checked += 1
                try:
                    lhs = cat.compose(h, gf)
                    rhs = cat.compose(cat.compose(h, g), f)
                except TruncationError:
                    assoc.out_of_fragment += 1
                    continue
                if lhs != rhs:
                    assoc.passed = False
                    assoc.witnesses.append(
                        "assoc fails at %s ; %s ; %s" % (f.encode(), g.encode(), h.encode()))
    rep.add(ident)
    rep.add(assoc)
    rep.add(endpoint)
    return rep


# ---------------------------------------------------------------------------
# functors out of polynomial categories
# ---------------------------------------------------------------------------

def transport_morphism(hom: AlgebraHom, target_cat: PolyCategory,
                       m: PolyMorphism) -> PolyMorphism:
    """Image of a polynomial morphism under an algebra homomorphism.

    Regular kind factors the mapped variable tuple and pushes the label
    through the surjection action; linear kind just post-composes.
    """
    h = hom.mapping
    mapped = tuple(h.cod.index(h.values[i]) for i in m.vidx)
    label, pos = m.label, m.pos
    if target_cat.kind == "regular" and len(set(mapped)) != len(mapped):
        image = sorted(set(mapped))
        rank = {v: t for t, v in enumerate(image)}
        from .fincore import FinMap, ord_set
        mid = ord_set(len(image))
        s = FinMap(ord_set(len(mapped)), mid, tuple(mid.atoms[rank[v]] for v in mapped))
        label = target_cat.op.surjection_action(s, label)
        pos = rank[mapped[pos]]
        mapped = tuple(image)
    return target_cat.canon(len(mapped), mapped, pos, label)


def poly_functor_on_hom(hom: AlgebraHom) -> "PolyFunctor":
    """The functor between polynomial categories induced by a homomorphism."""
    src_cat = PolyCategory(hom.source)
    tgt_cat = PolyCategory(hom.target)
    return PolyFunctor(src_cat, tgt_cat,
                       object_map=lambda a: hom(a),
                       morphism_map=lambda m: transport_morphism(hom, tgt_cat, m),
                       name="CP(%s)" % hom.name)


def gamma(tau, b: EMAlgebra) -> "PolyFunctor":
    """The comparison functor relabelling polynomials along a
    coefficient-induced monad morphism: identity on objects, labels
    mapped by the per-arity coefficient maps."""
    if not tau.is_label_induced:
        raise ValueError("gamma needs a coefficient-induced morphism, got %s" % tau.name)
    src_cat = PolyCategory(em_functor(tau, b))
    tgt_cat = PolyCategory(b)

    def morphism_map(m):
        return tgt_cat.canon(m.n, m.vidx, m.pos, tau.label_map(m.n, m.label))

    return PolyFunctor(src_cat, tgt_cat, object_map=lambda a: a,
                       morphism_map=morphism_map, name="gamma(%s)" % tau.name)


class PolyFunctor:
    """A functor between polynomial categories, validated exhaustively."""

    def __init__(self, source: PolyCategory, target: PolyCategory,
                 object_map, morphism_map, name="functor"):
        self.source = source
        self.target = target
        self.object_map = object_map
        self.morphism_map = morphism_map
        self.name = name

    def validate(self) -> Report:
        rep = Report("validate_poly_functor", {"functor": self.name})
        rec = CheckRecord("functor_laws", True)
        cat, tgt = self.source, self.target
        for a in cat.objects:
            rec.checked += 1
            if self.morphism_map(cat.identity(a)) != tgt.identity(self.object_map(a)):
                rec.passed = False
                rec.witnesses.append("identity at %r not preserved" % a)
        morphisms = cat.morphisms()
        for m in morphisms:
            rec.checked += 1
            image = self.morphism_map(m)
            if (tgt.source(image) != self.object_map(cat.source(m))
                    or tgt.target(image) != self.object_map(cat.target(m))):
                rec.passed = False
                rec.witnesses.append("endpoints of %s not preserved" % m.encode())
        by_source = {}
        for m in morphisms:
            by_source.setdefault(cat.source(m), []).append(m)
        for f in morphisms:
            for g in by_source.get(cat.target(f), ()):
                rec.checked += 1
                try:
                    lhs = self.morphism_map(cat.compose(g, f))
                    rhs = tgt.compose(self.morphism_map(g), self.morphism_map(f))
                except TruncationError:
                    rec.out_of_fragment += 1
                    continue
                if lhs != rhs:
                    rec.passed = False
                    rec.witnesses.append(
                        "composition not preserved at %s ; %s" % (f.encode(), g.encode()))
        rep.add(rec)
        return rep


# ---------------------------------------------------------------------------
# functor data into a category of algebras
# ---------------------------------------------------------------------------

class FunctorData:
    """A finite functor from a polynomial category into algebras.

    ``algebras`` assigns an algebra to every object; ``hom_map`` assigns
    a carrier FinMap to every canonical morphism.  Validation checks that
    every assigned map is a homomorphism with the right endpoints and
    that identities and all composites are preserved.
    """

    def __init__(self, cat: PolyCategory, algebras: dict, hom_map: dict,
                 name: str = "F"):
        self.cat = cat
        self.algebras = dict(algebras)
        self.hom_map = dict(hom_map)
        self.name = name

    def algebra(self, obj) -> EMAlgebra:
        return self.algebras[obj]

    def fiber(self, obj) -> FinSet:
        return self.algebras[obj].carrier

    def transition(self, m: PolyMorphism):
        try:
            return self.hom_map[m]
        except KeyError:
            raise ValueError("functor %s lacks an image for %s" % (self.name, m.encode())) from None

    def validate(self) -> Report:
        rep = Report("validate_functor_data", {"functor": self.name})
        rec = CheckRecord("functor_laws", True)
        cat = self.cat
        for a in cat.objects:
            if a not in self.algebras:
                rec.passed = False
                rec.witnesses.append("no algebra assigned to object %r" % a)
        if not rec.passed:
            rep.add(rec)
            return rep
        for a in cat.objects:
            rec.checked += 1
            f = self.transition(cat.identity(a))
            if f.values != self.fiber(a).atoms:
                rec.passed = False
                rec.witnesses.append("identity at %r not the identity map" % a)
        morphisms = cat.morphisms()
        for m in morphisms:
            rec.checked += 1
            f = self.transition(m)
            src, tgt = cat.source(m), cat.target(m)
            if f.dom != self.fiber(src) or f.cod != self.fiber(tgt):
                rec.passed = False
                rec.witnesses.append("endpoints of %s not matched" % m.encode())
                continue
            hom = AlgebraHom(self.algebras[src], self.algebras[tgt], f)
            if not hom.validate():
                rec.passed = False
                rec.witnesses.append("image of %s is not a homomorphism" % m.encode())
        by_source = {}
        for m in morphisms:
            by_source.setdefault(cat.source(m), []).append(m)
        from .fincore import compose as fcompose
        for f in morphisms:
            for g in by_source.get(cat.target(f), ()):
                rec.checked += 1
                try:
                    gf = cat.compose(g, f)
                except TruncationError:
                    rec.out_of_fragment += 1
                    continue
                if fcompose(self.transition(g), self.transition(f)) != self.transition(gf):
                    rec.passed = False
                    rec.witnesses.append(
                        "composition not preserved at %s ; %s" % (f.encode(), g.encode()))
        rep.add(rec)
        return rep


def constant_functor(cat: PolyCategory, value: EMAlgebra, name=None) -> FunctorData:
    """The constant functor: every object to one algebra, every morphism
    to its identity."""
    from .fincore import identity_map
    ident = identity_map(value.carrier)
    algebras = {a: value for a in cat.objects}
    hom_map = {m: ident for m in cat.morphisms()}
    return FunctorData(cat, algebras, hom_map, name or ("const_%s" % value.name))


def lift_from_poset(cat: PolyCategory, algebras: dict, transitions: dict,
                    name: str = "F") -> FunctorData:
    """Functor data from a monotone family of transition maps.

    ``transitions`` holds a carrier FinMap for each needed pair
    (source object, target object); pairs with equal endpoints default
    to the identity.  This is the classical input shape: the functor
    factors through the posetal collapse.
    """
    from .fincore import identity_map
    hom_map = {}
    for m in cat.morphisms():
        a, b = cat.source(m), cat.target(m)
        if (a, b) in transitions:
            hom_map[m] = transitions[(a, b)]
        elif a == b:
            hom_map[m] = identity_map(algebras[a].carrier)
        else:
            raise ValueError("no transition supplied for %r -> %r" % (a, b))
    return FunctorData(cat, algebras, hom_map, name)


# ---------------------------------------------------------------------------
# posetal collapse and DOT export
# ---------------------------------------------------------------------------

def posetal_collapse(cat: PolyCategory):
    """The reachability order: a <= b iff some morphism a -> b exists.

    Only meaningful over the terminal regular theories (sup-semilattices);
    other bases are rejected.
    """
    if cat.monad.name not in ("L", "Lprime"):
        raise ValueError("posetal collapse needs an L- or L'-algebra, got %s"
                         % cat.monad.name)
    relation = {(a, a) for a in cat.objects}
    for m in cat.morphisms():
        relation.add((cat.source(m), cat.target(m)))
    return sorted(relation)


def export_dot(cat: PolyCategory) -> str:
    """Graphviz rendering: objects as nodes, canonical triples on edges."""
    lines = ["digraph polycat {"]
    for a in cat.objects:
        lines.append('  "%s";' % a)
    for m in cat.morphisms():
        lines.append('  "%s" -> "%s" [label="%s"];'
                     % (cat.source(m), cat.target(m), m.encode()))
    lines.append("}")
    return "\n".join(lines) + "\n"
