"""Eilenberg-Moore algebras over truncated monads.

An algebra is a carrier with a total structure table over the truncated
term set.  The EM laws are checked exhaustively on the in-cap fragment;
algebras whose theory needs arities beyond the cap are out of scope and
rejected with a truncation error when built from operation tables.
"""
from __future__ import annotations

import itertools

from .fincore import FinMap, FinSet
from .monadkit import TermClass, TruncatedMonad
from .operad import TruncationError
from .report import CheckRecord, Report


class EMAlgebra:
    """A finite algebra: carrier plus structure map on eval(monad, carrier).

    ``structure`` maps each canonical term encoding to a carrier atom.
    """

    def __init__(self, monad: TruncatedMonad, carrier: FinSet, structure: dict,
                 name: str = "algebra"):
        self.monad = monad
        self.carrier = carrier
        self.structure = dict(structure)
        self.name = name
        missing = [t.encode() for t in monad.elements(carrier)
                   if t.encode() not in self.structure]
        if missing:
            raise ValueError("structure table incomplete on %s: missing %d entries (%s, ..)"
                             % (name, len(missing), missing[0]))
        for enc, v in self.structure.items():
            if v not in carrier:
                raise ValueError("structure value %r not in carrier of %s" % (v, name))

    def apply(self, t: TermClass):
        return self.structure[t.encode()]

    def structure_map(self) -> FinMap:
        src = self.monad.carrier(self.carrier)
        return FinMap(src, self.carrier, tuple(self.structure[a] for a in src.atoms))

    def __eq__(self, other):
        return (isinstance(other, EMAlgebra) and self.monad is other.monad
                and self.carrier == other.carrier and self.structure == other.structure)

    def __repr__(self):
        return "<EMAlgebra %s over %s, |A|=%d>" % (self.name, self.monad.name, len(self.carrier))


def algebra_from_operations(monad: TruncatedMonad, carrier: FinSet, interpret,
                            name: str = "algebra") -> EMAlgebra:
    """Build the structure table from an operation interpreter.

    ``interpret(label, args)`` evaluates an operad label of arity
    ``len(args)`` on carrier atoms.  Terms are evaluated by applying the
    label to the variable atoms.
    """
    structure = {}
    for t in monad.elements(carrier):
        args = tuple(carrier.atoms[i] for i in t.vidx)
        structure[t.encode()] = interpret(t.label, args)
    return EMAlgebra(monad, carrier, structure, name)


def check_algebra(alg: EMAlgebra, budget: int | None = None) -> Report:
    """Both EM laws, exhaustively within the caps."""
    monad = alg.monad
    if budget is None:
        budget = monad.n_max
    rep = Report("check_algebra", {"algebra": alg.name, "monad": monad.name})
    unit_rec = CheckRecord("algebra_unit_law", True)
    mult_rec = CheckRecord("algebra_mult_law", True)
    A = alg.carrier
    for a in A.atoms:
        unit_rec.checked += 1
        if alg.apply(monad.unit(A, a)) != a:
            unit_rec.passed = False
            unit_rec.witnesses.append("structure(eta(%s)) != %s" % (a, a))
    elems = monad.elements(A)
    encs = [t.encode() for t in elems]
    layer = FinSet(encs)
    decode = dict(zip(encs, elems))
    # T(structure) realized on variable indices so partial tables only
    # shrink the checked fragment
    struct_idx = [A.index(alg.structure[e]) if e in alg.structure else None
                  for e in encs]
    for t2, _w in monad.fragment_over(
            [(e, monad.weight(t)) for e, t in zip(encs, elems)], budget):
        mult_rec.checked += 1
        idxs = [struct_idx[i] for i in t2.vidx]
        if any(i is None for i in idxs):
            mult_rec.out_of_fragment += 1
            continue
        try:
            lhs = alg.apply(monad.mult(A, layer, t2, decode))
            rhs = alg.apply(monad.normalize(tuple(idxs), t2.label))
        except TruncationError:
            mult_rec.out_of_fragment += 1
            continue
        if lhs != rhs:
            mult_rec.passed = False
            mult_rec.witnesses.append(
                "structure.mu != structure.T(structure) at %s" % t2.encode())
    rep.add(unit_rec)
    rep.add(mult_rec)
    return rep


def free_algebra(monad: TruncatedMonad, X: FinSet, name: str | None = None) -> EMAlgebra:
    """The free algebra on X: carrier eval(T, X), structure the truncated
    multiplication (partial beyond caps; out-of-cap entries are absent and
    the fragment is reported by check_algebra)."""
    elems = monad.elements(X)
    carrier = monad.carrier(X)
    encs = carrier.atoms
    decode = {e: t for e, t in zip(encs, elems)}
    structure = {}
    truncated = 0
    for t2 in monad.elements(carrier):
        try:
            structure[t2.encode()] = monad.mult(X, carrier, t2, decode).encode()
        except TruncationError:
            truncated += 1
            continue
    alg = _PartialFreeAlgebra(monad, carrier, structure,
                              name or ("free_%s(%s)" % (monad.name, ",".join(X.atoms))))
    alg.truncated_entries = truncated
    return alg


class _PartialFreeAlgebra(EMAlgebra):
    """Free algebra whose structure may be partial due to truncation."""

    def __init__(self, monad, carrier, structure, name):
        self.monad = monad
        self.carrier = carrier
        self.structure = dict(structure)
        self.name = name
        self.truncated_entries = 0

    def apply(self, t: TermClass):
        enc = t.encode()
        if enc not in self.structure:
            raise TruncationError("free-algebra structure undefined at %s" % enc)
        return self.structure[enc]

    def structure_map(self) -> FinMap:
        if self.truncated_entries:
            raise TruncationError(
                "%s has %d out-of-cap structure entries" % (self.name, self.truncated_entries))
        return super().structure_map()


def em_functor(tau, b: EMAlgebra, name: str | None = None) -> EMAlgebra:
    """The algebra over tau's source induced by an algebra over its target:
    same carrier, structure precomposed with tau."""
    source = tau.source
    A = b.carrier
    structure = {}
    for t in source.elements(A):
        structure[t.encode()] = b.apply(tau.apply(A, t))
    return EMAlgebra(source, A, structure,
                     name or ("EM(%s)(%s)" % (tau.name, b.name)))


def product_atom(a: str, b: str) -> str:
    return "(%s|%s)" % (a, b)


def product_algebra(a: EMAlgebra, b: EMAlgebra, name: str | None = None) -> EMAlgebra:
    """Binary product: carrier the cartesian product, structure computed
    componentwise through the projections."""
    if a.monad is not b.monad and a.monad.name != b.monad.name:
        raise ValueError("product of algebras over different monads")
    monad = a.monad
    atoms = [product_atom(x, y) for x in a.carrier.atoms for y in b.carrier.atoms]
    carrier = FinSet(atoms)
    p1 = FinMap(carrier, a.carrier,
                tuple(x for x in a.carrier.atoms for _ in b.carrier.atoms))
    p2 = FinMap(carrier, b.carrier,
                tuple(y for _ in a.carrier.atoms for y in b.carrier.atoms))
    structure = {}
    for t in monad.elements(carrier):
        va = a.apply(monad.fmap(p1, t))
        vb = b.apply(monad.fmap(p2, t))
        structure[t.encode()] = product_atom(va, vb)
    return EMAlgebra(monad, carrier, structure,
                     name or ("%s x %s" % (a.name, b.name)))


class AlgebraHom:
    """A carrier map intended to be a homomorphism; ``validate`` checks it."""

    def __init__(self, source: EMAlgebra, target: EMAlgebra, mapping: FinMap,
                 name: str = "hom"):
        assert mapping.dom == source.carrier and mapping.cod == target.carrier
        self.source = source
        self.target = target
        self.mapping = mapping
        self.name = name

    def __call__(self, atom):
        return self.mapping(atom)

    def validate(self) -> bool:
        monad = self.source.monad
        for t in monad.elements(self.source.carrier):
            if self.mapping(self.source.apply(t)) != self.target.apply(
                    monad.fmap(self.mapping, t)):
                return False
        return True

    def then(self, other: "AlgebraHom") -> "AlgebraHom":
        from .fincore import compose
        assert self.target.carrier == other.source.carrier
        return AlgebraHom(self.source, other.target,
                          compose(other.mapping, self.mapping),
                          "%s;%s" % (self.name, other.name))

    @staticmethod
    def identity(alg: EMAlgebra) -> "AlgebraHom":
        from .fincore import identity_map
        return AlgebraHom(alg, alg, identity_map(alg.carrier), "id")


def all_homs(a: EMAlgebra, b: EMAlgebra):
    """Brute-force enumeration of homomorphisms a -> b."""
    from .fincore import enumerate_maps
    out = []
    for f in enumerate_maps(a.carrier, b.carrier):
        h = AlgebraHom(a, b, f)
        if h.validate():
            out.append(h)
    return out


def are_isomorphic(a: EMAlgebra, b: EMAlgebra):
    """Backtracking search for an isomorphism; returns a FinMap or None."""
    if len(a.carrier) != len(b.carrier):
        return None
    monad = a.monad
    terms_a = monad.elements(a.carrier)
    n = len(a.carrier)
    b_atoms = b.carrier.atoms

    def extend(partial):
        if len(partial) == n:
            f = FinMap(a.carrier, b.carrier, tuple(partial[x] for x in a.carrier.atoms))
            if AlgebraHom(a, b, f).validate():
                return f
            return None
        x = a.carrier.atoms[len(partial)]
        used = set(partial.values())
        for y in b_atoms:
            if y in used:
                continue
            partial[x] = y
            if _consistent(a, b, monad, terms_a, partial):
                found = extend(partial)
                if found is not None:
                    return found
            del partial[x]
        return None

    return extend({})


def _consistent(a, b, monad, terms_a, partial):
    """Reject a partial bijection when a fully-mapped instance mismatches."""
    for t in terms_a:
        atoms = [a.carrier.atoms[i] for i in t.vidx]
        if any(x not in partial for x in atoms):
            continue
        va = a.apply(t)
        if va not in partial:
            continue
        image = monad.canon(t.n, tuple(b.carrier.index(partial[x]) for x in atoms), t.label)
        if b.apply(image) != partial[va]:
            return False
    return True
