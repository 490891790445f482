"""Finite ordered sets, maps, permutations, and orbit canonicalization.

Every construction in this package is built on top of three tiny values:

* ``FinSet`` -- a finite, totally ordered set of symbolic atoms,
* ``FinMap`` -- a function between two ``FinSet``s,
* ``Perm``   -- a permutation of ``{0, .., n-1}``.

Atoms are opaque strings and the order of a ``FinSet`` is the order in
which its atoms were listed.  All values are immutable.
"""
from __future__ import annotations

import itertools
from functools import cached_property


class FinSet:
    """A finite totally ordered set of distinct atoms."""

    def __init__(self, atoms):
        atoms = tuple(atoms)
        index = {a: i for i, a in enumerate(atoms)}
        if len(index) != len(atoms):
            raise ValueError("duplicate atoms: %r" % (atoms,))
        self.atoms = atoms
        self._index = index

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, atom):
        return atom in self._index

    def index(self, atom):
        try:
            return self._index[atom]
        except KeyError:
            raise ValueError("atom %r not in %r" % (atom, self)) from None

    def __eq__(self, other):
        return isinstance(other, FinSet) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        return "FinSet(%s)" % (",".join(self.atoms))


_ORD_CACHE: dict = {}


def ord_set(n: int) -> FinSet:
    """The standard ordinal ``(n] = {1, .., n}``, atoms named "1".."n"."""
    s = _ORD_CACHE.get(n)
    if s is None:
        s = FinSet(str(i + 1) for i in range(n))
        _ORD_CACHE[n] = s
    return s


class FinMap:
    """A function between finite ordered sets, stored pointwise.

    ``values[i]`` is the image of the i-th atom of ``dom``.  Injectivity
    and surjectivity are computed once and cached.
    """

    def __init__(self, dom: FinSet, cod: FinSet, values):
        values = tuple(values)
        if len(values) != len(dom):
            raise ValueError("expected %d values, got %d" % (len(dom), len(values)))
        self.dom = dom
        self.cod = cod
        self.values = values
        self._vidx = tuple(cod.index(v) for v in values)

    @property
    def value_indices(self):
        """Images as 0-based indices into the codomain."""
        return self._vidx

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self._vidx)) == len(self._vidx)

    @cached_property
    def is_surjective(self) -> bool:
        return len(set(self._vidx)) == len(self.cod)

    def __call__(self, atom):
        return self.values[self.dom.index(atom)]

    def apply_index(self, i: int) -> int:
        return self._vidx[i]

    def __eq__(self, other):
        return (isinstance(other, FinMap) and self.dom == other.dom
                and self.cod == other.cod and self.values == other.values)

    def __hash__(self):
        return hash((self.dom.atoms, self.cod.atoms, self.values))

    def __repr__(self):
        return "FinMap(%s -> %s; %s)" % (
            ",".join(self.dom.atoms), ",".join(self.cod.atoms), ",".join(self.values))


def identity_map(s: FinSet) -> FinMap:
    return FinMap(s, s, s.atoms)


def compose(f: FinMap, g: FinMap) -> FinMap:
    """Pointwise composite ``f . g`` (apply ``g`` first)."""
    if g.cod != f.dom:
        raise ValueError("cannot compose: cod(g)=%r != dom(f)=%r" % (g.cod, f.dom))
    return FinMap(g.dom, f.cod, tuple(f.values[i] for i in g.value_indices))


def epi_mono_factor(f: FinMap) -> tuple[FinMap, FinMap]:
    """Factor ``f = m . s`` with ``s`` surjective and ``m`` injective.

    The intermediate set consists of the image atoms of ``f`` ordered by
    the codomain's total order, so the factorization is canonical and
    does not depend on the order in which values occur.
    """
    image_idx = sorted(set(f.value_indices))
    mid = FinSet(f.cod.atoms[i] for i in image_idx)
    s = FinMap(f.dom, mid, f.values)
    m = FinMap(mid, f.cod, mid.atoms)
    return s, m


class Perm:
    """A permutation of ``{0, .., n-1}``, stored as the tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation: %r" % (images,))
        self.images = images

    @property
    def n(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def then(self, other: "Perm") -> "Perm":
        """The composite "self first, then other" (other . self)."""
        assert other.n == self.n
        return Perm(tuple(other.images[j] for j in self.images))

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(range(n))

    def is_identity(self) -> bool:
        return self.images == tuple(range(len(self.images)))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Perm%r" % (self.images,)


def all_perms(n: int):
    """All of S_n in lexicographic order of image tuples."""
    for images in itertools.permutations(range(n)):
        yield Perm(images)


def perm_as_map(p: Perm, s: FinSet | None = None) -> FinMap:
    """A permutation as a FinMap on ``s`` (default: the standard ordinal)."""
    if s is None:
        s = ord_set(p.n)
    return FinMap(s, s, tuple(s.atoms[p(i)] for i in range(p.n)))


def canonical_orbit_rep(x: FinMap, r, action, label_key) -> tuple[FinMap, object]:
    """Least representative of the orbit of ``(x, r)`` under S_n.

    Pairs are identified by ``<x . sigma, r> ~ <x, action(sigma, r)>`` where
    ``action`` is the left S_n-action on labels, so the orbit of ``(x, r)``
    is ``{(x . sigma, action(sigma^-1, r))}``.  The least pair orders first
    by the tuple of codomain indices of the variable map, then by
    ``label_key(label)``.  Idempotent by construction.
    """
    n = len(x.dom)
    if n <= 1:
        return x, r
    vidx = x.value_indices
    best = (vidx, label_key(r))
    best_pair = (x, r)
    for sigma in all_perms(n):
        if sigma.is_identity():
            continue
        cand_idx = tuple(vidx[sigma(i)] for i in range(n))
        if cand_idx > best[0]:
            continue
        cand_label = action(sigma.inverse(), r)
        key = (cand_idx, label_key(cand_label))
        if key < best:
            best = key
            xs = FinMap(x.dom, x.cod, tuple(x.values[sigma(i)] for i in range(n)))
            best_pair = (xs, cand_label)
    return best_pair


def enumerate_maps(dom: FinSet, cod: FinSet, kind: str = "all"):
    """All maps dom -> cod of the given kind, in lexicographic order.

    ``kind`` is one of "all", "injective", "surjective".
    """
    if kind not in ("all", "injective", "surjective"):
        raise ValueError("unknown kind %r" % kind)
    n, m = len(dom), len(cod)
    if n == 0:
        if kind != "surjective" or m == 0:
            yield FinMap(dom, cod, ())
        return
    if kind == "injective":
        if m < n:
            return
        for vidx in itertools.permutations(range(m), n):
            yield FinMap(dom, cod, tuple(cod.atoms[i] for i in vidx))
        return
    for vidx in itertools.product(range(m), repeat=n):
        if kind == "surjective" and len(set(vidx)) != m:
            continue
        yield FinMap(dom, cod, tuple(cod.atoms[i] for i in vidx))


def elementary_merge(n: int, i: int) -> FinMap:
    """The monotone surjection (n] -> (n-1] collapsing positions i and i+1.

    0-based: positions ``i`` and ``i+1`` of the domain both map to
    position ``i`` of the codomain.
    """
    if not (0 <= i < n - 1):
        raise ValueError("merge index %d out of range for n=%d" % (i, n))
    cod = ord_set(n - 1)
    values = tuple(cod.atoms[j if j <= i else j - 1] for j in range(n))
    return FinMap(ord_set(n), cod, values)


def surjection_generators(s: FinMap) -> tuple[Perm, list[int]]:
    """Decompose a surjection into a permutation and elementary merges.

    Returns ``(perm, merges)`` with ``s = m_last . ... . m_0 . perm`` where
    ``m_t = elementary_merge(n - t, merges[t])``.  An action functorial in
    surjections is therefore computed by acting with ``perm`` first and
    then with each merge in list order (the arity shrinks by one per
    merge).
    """
    n = len(s.dom)
    if not s.is_surjective:
        raise ValueError("not surjective: %r" % (s,))
    vidx = s.value_indices
    order = sorted(range(n), key=lambda j: (vidx[j], j))
    perm = Perm(order).inverse()  # s . order is monotone, so s = mono . perm
    vals = [vidx[j] for j in order]
    merges = []
    while len(vals) > len(s.cod):
        for i in range(len(vals) - 1):
            if vals[i] == vals[i + 1]:
                merges.append(i)
                vals = vals[:i] + vals[i + 1:]
                break
    return perm, merges
