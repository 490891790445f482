"""Standard algebras and monad morphisms used by the checks and the CLI.

Builders for finite semilattices, commutative monoids, monoids and
magmas over the built-in theories, brute-force enumeration of all such
structures on small carriers, and the catalog of monad morphisms the
classification and preservation checks exercise.
"""
from __future__ import annotations

import itertools

from .fincore import FinSet
from .monadkit import MonadMorphism, TruncatedMonad, make_monad
from .emalg import EMAlgebra, algebra_from_operations
from .operad import _format_tree, _parse_tree, _tree_leaves


def fold_table(table, args, empty=None):
    if not args:
        if empty is None:
            raise ValueError("nullary operation on a structure without a unit/bottom")
        return empty
    acc = args[0]
    for x in args[1:]:
        acc = table[(acc, x)]
    return acc


def semilattice_algebra(monad: TruncatedMonad, atoms, join_table, bottom=None,
                        name="semilattice") -> EMAlgebra:
    """An L- or L'-algebra from a binary join table (and bottom for L)."""
    carrier = atoms if isinstance(atoms, FinSet) else FinSet(atoms)

    def interpret(label, args):
        assert label.startswith("mu")
        return fold_table(join_table, args, bottom)

    return algebra_from_operations(monad, carrier, interpret, name)


def chain_algebra(monad: TruncatedMonad, size: int = 2, name=None) -> EMAlgebra:
    """The chain 0 < 1 < .. < size-1 with join = max (bottom 0 for L)."""
    atoms = FinSet(str(i) for i in range(size))
    table = {(a, b): str(max(int(a), int(b))) for a in atoms for b in atoms}
    bottom = "0" if monad.op.labels(0) else None
    return semilattice_algebra(monad, atoms, table, bottom,
                               name or ("%d-chain" % size))


def commutative_monoid_algebra(monad: TruncatedMonad, atoms, table, unit=None,
                               name="cmonoid") -> EMAlgebra:
    """A C- or C'-algebra from a commutative multiplication table."""
    carrier = atoms if isinstance(atoms, FinSet) else FinSet(atoms)

    def interpret(label, args):
        assert label.startswith("mu")
        return fold_table(table, args, unit)

    return algebra_from_operations(monad, carrier, interpret, name)


def monoid_algebra(monad: TruncatedMonad, atoms, table, unit=None,
                   name="monoid") -> EMAlgebra:
    """An ASSOC-algebra (monoid) from a multiplication table."""
    carrier = atoms if isinstance(atoms, FinSet) else FinSet(atoms)

    def interpret(label, args):
        word = [int(c) for c in label[1:]]
        return fold_table(table, [args[d - 1] for d in word], unit)

    return algebra_from_operations(monad, carrier, interpret, name)


def magma_algebra(monad: TruncatedMonad, atoms, table, name="magma") -> EMAlgebra:
    """A MAGMA-algebra from a (not necessarily associative) binary table."""
    carrier = atoms if isinstance(atoms, FinSet) else FinSet(atoms)

    def interpret(label, args):
        def ev(node):
            if isinstance(node, int):
                return args[node - 1]
            return table[(ev(node[0]), ev(node[1]))]

        return ev(_parse_tree(label))

    return algebra_from_operations(monad, carrier, interpret, name)


def powerset_semilattice(monad: TruncatedMonad, pool: FinSet, name=None) -> EMAlgebra:
    """Finite subsets of the pool under union, as an L'- (or L-) algebra.

    Subset atoms are written "{a,b}" with elements in pool order.
    """
    subsets = []
    for r in range(len(pool) + 1):
        subsets.extend(itertools.combinations(pool.atoms, r))

    def atom_of(subset):
        return "{%s}" % ",".join(subset)

    carrier = FinSet(atom_of(s) for s in subsets)
    back = {atom_of(s): frozenset(s) for s in subsets}

    def atom_of_set(fs):
        return atom_of(tuple(a for a in pool.atoms if a in fs))

    table = {(x, y): atom_of_set(back[x] | back[y]) for x in carrier for y in carrier}
    bottom = atom_of(()) if monad.op.labels(0) else None
    return semilattice_algebra(monad, carrier, table, bottom,
                               name or ("P(%s)" % ",".join(pool.atoms)))


def all_semilattices(atoms) -> list[dict]:
    """All join-semilattice tables on the given atoms (brute force)."""
    atoms = tuple(atoms)
    pairs = [(a, b) for i, a in enumerate(atoms) for b in atoms[i + 1:]]
    out = []
    for values in itertools.product(atoms, repeat=len(pairs)):
        table = {(a, a): a for a in atoms}
        for (a, b), v in zip(pairs, values):
            table[(a, b)] = v
            table[(b, a)] = v
        if all(table[(table[(a, b)], c)] == table[(a, table[(b, c)])]
               for a in atoms for b in atoms for c in atoms):
            out.append(table)
    return out


def all_commutative_monoids(atoms) -> list[tuple[dict, str]]:
    """All commutative monoid tables (table, unit) on the given atoms."""
    atoms = tuple(atoms)
    pairs = [(a, b) for i, a in enumerate(atoms) for b in atoms[i:]]
    out = []
    for values in itertools.product(atoms, repeat=len(pairs)):
        table = {}
        for (a, b), v in zip(pairs, values):
            table[(a, b)] = v
            table[(b, a)] = v
        units = [e for e in atoms if all(table[(e, a)] == a for a in atoms)]
        if not units:
            continue
        if all(table[(table[(a, b)], c)] == table[(a, table[(b, c)])]
               for a in atoms for b in atoms for c in atoms):
            out.append((table, units[0]))
    return out


def semilattice_homs(table_m, table_n, atoms_m, atoms_n):
    """All maps preserving the binary join (brute force)."""
    out = []
    for values in itertools.product(atoms_n, repeat=len(atoms_m)):
        h = dict(zip(atoms_m, values))
        if all(h[table_m[(a, b)]] == table_n[(h[a], h[b])]
               for a in atoms_m for b in atoms_m):
            out.append(h)
    return out


# ---------------------------------------------------------------------------
# the morphism catalog
# ---------------------------------------------------------------------------

def maybe_to_L(n_max: int = 3) -> MonadMorphism:
    return MonadMorphism.from_label_map(
        make_monad("MAYBE", n_max), make_monad("L", n_max),
        lambda n, r: {"star": "mu0", "iota": "mu1"}[r], "MAYBE->L")


def Lprime_to_L(n_max: int = 3) -> MonadMorphism:
    return MonadMorphism.from_label_map(
        make_monad("Lprime", n_max), make_monad("L", n_max),
        lambda n, r: r, "L'->L")


def assoc_to_C(n_max: int = 3) -> MonadMorphism:
    """Abelianization: a word goes to the multiset of its letters."""
    return MonadMorphism.from_label_map(
        make_monad("ASSOC", n_max), make_monad("C", n_max),
        lambda n, r: "mu%d" % n, "ASSOC->C")


def magma_to_assoc(n_max: int = 3) -> MonadMorphism:
    """Forget bracketing: a tree goes to its leaf word."""
    def label_map(n, tree_label):
        leaves = _tree_leaves(_parse_tree(tree_label))
        return "e" + "".join(str(d) for d in leaves)

    return MonadMorphism.from_label_map(
        make_monad("MAGMA", n_max), make_monad("ASSOC", n_max),
        label_map, "MAGMA->ASSOC")


def magma_duplication(n_max: int = 2) -> MonadMorphism:
    """The endomorphism interpreting the binary operation as b(x, x).

    Not arity-preserving, hence a general component-table morphism; the
    cap keeps the duplicated trees inside the truncation (tree sizes can
    double per level).
    """
    src = make_monad("MAGMA", n_max)

    def dup(tree):
        if isinstance(tree, int):
            return tree
        left = dup(tree[0])
        return (left, left)

    def fn(n, t):
        tree = dup(_parse_tree(t.label))
        leaves = _tree_leaves(tree)
        vidx = tuple(t.vidx[d - 1] for d in leaves)
        counter = itertools.count(1)

        def renumber(node):
            if isinstance(node, int):
                return next(counter)
            return (renumber(node[0]), renumber(node[1]))

        return src.canon(len(leaves), vidx, _format_tree(renumber(tree)))

    return MonadMorphism.from_term_function(src, src, fn, "MAGMA-dup")


def morphism_catalog() -> list[MonadMorphism]:
    """The classification catalog: identities, coefficient-induced maps,
    and the non-cartesian duplication endomorphism."""
    return [
        MonadMorphism.identity(make_monad("L", 3)),
        MonadMorphism.identity(make_monad("ASSOC", 3)),
        maybe_to_L(3),
        Lprime_to_L(3),
        assoc_to_C(3),
        magma_to_assoc(3),
        magma_duplication(2),
    ]
