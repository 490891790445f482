import pytest

from plonka.catalog import (
    all_semilattices, chain_algebra, commutative_monoid_algebra, maybe_to_L,
    monoid_algebra, semilattice_algebra, semilattice_homs,
)
from plonka.emalg import (
    AlgebraHom, all_homs, are_isomorphic, check_algebra, em_functor,
    free_algebra, product_algebra,
)
from plonka.fincore import FinSet
from plonka.monadkit import MonadMorphism, make_monad, standard_set


LP = make_monad("Lprime", 3)
L = make_monad("L", 3)


def two_chain(monad=LP):
    return chain_algebra(monad, 2)


def test_two_chain_passes():
    assert check_algebra(two_chain()).ok


def test_broken_join_reports_witness():
    # genuinely non-associative "join" on three elements
    atoms = FinSet("012")
    table = {("0", "0"): "0", ("1", "1"): "1", ("2", "2"): "2",
             ("0", "1"): "2", ("1", "0"): "2",
             ("0", "2"): "1", ("2", "0"): "1",
             ("1", "2"): "0", ("2", "1"): "0"}
    alg = semilattice_algebra(LP, atoms, table, name="broken")
    rep = check_algebra(alg)
    assert not rep.ok
    assert any(r.witnesses for r in rep.records)


def test_free_algebra_is_algebra():
    X = standard_set(2)
    alg = free_algebra(LP, X)
    assert len(alg.carrier) == 3
    assert check_algebra(alg).ok


def test_free_algebra_id_and_maybe():
    X = FinSet("x")
    assert len(free_algebra(make_monad("ID", 3), X).carrier) == 1
    assert len(free_algebra(make_monad("MAYBE", 3), X).carrier) == 2


def test_em_functor_identity():
    alg = two_chain()
    tau = MonadMorphism.identity(LP)
    assert em_functor(tau, alg).structure == alg.structure


def test_em_functor_maybe_to_L():
    tau = maybe_to_L(3)
    alg = chain_algebra(tau.target, 2)  # ({0,1}, max, bottom 0)
    pointed = em_functor(tau, alg)
    # the constant goes to the bottom
    star = None
    for t in tau.source.elements(alg.carrier):
        if t.label == "star":
            star = t
    assert pointed.apply(star) == "0"
    assert check_algebra(pointed).ok


def test_em_functor_preserves_homs():
    tau = maybe_to_L(3)
    m = chain_algebra(tau.target, 2)
    n = chain_algebra(tau.target, 3)
    for h in all_homs(m, n):
        image = AlgebraHom(em_functor(tau, m), em_functor(tau, n), h.mapping)
        assert image.validate()


def test_product_algebra_diamond():
    a = two_chain()
    prod = product_algebra(a, a)
    assert len(prod.carrier) == 4
    assert check_algebra(prod).ok
    # componentwise join: (0|1) v (1|0) = (1|1)
    m = prod.monad
    i = prod.carrier.index("(0|1)")
    j = prod.carrier.index("(1|0)")
    t = m.canon(2, tuple(sorted((i, j))), "mu2")
    assert prod.apply(t) == "(1|1)"


def test_product_with_terminal_is_isomorphic():
    a = two_chain()
    point = semilattice_algebra(LP, FinSet("p"), {("p", "p"): "p"}, name="pt")
    prod = product_algebra(a, point)
    assert are_isomorphic(prod, a) is not None


def test_product_of_catalog_algebras_passes():
    atoms = tuple("ab")
    for table in all_semilattices(atoms):
        alg = semilattice_algebra(LP, FinSet(atoms), table)
        prod = product_algebra(alg, two_chain())
        assert check_algebra(prod).ok


def test_hom_composition_closure():
    algs = [two_chain(), chain_algebra(LP, 3)]
    for a in algs:
        for b in algs:
            for c in algs:
                for h1 in all_homs(a, b):
                    for h2 in all_homs(b, c):
                        assert h1.then(h2).validate()


def test_em_functor_contravariant_on_composites():
    tau1 = maybe_to_L(3)
    # compose with the identity on L
    tau2 = MonadMorphism.identity(L)
    comp = tau1.then(tau2)
    b = chain_algebra(L, 2)
    lhs = em_functor(comp, b)
    rhs = em_functor(tau1, em_functor(tau2, b))
    assert lhs.structure == rhs.structure


def test_are_isomorphic_finds_relabelling():
    atoms = FinSet("uv")
    table = {("u", "u"): "u", ("u", "v"): "v", ("v", "u"): "v", ("v", "v"): "v"}
    alg = semilattice_algebra(LP, atoms, table)
    f = are_isomorphic(alg, two_chain())
    assert f is not None and f("u") == "0" and f("v") == "1"


def test_are_isomorphic_rejects_nonisomorphic():
    atoms = tuple("ab")
    flat = {("a", "a"): "a", ("b", "b"): "b", ("a", "b"): "b", ("b", "a"): "b"}
    other = {("a", "a"): "a", ("b", "b"): "b", ("a", "b"): "a", ("b", "a"): "a"}
    x = semilattice_algebra(LP, FinSet(atoms), flat)
    y = semilattice_algebra(LP, FinSet(atoms), other)
    # these two ARE isomorphic (swap); build a genuinely different pair:
    # 2-chain vs 2-antichain is impossible as semilattice; use sizes
    z = chain_algebra(LP, 3)
    assert are_isomorphic(x, z) is None
    assert are_isomorphic(x, y) is not None


def test_monoid_algebra_over_assoc():
    TA = make_monad("ASSOC", 3)
    atoms = FinSet("e1")  # unit e, absorbing 1
    table = {("e", "e"): "e", ("e", "1"): "1", ("1", "e"): "1", ("1", "1"): "1"}
    alg = monoid_algebra(TA, atoms, table, unit="e")
    assert check_algebra(alg).ok


def test_commutative_monoid_over_C():
    TC = make_monad("C", 3)
    atoms = FinSet("01")
    table = {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "1"}
    alg = commutative_monoid_algebra(TC, atoms, table, unit="0")
    assert check_algebra(alg).ok


def test_semilattice_hom_enumeration():
    atoms = tuple("01")
    chain = {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "1"}
    homs = semilattice_homs(chain, chain, atoms, atoms)
    # monotone join-preserving self-maps of the 2-chain: 00, 01, 11
    assert len(homs) == 3
