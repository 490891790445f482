import itertools

import pytest

from plonka.fincore import FinMap, FinSet, enumerate_maps, ord_set
from plonka.monadkit import (
    MonadMorphism, TermClass, check_monad_laws, check_semicartesian,
    check_weakly_cartesian, make_monad, parse_term, regular_part,
    standard_set, terminal_morphism,
)
from plonka.operad import TruncationError


AB = FinSet("ab")


def term_index(monad, X):
    els = monad.elements(X)
    return {t.encode(): i for i, t in enumerate(els)}, monad.carrier(X)


def test_eval_L_is_finite_powerset():
    TL = make_monad("L", 4)
    encs = [t.encode() for t in TL.elements(AB)]
    assert encs == ["0||mu0", "1|1|mu1", "1|2|mu1", "2|1,2|mu2"]


def test_eval_assoc_words_up_to_3():
    TA = make_monad("ASSOC", 3)
    # independent word oracle: words of length <= 3 over two letters
    assert len(TA.elements(AB)) == 1 + 2 + 4 + 8


def test_eval_assoc_matches_word_enumeration():
    TA = make_monad("ASSOC", 3)

    def word_of(t):
        order = [d - 1 for d in [int(c) for c in t.label[1:]]]
        return tuple(AB.atoms[t.vidx[i]] for i in order)

    words = {word_of(t) for t in TA.elements(AB)}
    expect = set()
    for ln in range(4):
        expect.update(itertools.product(AB.atoms, repeat=ln))
    assert words == expect


def test_eval_id_is_identity():
    TI = make_monad("ID", 3)
    assert [t.encode() for t in TI.elements(AB)] == ["1|1|iota", "1|2|iota"]


def test_unit_examples():
    TL = make_monad("L", 3)
    assert TL.unit(AB, "a").encode() == "1|1|mu1"
    TA = make_monad("ASSOC", 3)
    one = FinSet("a")
    assert TA.unit(one, "a").encode() == "1|1|e1"
    with pytest.raises(ValueError):
        TL.unit(AB, "z")


def test_unit_naturality_along_inclusion():
    TL = make_monad("L", 3)
    Y = FinSet("abc")
    u = FinMap(AB, Y, ("a", "b"))
    for x in AB.atoms:
        assert TL.fmap(u, TL.unit(AB, x)) == TL.unit(Y, u(x))


def test_mult_powerset_union():
    TL = make_monad("L", 4)
    idx, carrier = term_index(TL, AB)
    outer = TL.canon(2, (idx["1|1|mu1"], idx["2|1,2|mu2"]), "mu2")
    assert TL.mult(AB, carrier, outer).encode() == "2|1,2|mu2"


def test_mult_assoc_concatenates_words():
    TA = make_monad("ASSOC", 4)
    idx, carrier = term_index(TA, AB)
    w_ab = TA.canon(2, (0, 1), "e12").encode()
    w_ba = TA.canon(2, (0, 1), "e21").encode()
    outer = TA.canon(2, (idx[w_ab], idx[w_ba]), "e12")
    got = TA.mult(AB, carrier, outer)
    order = [d - 1 for d in [int(c) for c in got.label[1:]]]
    word = "".join(AB.atoms[got.vidx[i]] for i in order)
    assert word == "abba"


def test_mult_unit_law_single():
    TL = make_monad("L", 3)
    idx, carrier = term_index(TL, AB)
    for t in TL.elements(AB):
        outer = TermClass(1, (idx[t.encode()],), "mu1")
        assert TL.mult(AB, carrier, outer) == t


def test_mult_truncation_flagged():
    TL = make_monad("Lprime", 2)
    X = FinSet("abcd")
    idx, carrier = term_index(TL, X)
    a_b = TL.canon(2, (0, 1), "mu2").encode()
    c_d = TL.canon(2, (2, 3), "mu2").encode()
    outer = TL.canon(2, (idx[a_b], idx[c_d]), "mu2")
    with pytest.raises(TruncationError):
        TL.mult(X, carrier, outer)


def test_canon_assoc_example():
    TA = make_monad("ASSOC", 3)
    assert TA.canon(2, (1, 0), "e21").encode() == "2|1,2|e12"


def test_canon_idempotent_exhaustive_small():
    TA = make_monad("ASSOC", 3)
    for n in range(3):
        for vidx in itertools.product(range(2), repeat=n):
            for label in TA.op.labels(n):
                t = TA.canon(n, vidx, label)
                assert TA.canon(t.n, t.vidx, t.label) == t


def test_fmap_functorial_exhaustive_small():
    TA = make_monad("ASSOC", 3)
    X, Y, Z = standard_set(2), standard_set(3, "y"), standard_set(2, "z")
    from plonka.fincore import compose
    for f in enumerate_maps(Y, Z):
        for g in enumerate_maps(X, Y):
            for t in TA.elements(X):
                assert TA.fmap(f, TA.fmap(g, t)) == TA.fmap(compose(f, g), t)


def test_encode_parse_roundtrip():
    t = TermClass(3, (0, 2, 2), "e231")
    assert parse_term(t.encode()) == t
    assert parse_term("0||mu0") == TermClass(0, (), "mu0")


@pytest.mark.parametrize("name", ["L", "Lprime", "C", "Cprime", "MAYBE", "ID"])
def test_monad_laws_small_theories(name):
    rep = check_monad_laws(make_monad(name, 3), size_cap=2, assoc_size_cap=2)
    assert rep.ok, rep.to_jsonl()


@pytest.mark.parametrize("name", ["ASSOC", "MAGMA"])
def test_monad_laws_symmetric_theories(name):
    rep = check_monad_laws(make_monad(name, 3), size_cap=2, assoc_size_cap=2)
    assert rep.ok, rep.to_jsonl()


def test_monad_laws_catch_broken_mult():
    # L with the merge action corrupted: mu2 merges to mu2 instead of mu1
    from plonka.operad import TerminalOperad

    class BrokenL(TerminalOperad):
        uniform_labels = False

        def __init__(self, cap):
            super().__init__("brokenL", "regular", True, cap)

        def surjection_action(self, s, r):
            return "mu%d" % len(s.dom)  # wrong: ignores the merge

        def labels(self, n):
            return ("mu%d" % n,) if 0 <= n <= self.max_arity else ()

    from plonka.monadkit import TruncatedMonad
    broken = TruncatedMonad(BrokenL(5), 3)
    rep = check_monad_laws(broken, size_cap=2, assoc_size_cap=2)
    assert not rep.ok


# -- morphisms ---------------------------------------------------------


def maybe_to_L(n_max=3):
    src = make_monad("MAYBE", n_max)
    tgt = make_monad("L", n_max)
    return MonadMorphism.from_label_map(
        src, tgt, lambda n, r: {"star": "mu0", "iota": "mu1"}[r], "MAYBE->L")


def magma_duplication(n_max=2):
    from plonka.operad import _format_tree, _parse_tree, _tree_leaves
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

        label = _format_tree(renumber(tree))
        return src.canon(len(leaves), vidx, label)

    return MonadMorphism.from_term_function(src, src, fn, "MAGMA dup b(x,y)->b(x,x)")


def test_identity_morphism_validates():
    tau = MonadMorphism.identity(make_monad("L", 3))
    assert tau.validate(size_cap=2).ok


def test_maybe_to_L_validates_and_is_semicartesian():
    tau = maybe_to_L()
    assert tau.validate(size_cap=3).ok
    ok, witness, _ = check_semicartesian(tau, size_cap=3)
    assert ok and witness is None


def test_Lprime_to_L_is_semicartesian():
    src = make_monad("Lprime", 3)
    tgt = make_monad("L", 3)
    tau = MonadMorphism.from_label_map(src, tgt, lambda n, r: r, "L'->L")
    assert tau.validate(size_cap=2).ok
    ok, _, _ = check_semicartesian(tau, size_cap=3)
    assert ok


def test_magma_duplication_is_a_morphism_but_not_cartesian():
    tau = magma_duplication()
    assert tau.validate(size_cap=2).ok
    ok, witness, _ = check_semicartesian(tau, size_cap=2)
    assert not ok and witness is not None
    ok, witness, _ = check_weakly_cartesian(tau, size_cap=2)
    assert not ok and witness is not None


def test_semicartesian_implies_weakly_cartesian_on_catalog():
    catalog = [
        MonadMorphism.identity(make_monad("L", 3)),
        maybe_to_L(),
        magma_duplication(),
    ]
    for tau in catalog:
        semi, _, _ = check_semicartesian(tau, size_cap=2)
        weak, _, _ = check_weakly_cartesian(tau, size_cap=2)
        if semi:
            assert weak


def test_terminal_morphism_assoc_to_C():
    tau = terminal_morphism(make_monad("ASSOC", 3))
    assert tau.target.name == "C"
    assert tau.validate(size_cap=2).ok
    ok, _, _ = check_weakly_cartesian(tau, size_cap=2)
    assert ok


def test_morphism_extension_well_defined():
    # two representatives of the same class extend to the same value
    tau = maybe_to_L()
    X = FinSet("abc")
    for t in tau.source.elements(X):
        v = tau.apply(X, t)
        assert v == tau.target.fmap(
            FinMap(X, X, X.atoms), tau.apply(X, t))


# -- regular part ------------------------------------------------------


def test_regular_part_assoc_orderings():
    TA = make_monad("ASSOC", 4)
    reg, counit = regular_part(TA)
    labels2 = reg.op.labels(2)
    # the two orderings of two letters appear among the support-exactly-2 labels
    assert "2|1,2|e12" in labels2 and "2|1,2|e21" in labels2
    # allements at arity 2 hit both variables
    for enc in labels2:
        assert set(parse_term(enc).vidx) == {0, 1}


def test_regular_part_L_is_L():
    TL = make_monad("L", 4)
    reg, _ = regular_part(TL)
    for n in range(reg.n_max + 1):
        assert len(reg.op.labels(n)) == len(TL.op.labels(n))
    for size in range(3):
        X = standard_set(size)
        assert len(reg.elements(X)) == len(TL.elements(X))


def test_regular_part_counit_is_bijective_for_analytic_source():
    TA = make_monad("ASSOC", 4)
    reg, counit = regular_part(TA)
    X = AB
    images = {counit.apply(X, t) for t in reg.elements(X)}
    expect = {t for t in TA.elements(X) if t.n <= 4}
    assert len(images) == len(reg.elements(X))
    assert images <= expect


def test_regular_part_counit_validates():
    TA = make_monad("ASSOC", 4)
    reg, counit = regular_part(TA)
    assert counit.validate(size_cap=2).ok


def test_regular_part_monad_laws():
    TA = make_monad("ASSOC", 4)
    reg, _ = regular_part(TA)
    rep = check_monad_laws(reg, size_cap=2, assoc_size_cap=2)
    assert rep.ok, rep.to_jsonl()
