import itertools

import pytest

from plonka.fincore import FinMap, Perm, enumerate_maps, ord_set
from plonka.operad import (
    BUILTIN_NAMES, TruncationError, as_table, builtin, validate_operad,
)


def test_builtin_unknown_name():
    with pytest.raises(ValueError):
        builtin("SEMIGROUP", 3)


def test_terminal_family_shapes():
    L = builtin("L", 3)
    assert L.labels(2) == ("mu2",)
    assert L.labels(0) == ("mu0",)
    assert builtin("Lprime", 3).labels(0) == ()
    assert builtin("C", 3).labels(2) == ("mu2",)
    assert builtin("Cprime", 3).labels(0) == ()
    assert L.subst("mu2", ("mu1", "mu2"), (1, 2)) == "mu3"


def test_assoc_counts_and_unit():
    A = builtin("ASSOC", 3)
    assert len(A.labels(3)) == 6
    assert A.labels(0) == ("e",)
    assert A.unit == "e1"
    assert A.subst("e12", ("e1", "e1"), (1, 1)) == "e12"


def test_magma_substitution_grafting():
    M = builtin("MAGMA", 3)
    assert M.subst("(1*2)", ("(1*2)", "1"), (2, 1)) == "((1*2)*3)"
    assert M.subst("(1*2)", ("1", "(1*2)"), (1, 2)) == "(1*(2*3))"
    assert len(M.labels(2)) == 2
    assert len(M.labels(3)) == 12


def test_maybe_shape():
    MB = builtin("MAYBE", 3)
    assert MB.labels(0) == ("star",)
    assert MB.labels(2) == ()
    assert MB.subst("iota", ("star",), (0,)) == "star"


def test_truncation_error_distinct_from_value_error():
    L = builtin("L", 3)
    with pytest.raises(TruncationError):
        L.subst("mu2", ("mu2", "mu2"), (2, 2))


def test_surjection_action_identity_and_merge():
    Lp = builtin("Lprime", 4)
    ident = FinMap(ord_set(2), ord_set(2), ("1", "2"))
    assert Lp.surjection_action(ident, "mu2") == "mu2"
    merge = FinMap(ord_set(2), ord_set(1), ("1", "1"))
    assert Lp.surjection_action(merge, "mu2") == "mu1"


def test_symmetric_mode_rejects_noninjective_action():
    A = builtin("ASSOC", 3)
    merge = FinMap(ord_set(2), ord_set(1), ("1", "1"))
    with pytest.raises(ValueError):
        A.surjection_action(merge, "e12")


def assoc_word(label):
    return [int(c) for c in label[1:]]


def test_assoc_substitution_matches_word_splicing():
    # independent oracle: interpreting labels as orderings, substitution
    # is the splicing of orderings
    A = builtin("ASSOC", 6)
    for k in range(4):
        for outer in A.labels(k):
            for shape in itertools.product(range(4), repeat=k):
                if sum(shape) > 6:
                    continue
                for inners in itertools.product(*(A.labels(n) for n in shape)):
                    offs = [0]
                    for n in shape:
                        offs.append(offs[-1] + n)
                    expect = []
                    for slot in assoc_word(outer):
                        expect.extend(offs[slot - 1] + d for d in assoc_word(inners[slot - 1]))
                    assert assoc_word(A.subst(outer, inners, shape)) == expect


def test_assoc_action_matches_word_relabelling():
    A = builtin("ASSOC", 4)
    sigma = Perm((1, 0))
    assert A.perm_action(sigma, "e12") == "e21"
    assert A.perm_action(sigma, "e21") == "e12"


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_validates_clean_at_cap_3(name):
    assert validate_operad(builtin(name, 3), 3) == []


@pytest.mark.parametrize("name", ["L", "Lprime", "MAYBE", "ID", "ASSOC", "MAGMA"])
def test_as_table_roundtrip_validates(name):
    table = as_table(builtin(name, 3))
    assert validate_operad(table, 3) == []


def test_broken_subst_table_reports_unit_violation():
    table = as_table(builtin("L", 3))
    table.subst_table[("mu2", ((1, "mu1"), (1, "mu1")))] = "mu3"
    bad = validate_operad(table, 3)
    assert any("unit law" in msg for msg in bad)


def test_broken_equivariance_reports_witness():
    table = as_table(builtin("ASSOC", 3))
    # corrupt one substitution entry so equivariance fails with a witness
    key = ("e12", ((1, "e1"), (2, "e12")))
    assert table.subst_table[key] == "e123"
    table.subst_table[key] = "e213"
    bad = validate_operad(table, 3)
    assert any("equivariance" in msg for msg in bad)


def test_regular_action_functorial_up_to_4():
    Lp = builtin("Lprime", 4)
    from plonka.fincore import compose
    for n in range(1, 5):
        for m in range(1, n + 1):
            for s in enumerate_maps(ord_set(n), ord_set(m), "surjective"):
                for j in range(1, m + 1):
                    for s2 in enumerate_maps(ord_set(m), ord_set(j), "surjective"):
                        lhs = Lp.surjection_action(compose(s2, s), "mu%d" % n)
                        rhs = Lp.surjection_action(s2, Lp.surjection_action(s, "mu%d" % n))
                        assert lhs == rhs
