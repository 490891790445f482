import itertools

import pytest
from hypothesis import given, strategies as st

from plonka.fincore import (
    FinMap, FinSet, Perm, all_perms, canonical_orbit_rep, compose,
    elementary_merge, enumerate_maps, epi_mono_factor, identity_map, ord_set,
    perm_as_map, surjection_generators,
)


def test_finset_rejects_duplicates():
    with pytest.raises(ValueError):
        FinSet(["a", "b", "a"])


def test_compose_identity():
    s = FinSet("a")
    f = identity_map(s)
    assert compose(f, f) == f


def test_compose_two_step():
    f = FinMap(ord_set(2), FinSet("ab"), ("b", "a"))
    g = FinMap(ord_set(2), ord_set(2), ("2", "1"))
    assert compose(f, g).values == ("a", "b")


def test_compose_hand_evaluated():
    f = FinMap(FinSet("xyz"), FinSet("uv"), ("u", "u", "v"))
    g = FinMap(ord_set(2), FinSet("xyz"), ("z", "x"))
    assert compose(f, g).values == ("v", "u")


def test_compose_mismatch():
    f = FinMap(ord_set(2), ord_set(2), ("1", "2"))
    g = FinMap(ord_set(1), ord_set(1), ("1",))
    with pytest.raises(ValueError):
        compose(f, g)


def test_epi_mono_factor_by_codomain_order():
    f = FinMap(ord_set(3), FinSet("abcd"), ("b", "a", "b"))
    s, m = epi_mono_factor(f)
    assert m.values == ("a", "b")
    assert s.value_indices == (1, 0, 1)
    assert compose(m, s) == f


def test_epi_mono_factor_injective():
    # injective f: s is a bijection, the identity when f is monotone
    f = FinMap(ord_set(2), FinSet("abc"), ("a", "c"))
    s, m = epi_mono_factor(f)
    assert s.value_indices == (0, 1)
    assert m.values == f.values
    g = FinMap(ord_set(2), FinSet("abc"), ("c", "a"))
    s, m = epi_mono_factor(g)
    assert s.is_injective and s.is_surjective
    assert m.values == ("a", "c")
    assert compose(m, s) == g


def test_epi_mono_factor_constant():
    f = FinMap(ord_set(3), FinSet("ab"), ("a", "a", "a"))
    s, m = epi_mono_factor(f)
    assert s.values == ("a", "a", "a") and len(s.cod) == 1
    assert m.values == ("a",)


def test_epi_mono_factor_exhaustive_small():
    for dn in range(5):
        for cn in range(1, 5):
            dom, cod = ord_set(dn), FinSet("abcde"[:cn])
            for f in enumerate_maps(dom, cod):
                s, m = epi_mono_factor(f)
                assert compose(m, s) == f
                assert m.is_injective
                assert s.is_surjective


def test_enumerate_maps_counts():
    assert len(list(enumerate_maps(ord_set(2), ord_set(2), "injective"))) == 2
    assert len(list(enumerate_maps(ord_set(0), ord_set(3)))) == 1
    # brute-force count of surjections (3] ->> (2] is 2^3 - 2 = 6
    assert len(list(enumerate_maps(ord_set(3), ord_set(2), "surjective"))) == 6


def test_enumerate_maps_lex_order_and_unique():
    maps = list(enumerate_maps(ord_set(2), ord_set(3)))
    idx = [m.value_indices for m in maps]
    assert idx == sorted(idx) and len(set(idx)) == 9


def test_perm_basics():
    p = Perm((1, 2, 0))
    assert p.inverse().images == (2, 0, 1)
    assert p.then(p.inverse()).is_identity()
    with pytest.raises(ValueError):
        Perm((0, 0, 1))


def test_surjection_generators_recompose():
    # s = merges . perm, applied as maps
    for n in range(1, 5):
        for m in range(1, n + 1):
            for s in enumerate_maps(ord_set(n), ord_set(m), "surjective"):
                perm, merges = surjection_generators(s)
                f = perm_as_map(perm)
                arity = n
                for i in merges:
                    f = compose(elementary_merge(arity, i), f)
                    arity -= 1
                assert f.value_indices == s.value_indices


def trivial_action(sigma, label):
    return label


def test_canonical_orbit_rep_trivial_action():
    X = FinSet("ab")
    x = FinMap(ord_set(2), X, ("b", "a"))
    cx, cl = canonical_orbit_rep(x, "mu2", trivial_action, lambda r: 0)
    assert cx.values == ("a", "b") and cl == "mu2"


def test_canonical_orbit_rep_singleton_unchanged():
    X = FinSet("ab")
    x = FinMap(ord_set(1), X, ("b",))
    cx, cl = canonical_orbit_rep(x, "r", trivial_action, lambda r: 0)
    assert (cx, cl) == (x, "r")


def test_canonical_orbit_rep_idempotent_and_orbit_constant():
    # labels = permutations with the left action sigma . label
    for n in range(1, 5):
        labels = list(itertools.permutations(range(n)))

        def action(sigma, label):
            return tuple(sigma(i) for i in label)

        def key(label):
            return labels.index(label)

        X = FinSet("pqrs"[:n])
        x = FinMap(ord_set(n), X, tuple(X.atoms[::-1]))
        label = labels[-1]
        cx, cl = canonical_orbit_rep(x, label, action, key)
        assert canonical_orbit_rep(cx, cl, action, key) == (cx, cl)
        # every orbit member canonicalizes to the same pair
        for sigma in all_perms(n):
            y = FinMap(ord_set(n), X, tuple(x.values[sigma(i)] for i in range(n)))
            yl = action(sigma.inverse(), label)
            assert canonical_orbit_rep(y, yl, action, key) == (cx, cl)


@given(st.integers(1, 4), st.data())
def test_canonical_orbit_rep_constant_on_random_orbits(n, data):
    atoms = FinSet("abcd")
    vals = data.draw(st.tuples(*([st.sampled_from(atoms.atoms)] * n)))
    x = FinMap(ord_set(n), atoms, vals)
    labels = list(itertools.permutations(range(n)))

    def action(sigma, label):
        return tuple(sigma(i) for i in label)

    base = canonical_orbit_rep(x, labels[0], action, labels.index)
    sigma = data.draw(st.sampled_from(list(all_perms(n))))
    y = FinMap(ord_set(n), atoms, tuple(vals[sigma(i)] for i in range(n)))
    yl = action(sigma.inverse(), labels[0])
    assert canonical_orbit_rep(y, yl, action, labels.index) == base


def test_compose_associative_small():
    sets = [ord_set(1), ord_set(2), FinSet("ab")]
    for a in sets:
        for b in sets:
            for c in sets:
                for d in sets:
                    for f in enumerate_maps(c, d):
                        for g in enumerate_maps(b, c):
                            for h in enumerate_maps(a, b):
                                assert compose(compose(f, g), h) == compose(f, compose(g, h))
