from math import factorial, gcd

import pytest

from spanfib.fincat import (CategoryError, FinCategory, FinFunctor, Triple, compute_pullback, core,
                            divisor_lattice, finset_skeleton, from_poset, functor_of_triples_violations,
                            grothendieck, identity_functor, interval, is_adequate, is_cartesian_1cat,
                            is_cocartesian_1cat, is_pullback, nerve, product, projection, terminal,
                            validate_category, walking_arrow, walking_iso)
from spanfib.instances import span_shape


def cospan():
    return FinCategory(["x", "y", "z"], [("a", "x", "z"), ("b", "y", "z")], {}, name="cospan")


def brute_cocartesian(p, f):
    """Unique factorization through ``f`` over every compatible base morphism."""
    C, D = p.source, p.target
    x, y = C.src[f], C.tgt[f]
    for g in C.out_of(x):
        z = C.tgt[g]
        for h in D.hom(p.on_object(y), p.on_object(z)):
            if D.compose(h, p(f)) != p(g):
                continue
            hits = [k for k in C.hom(y, z) if C.compose(k, f) == g and p(k) == h]
            if len(hits) != 1:
                return False
    return True


def test_poset_arrow():
    C = validate_category({"objects": ["0", "1"], "morphisms": [("u", "0", "1")]})
    assert C.n_morphisms == 3
    assert C.law_violations() == []


def test_nonassociative_table_is_rejected():
    bad = {("x", "x"): "id_a", ("x", "y"): "id_a", ("y", "x"): "id_a", ("y", "y"): "id_a"}
    with pytest.raises(CategoryError, match="associativity fails"):
        FinCategory(["a"], [("x", "a", "a"), ("y", "a", "a")], bad)


def test_missing_composite_is_rejected():
    with pytest.raises(CategoryError):
        FinCategory(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")], {})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_finset_morphism_counts(n):
    C = finset_skeleton(n)
    assert C.n_objects == n + 1
    for a in range(n + 1):
        for b in range(n + 1):
            assert len(C.hom(a, b)) == b ** a
    assert C.law_violations() == []


def test_finset2_has_eleven_morphisms():
    assert finset_skeleton(2).n_morphisms == 11


def test_pullback_along_an_isomorphism():
    C = finset_skeleton(2)
    for g in C.isos():
        for f in C.into(C.tgt[g]):
            y = C.src[f]
            sq = compute_pullback(C, f, g)
            assert sq.apex == y
            assert is_pullback(C, f, g, y, C.identity(y), C.compose(C.inverse(g), f))
            assert sq.replay(C)


def test_pullback_of_identities():
    C = walking_arrow()
    for x in range(2):
        sq = compute_pullback(C, C.identity(x), C.identity(x))
        assert sq.apex == x


def test_divisor_pullbacks_are_gcds():
    C = divisor_lattice(12)
    for f in range(C.n_morphisms):
        for g in C.into(C.tgt[f]):
            sq = compute_pullback(C, f, g)
            y, xp = int(C.objects[C.src[f]]), int(C.objects[C.src[g]])
            assert sq is not None and int(C.objects[sq.apex]) == gcd(y, xp)
            assert sq.replay(C)


def test_pullback_choice_does_not_matter():
    C = finset_skeleton(2)
    for f in range(C.n_morphisms):
        for g in C.into(C.tgt[f]):
            a, b = compute_pullback(C, f, g), compute_pullback(C, f, g, choice="greatest")
            assert (a is None) == (b is None)
            if a is not None:
                assert a.apex == b.apex
                assert is_pullback(C, f, g, b.apex, b.g_prime, b.f_prime)


def test_lattice_triple_is_adequate():
    assert is_adequate(Triple.from_kinds(divisor_lattice(12)))


@pytest.mark.parametrize("C", [finset_skeleton(2), walking_arrow(), cospan(), span_shape()])
def test_invertible_backward_legs_are_always_adequate(C):
    assert is_adequate(Triple.from_kinds(C, "all", "isos"))


def test_cospan_without_pullback_is_not_adequate():
    rep = is_adequate(Triple.from_kinds(cospan()))
    assert not rep.ok
    assert {"kind": "no pullback", "f": "a", "g": "b"} in rep.witnesses


def test_classes_must_contain_isos():
    with pytest.raises(CategoryError, match="misses isomorphism"):
        Triple(walking_iso(), range(4), [0, 1])


def test_identity_functor_is_cocartesian_everywhere():
    for C in (walking_iso(), finset_skeleton(2), span_shape()):
        p = identity_functor(C)
        assert all(is_cocartesian_1cat(p, m) and is_cartesian_1cat(p, m) for m in range(C.n_morphisms))


def test_isomorphisms_are_cocartesian():
    C = product(walking_iso(), walking_arrow())
    p = projection(walking_iso(), walking_arrow(), C, which=1)
    for m in C.isos():
        assert is_cocartesian_1cat(p, m)


def test_grothendieck_lifts_are_cocartesian():
    A, B = walking_arrow(), interval(2)
    phi = FinFunctor(A, B, [0, 1], [0, 1, B.mor("0_1")])
    E, p = grothendieck(A, B, phi)
    assert E.law_violations() == [] and p.violations() == []
    for a in A.objects:
        b = B.objects[phi.on_object(A.obj(a))]
        assert is_cocartesian_1cat(p, E.mor(f"u:{a}:id_{b}"))
    assert not is_cocartesian_1cat(p, E.mor("u:0:0_1"))


@pytest.mark.parametrize("which", ["satisfying", "violating", "small"])
def test_cocartesian_agrees_with_bruteforce(which):
    from spanfib import instances
    d = {"satisfying": instances.groth_satisfying, "violating": instances.groth_violating,
         "small": instances.groth_small}[which]()
    p = d.functor("p")
    for m in range(p.source.n_morphisms):
        assert is_cocartesian_1cat(p, m) == brute_cocartesian(p, m)


def test_core():
    A = core(walking_arrow())
    assert A.n_objects == 2 and A.n_morphisms == 2
    G = walking_iso()
    assert core(G).n_morphisms == G.n_morphisms
    S = core(finset_skeleton(2))
    assert [len(S.automorphisms(a)) for a in range(3)] == [factorial(k) for k in range(3)]


def test_nerve_of_terminal_is_a_point():
    assert nerve(terminal(), 4).counts() == [1] * 5


def test_nerve_of_arrow_is_the_one_simplex():
    from spanfib.simpset import standard_simplex
    assert nerve(walking_arrow(), 3).counts() == standard_simplex(1, 3).counts()


def test_walking_iso_nerve():
    N = nerve(walking_iso(), 3)
    # exactly one morphism between any two objects: k-simplices are vertex strings
    assert N.counts() == [2 ** (k + 1) for k in range(4)]
    assert N.nondegenerate_counts() == [2, 2, 2, 2]
    assert N.check_identities() == []


def test_functor_of_triples_must_preserve_classes():
    C = walking_arrow()
    s = Triple.from_kinds(C, "all", "all")
    t = Triple.from_kinds(C, "all", "isos")
    assert functor_of_triples_violations(identity_functor(C), s, t)
    assert not functor_of_triples_violations(identity_functor(C), t, s)


def test_opposite_and_poset_helpers():
    C = from_poset(["a", "b", "c"], lambda x, y: x <= y)
    assert C.n_morphisms == 6
    assert C.opposite().law_violations() == []
