from itertools import product
from math import gcd

import pytest

from spanfib.fincat import (FinFunctor, Triple, divisor_lattice, finset_skeleton, terminal, walking_arrow,
                            walking_iso)
from spanfib.groupoid import PointGroupoid
from spanfib.instances import BUILDERS
from spanfib.spancat import (ConstantSimplicialGroupoid, InadequateTriple, SigmaDiagram, compose_spans,
                             equivalence_embedding, is_acart, postcompose, span_level, span_of_functor,
                             span_segal_map, span_segal_space, span_simplicial_set, zeroth_row,
                             zeroth_row_map)

DIVISORS = [1, 2, 3, 4, 6, 12]


def lattice():
    return Triple.from_kinds(divisor_lattice(12), name="div12")


def finset(n=2, egressive="isos"):
    return Triple.from_kinds(finset_skeleton(n), "all", egressive)


def span(C, back, fwd):
    b, f = C.mor(back), C.mor(fwd)
    return SigmaDiagram([C.tgt[b], C.src[b], C.tgt[f]], [b, f])


def finset_level_oracle(n):
    """Count span diagrams in sets of size <= 2 with bijective backward legs, from scratch."""
    funcs = lambda a, b: list(product(range(b), repeat=a))  # noqa: E731
    bij = lambda a, b: [f for f in funcs(a, b) if len(set(f)) == a == b]  # noqa: E731
    if n == 1:
        return sum(len(bij(y, x)) * len(funcs(y, z)) for x, y, z in product(range(3), repeat=3))
    total = 0
    for x0, x1, x2, y01, y12, a in product(range(3), repeat=6):
        for b01, f01, b12, f12 in product(bij(y01, x0), funcs(y01, x1), bij(y12, x1), funcs(y12, x2)):
            fiber = [(u, v) for u in range(y01) for v in range(y12) if f01[u] == b12[v]]
            for g, f in product(bij(a, y01), funcs(a, y12)):
                pairs = [(g[i], f[i]) for i in range(a)]
                if sorted(pairs) == sorted(fiber) and len(set(pairs)) == a:
                    total += 1
    return total


def test_acart_level_one_is_the_class_condition():
    t = finset(2)
    C = t.cat
    for y in range(C.n_objects):
        for back, fwd in product(C.out_of(y), repeat=2):
            F = SigmaDiagram([C.tgt[back], y, C.tgt[fwd]], [back, fwd])
            assert is_acart(F, t) == (back in t.egressive and fwd in t.ingressive)


def test_acart_level_zero():
    t = finset(2)
    assert all(is_acart(SigmaDiagram([x], []), t) for x in range(3))


def test_non_pullback_square_is_not_acart():
    t = Triple.from_kinds(finset_skeleton(2))
    C = t.cat
    # 1 <- 1 -> 1 <- 2 -> 2 over the apex 1: the true fiber product has two elements
    F = compose_spans(t, span(C, "id_1", "id_1"), span(C, "s2_1_00", "id_2"))
    assert is_acart(F, t)
    objs = list(F.objs)
    gens = list(F.gens)
    objs[F.poset.elements.index((0, 2))] = C.obj("1")
    hasse = list(F.poset.hasse)
    gens[hasse.index(((0, 2), (0, 1)))] = C.mor("id_1")
    gens[hasse.index(((0, 2), (1, 2)))] = C.mor("s1_2_0")
    assert not is_acart(SigmaDiagram(objs, gens), t)


def test_level_zero_is_the_objects():
    assert len(span_level(lattice(), 0)) == 6


def test_lattice_levels_match_the_gcd_count():
    # F(01) divides gcd(F(00), F(11)) and F(02) is forced to be the gcd of its legs
    def n_div(m):
        return sum(1 for d in DIVISORS if m % d == 0)

    one = sum(n_div(gcd(a, b)) for a, b in product(DIVISORS, repeat=2))
    two = sum(n_div(gcd(a, b)) * n_div(gcd(b, c)) for a, b, c in product(DIVISORS, repeat=3))
    assert [len(span_level(lattice(), n)) for n in (1, 2)] == [one, two] == [70, 910]


def test_lattice_level_two_by_full_assignment():
    count = 0
    for x0, x1, x2, y01, y12, a in product(DIVISORS, repeat=6):
        if x0 % y01 or x1 % y01 or x1 % y12 or x2 % y12:
            continue
        count += a == gcd(y01, y12)
    assert count == len(span_level(lattice(), 2))


def test_invertible_backward_legs():
    t = finset(2)
    level = span_level(t, 1)
    assert len(level) == finset_level_oracle(1) == 16
    assert all(t.cat.is_iso(F.gens[0]) for F in level)


def test_finset_level_two_matches_oracle():
    assert len(span_level(finset(2), 2)) == finset_level_oracle(2) == 211


def test_compose_with_a_degenerate_span():
    t = lattice()
    C = t.cat
    for y, b, f in [(C.obj("2"), C.mor("2_4"), C.mor("2_12")), (C.obj("1"), C.mor("1_3"), C.mor("1_2"))]:
        s1 = SigmaDiagram([C.tgt[b], y, C.tgt[f]], [b, f])
        x = C.tgt[f]
        F = compose_spans(t, s1, SigmaDiagram([x, x, x], [x, x]))
        assert F.obj((0, 2)) == y


def test_composite_of_invertible_backward_legs():
    t = finset(2)
    C = t.cat
    F = compose_spans(t, span(C, "s2_2_10", "s2_2_10"), span(C, "s2_2_10", "s2_1_00"))
    back = C.compose(F.gen((0, 1), (0, 0)), F.gen((0, 2), (0, 1)))
    assert C.is_iso(back)
    assert is_acart(F, t)


def test_finset_composition_apex_is_the_fiber_product():
    C = finset_skeleton(3)
    t = Triple.from_kinds(C)
    for fv in product(range(2), repeat=3):
        for gv in product(range(2), repeat=2):
            f, g = f"s3_2_{''.join(map(str, fv))}", f"s2_2_{''.join(map(str, gv))}"
            g = "id_2" if gv == (0, 1) else g
            size = sum(1 for u in range(3) for v in range(2) if fv[u] == gv[v])
            s1, s2 = span(C, "s3_2_001", f), span(C, g, "s2_1_00")
            if size > 3:
                with pytest.raises(InadequateTriple):
                    compose_spans(t, s1, s2)
                continue
            F = compose_spans(t, s1, s2)
            assert C.objects[F.obj((0, 2))] == str(size)


def test_compose_rejects_mismatched_spans():
    t = lattice()
    C = t.cat
    with pytest.raises(ValueError):
        compose_spans(t, span(C, "2_4", "2_4"), span(C, "3_6", "3_6"))


def test_span_of_identity_is_identity():
    t = lattice()
    X = span_simplicial_set(t, 2)
    f = span_of_functor(FinFunctor(t.cat, t.cat, range(6), range(t.cat.n_morphisms)), t, t, 2, X, X)
    assert all(list(f.components[k]) == list(range(X.size(k))) for k in X.grades())


def test_span_of_collapse_is_constant():
    s = lattice()
    T = terminal()
    t = Triple.from_kinds(T)
    p = FinFunctor(s.cat, T, [0] * 6, [0] * s.cat.n_morphisms)
    f = span_of_functor(p, s, t, 2)
    assert all(set(f.components[k]) == {0} for k in range(3))


@pytest.mark.parametrize("name", ["groth_small", "groth_satisfying"])
def test_projection_is_levelwise_surjective(name):
    p, s, t = BUILDERS[name]().functor_triples()
    X, Y = span_simplicial_set(s, 2), span_simplicial_set(t, 2)
    f = span_of_functor(p, s, t, 2, X, Y)
    for k in range(3):
        image = {postcompose(p, F) for F in X.labels[k]}
        assert image == set(Y.labels[k])
        assert {Y.labels[k][y] for y in f.components[k]} == image


def test_span_simplicial_set_identities():
    assert span_simplicial_set(lattice(), 3).check_identities() == []
    assert span_simplicial_set(finset(2), 2).check_identities() == []


def test_segal_space_levels():
    t = lattice()
    S = span_segal_space(t, 2)
    assert S.identity_violations() == []
    assert set(S.levels[0].objects) == {SigmaDiagram([x], []) for x in range(6)}
    assert set(S.levels[1].objects) == set(span_level(t, 1).members)
    # no nontrivial isomorphisms in a poset, so only identities
    assert S.levels[1].n_morphisms() == 70


def test_segal_space_of_finset_has_automorphisms():
    S = span_segal_space(finset(2), 1)
    G0 = S.levels[0]
    assert sorted(len(G0.automorphisms(a)) for a in G0.objects) == [1, 1, 2]


@pytest.mark.parametrize("t", [lattice(), finset(2)], ids=["div12", "finset2"])
def test_zeroth_row_is_the_span_simplicial_set(t):
    S = span_segal_space(t, 2)
    R = zeroth_row(S)
    X = span_simplicial_set(t, 2)
    for k in range(3):
        assert set(R.labels[k]) == set(X.labels[k])
    assert R.check_identities() == []


def test_zeroth_row_of_a_constant_groupoid():
    R = zeroth_row(ConstantSimplicialGroupoid(PointGroupoid(), 3))
    assert R.counts() == [1, 1, 1, 1]


def test_zeroth_row_commutes_with_span_functors():
    p, s, t = BUILDERS["groth_small"]().functor_triples()
    X, Y = span_segal_space(s, 2), span_segal_space(t, 2)
    g = zeroth_row_map(span_segal_map(p, X, Y))
    f = span_of_functor(p, s, t, 2, g.source, g.target)
    assert [list(c) for c in f.components] == [list(c) for c in g.components]


def test_embedding_for_a_point():
    r = equivalence_embedding(terminal(), "backward_iso")
    assert r["ok"]
    assert all(l["source_objects"] == l["target_objects"] == 1 for l in r["levels"])


@pytest.mark.parametrize("variant", ["backward_iso", "forward_iso"])
@pytest.mark.parametrize("C", [walking_arrow, walking_iso], ids=["arrow", "iso"])
def test_embeddings_are_equivalences(C, variant):
    r = equivalence_embedding(C(), variant)
    assert r["ok"], r["levels"]
    assert all(l["retraction"] and l["equivalence"] for l in r["levels"])


def test_forward_variant_reverses_the_arrow():
    r = equivalence_embedding(walking_arrow(), "forward_iso")
    G1 = r["segal"].levels[1]
    C = walking_arrow()
    # the only non-identity span runs 1 <- 0 -> ... backwards along u
    nonid = [F for F in G1.objects if not C.is_identity(F.gens[0])]
    assert [(C.objects[F.obj((0, 0))], C.objects[F.obj((1, 1))]) for F in nonid] == [("1", "0")]
