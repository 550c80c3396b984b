import random
from functools import lru_cache

import pytest

from spanfib._search import MapSearch, complete
from spanfib.bisimp import (BisimplicialMap, adjunction_counts, adjunction_witness, box, box_hom_count, box_map,
                            fixed_edge_space, flat, generated_marking, groupoid_nerve, groupoid_nerve_map,
                            identity_bimap, l_marking, left_spine_factorization_check, marked_box, over,
                            pair_map, pointwise_crosscheck, pushout_product_box, reedy_failure, sharp,
                            solve_bilifting, strict_pullback_check, under)
from spanfib.fincat import Triple, nerve, walking_arrow, walking_iso
from spanfib.simpset import (SimplicialMap, enumerate_maps, identity_map, named_subcomplex, point,
                             solve_lifting, standard_simplex)
from spanfib.spancat import span_segal_space

from conftest import instance


def inclusion(sub):
    return SimplicialMap(sub.as_sset(), sub.ambient, sub.inclusion().components)


def to_terminal(X):
    T = box(point(X.M), point(X.V))
    return BisimplicialMap(X, T, {g: [0] * X.size(g) for g in X.grades()})


@lru_cache(maxsize=None)
def iso_nerve(M=1, V=1):
    return groupoid_nerve(span_segal_space(Triple.from_kinds(walking_iso()), M), V)


@lru_cache(maxsize=None)
def arrow_nerve(M=2, V=2):
    return groupoid_nerve(span_segal_space(Triple.from_kinds(walking_arrow()), M), V)


def nerve_map(name, V=2):
    f = instance(name).segal_map
    X, Y = groupoid_nerve(f.source, V), groupoid_nerve(f.target, V)
    return groupoid_nerve_map(f, X, Y), X, Y


def test_box_of_points():
    B = box(point(2), point(2))
    assert set(B.counts().values()) == {1}
    assert B.check_identities() == []


def test_box_counts_are_products():
    A, B = standard_simplex(1, 2), standard_simplex(0, 2)
    X = box(A, B)
    assert X.size((1, 0)) == 3
    assert X.counts() == {(m, n): A.size(m) * B.size(n) for m in range(3) for n in range(3)}


def test_maps_from_a_box_of_simplices_are_elements():
    X = arrow_nerve(2, 2)
    for m in range(3):
        for n in range(3):
            assert box_hom_count(standard_simplex(m, 2), standard_simplex(n, 2), X) == X.size((m, n))


def test_groupoid_nerve_identities():
    assert arrow_nerve(2, 2).check_identities() == []
    X = iso_nerve(1, 2)
    assert X.check_identities() == []
    assert X.counts()[(1, 0)] == 8


def test_flat_and_sharp_marked_boxes():
    A = standard_simplex(1, 1)
    B = standard_simplex(0, 1)
    X = box(A, B)
    assert marked_box(flat(A), B, X).marked == flat(X).marked
    assert marked_box(sharp(A), B, X).marked == frozenset(range(X.size((1, 0))))


def test_l_marked_box():
    A = standard_simplex(2, 2)
    B = standard_simplex(1, 1)
    X = box(A, B)
    m = marked_box(l_marking(A), B, X)
    e01 = A.index[1][(0, 1)]
    expected = {X.index[(1, 0)][(a, b)] for a in {e01} | {A.degen(0, 0, v) for v in range(3)}
                for b in range(B.size(0))}
    assert m.marked == expected


def test_division_by_a_point_is_the_zeroth_column():
    X = iso_nerve(1, 2)
    D = under(point(1), X)
    C0 = X.column(0)
    assert D.counts() == C0.counts()


def test_division_over_a_point_is_the_zeroth_row():
    X = iso_nerve(2, 1)
    D, _ = over(X, point(1))
    assert D.counts() == X.row(0).counts()


def test_flat_division_forgets_the_marking():
    X = iso_nerve(1, 1)
    A = standard_simplex(1, 1)
    assert under(A, X, flat(A), sharp(X)).counts() == under(A, X).counts()


def test_adjunction_on_random_instances():
    rng = random.Random(7)
    X = iso_nerve(1, 1)
    for _ in range(10):
        D = standard_simplex(1, 1)
        picks = rng.sample([(k, x) for k in D.grades() for x in range(D.size(k))], 2)
        from spanfib.simpset import Subcomplex
        A = Subcomplex.generated(D, picks[:1]).as_sset()
        B = Subcomplex.generated(D, picks[1:]).as_sset()
        assert len(set(adjunction_counts(A, B, X))) == 1


def test_adjunction_witness_for_a_point():
    X = iso_nerve(1, 1)
    w = adjunction_witness(point(1), standard_simplex(1, 1), X)
    assert w["maps"] == X.size((0, 1))


def test_marked_adjunction_filters_on_both_sides():
    X = iso_nerve(1, 1)
    A = standard_simplex(1, 1)
    B = standard_simplex(1, 1)
    mA = sharp(A)
    for e in range(X.size((1, 0))):
        mX = generated_marking(X, e)
        counts = adjunction_counts(A, B, X, mA, mX)
        bx = box(A, B)
        marked_src = marked_box(mA, B, bx).marked
        brute = sum(1 for a in MapSearch(bx, X)
                    if all(complete(bx, X, a)[(1, 0)][x] in mX.marked for x in marked_src))
        assert counts == (brute, brute, brute)
        assert adjunction_witness(A, B, X, mA, mX)["maps"] == brute


def test_pair_map_with_identity_u_is_an_isomorphism():
    X = iso_nerve(1, 1)
    f = to_terminal(X)
    D = standard_simplex(1, 1)
    g, _ = pair_map(identity_map(D), f)
    assert g.is_iso()


def test_pair_map_with_identity_f_is_an_isomorphism():
    X = iso_nerve(1, 1)
    u = inclusion(named_subcomplex("boundary", 1, bound=1))
    g, _ = pair_map(u, identity_bimap(X))
    assert g.is_iso()


def test_lifting_problems_match_their_adjoints():
    X = iso_nerve(1, 1)
    f = to_terminal(X)
    u = named_subcomplex("boundary", 1, bound=1)
    v = named_subcomplex("horn", 1, 0, bound=1)
    U, i = pushout_product_box(u, v)
    bottom = BisimplicialMap(i.target, f.target, {g: [0] * i.target.size(g) for g in i.target.grades()})
    squares = fillers = 0
    for a in MapSearch(U, X):
        squares += 1
        fillers += solve_bilifting(i, f, BisimplicialMap(U, X, complete(U, X, a)), bottom)
    g, _ = pair_map(inclusion(u), f)
    vi = inclusion(v)
    squares2 = fillers2 = 0
    for bot in enumerate_maps(v.ambient, g.target):
        for top in enumerate_maps(v.as_sset(), g.source):
            if all(g(k, top(k, s)) == bot(k, vi(k, s)) for k in top.source.grades()
                   for s in range(top.source.size(k))):
                squares2 += 1
                fillers2 += len(solve_lifting(vi, g, top, bot))
    assert (squares, fillers) == (squares2, fillers2) == (32, 64)


def test_groupoid_nerves_are_reedy_fibrant():
    assert reedy_failure(to_terminal(iso_nerve(1, 2))) is None
    f, _, _ = nerve_map("groth_small")
    assert reedy_failure(f) is None


def test_identity_is_a_reedy_fibration():
    assert reedy_failure(identity_bimap(iso_nerve(1, 1))) is None


def test_vertical_horn_inclusion_is_not_a_reedy_fibration():
    H = named_subcomplex("horn", 2, 1, bound=2)
    f = box_map(identity_map(point(1)), inclusion(H))
    w = reedy_failure(f)
    assert w is not None and w["m"] == 0


def test_fixed_edge_space_on_the_edge_is_a_point():
    X = iso_nerve(1, 2)
    edge = named_subcomplex("edge01", 1, bound=1)
    for e in range(X.size((1, 0))):
        assert fixed_edge_space(edge, X, e).counts() == [1, 1, 1]


def test_fixed_edge_space_with_a_degenerate_edge():
    f, X, _ = nerve_map("walking_arrow")
    full = named_subcomplex("full", 2, bound=2)
    for v in range(X.size((0, 0))):
        e = X.hdegen(0, 0, 0, v)
        S = fixed_edge_space(full, X, e)
        brute = sum(1 for x in range(X.size((2, 0))) if X.hface(2, 0, 2, x) == e)
        assert S.size(0) == brute


def test_fixed_edge_space_on_the_zero_horn():
    f, X, _ = nerve_map("point")
    H = named_subcomplex("horn", 2, 0, bound=2)
    assert fixed_edge_space(H, X, 0).counts() == [1, 1, 1]


@pytest.mark.parametrize("name", ["point", "walking_arrow", "groth_small"])
def test_fixed_edge_squares_are_strict_pullbacks(name):
    f, X, _ = nerve_map(name)
    H = named_subcomplex("horn", 2, 0, bound=2)
    edges = range(X.size((1, 0))) if name != "groth_small" else range(0, X.size((1, 0)), 6)
    assert all(strict_pullback_check(H, f, e) for e in edges)


def test_generated_marking_of_a_degenerate_edge():
    X = iso_nerve(1, 1)
    for v in range(X.size((0, 0))):
        e = X.hdegen(0, 0, 0, v)
        assert generated_marking(X, e).marked == flat(X).path_closure().marked


def test_sharp_contains_every_marking():
    X = iso_nerve(1, 1)
    for e in range(X.size((1, 0))):
        m = generated_marking(X, e)
        assert m.marked <= sharp(X).marked
        assert m.respects_path_components()


@pytest.mark.parametrize("name", ["point", "walking_arrow"])
def test_pointwise_routes_agree(name):
    from spanfib.fibcheck import generated_edges, pointwise_marked_check
    f, X, _ = nerve_map(name)
    g = instance(name).segal_map
    H = named_subcomplex("horn", 2, 0, bound=2)
    for i, e in enumerate(g.source.levels[1].objects):
        a = pointwise_crosscheck(f, H, generated_marking(X, i))
        b = pointwise_marked_check(g, H, generated_edges(g.source, e))
        assert a["agree"] and b["agree"]
        assert (a["side1"], a["side2"]) == (b["side1"], b["side2"])


@pytest.mark.slow
@pytest.mark.parametrize("name", ["groth_small", "groth_violating"])
def test_pointwise_routes_agree_on_grothendieck_instances(name):
    test_pointwise_routes_agree(name)


def test_pointwise_to_a_terminal_target():
    X = arrow_nerve(2, 2)
    f = to_terminal(X)
    H = named_subcomplex("horn", 2, 0, bound=2)
    r = pointwise_crosscheck(f, H, sharp(X))
    assert r["agree"]


def test_pointwise_with_only_degenerate_marks():
    f, X, _ = nerve_map("walking_arrow")
    H = named_subcomplex("horn", 2, 0, bound=2)
    r = pointwise_crosscheck(f, H, flat(X))
    assert r["agree"]
    assert set(r["failing_edges"]) <= flat(X).marked


@pytest.mark.parametrize("n", [3, 4])
def test_left_spine_identities(n):
    targets = [nerve(walking_arrow(), n), nerve(walking_iso(), n)]
    r = left_spine_factorization_check(n, targets)
    assert r == {"n": n, "union": True, "pushout": True, "join": True, "ok": True}


def test_left_spine_base_case():
    assert named_subcomplex("left_spine", 2) == named_subcomplex("horn", 2, 0)
