from itertools import combinations_with_replacement
from math import comb

import pytest

from spanfib.fincat import nerve, walking_arrow, walking_iso, terminal
from spanfib.simpset import (BoundError, LiftingError, SimplicialMap, Subcomplex, count_maps, enumerate_maps,
                             fiber_product, find_rlp_failure, has_rlp, identity_map, map_to_point,
                             named_subcomplex, point, simplex_subcomplex, solve_lifting, standard_simplex,
                             face_of_simplex)


def edges(sub):
    return {lab for lab in sub.nondegenerate_labels(1)}


def test_point_is_degenerate_above_zero():
    P = standard_simplex(0, 4)
    assert P.counts() == [1] * 5
    assert P.nondegenerate_counts() == [1, 0, 0, 0, 0]


def test_simplex_level_counts_match_monotone_map_count():
    # monotone maps [k] -> [n] are multisets of size k+1 from n+1 values
    D = standard_simplex(2, 3)
    assert D.size(1) == 6
    assert len(D.nondegenerate(1)) == 3
    for k in range(4):
        assert D.size(k) == comb(2 + k + 1, k + 1)
        assert set(D.labels[k]) == set(combinations_with_replacement(range(3), k + 1))


def test_top_simplex_is_unique():
    assert standard_simplex(4).nondegenerate_counts()[4] == 1


def test_identities_hold_on_simplices():
    for n in range(4):
        assert standard_simplex(n, 4).check_identities() == []


def test_degenerate_witness_replays():
    D = standard_simplex(2, 3)
    for k in range(1, 4):
        for x in range(D.size(k)):
            if D.is_degenerate(k, x):
                i, level, tau = D.witness(k, x)
                assert level == k - 1 and D.degen(level, i, tau) == x


def test_left_spine_two_is_the_zero_horn():
    assert named_subcomplex("left_spine", 2) == named_subcomplex("horn", 2, 0)


def test_spine_and_left_spine_edges():
    assert edges(named_subcomplex("spine", 3)) == {(0, 1), (1, 2), (2, 3)}
    assert edges(named_subcomplex("left_spine", 4)) == {(0, 1), (0, 2), (2, 3), (3, 4)}


def test_horn_decomposition_n3():
    amb = standard_simplex(3, 3)
    L = named_subcomplex("left_spine", 3, ambient=amb)
    d1 = face_of_simplex(3, 1, ambient=amb)
    Q = face_of_simplex(3, 2, ambient=amb) | face_of_simplex(3, 3, ambient=amb)
    assert (L | d1 | Q) == named_subcomplex("horn", 3, 0, ambient=amb)


def test_union_and_intersection():
    amb = standard_simplex(3, 3)
    A = named_subcomplex("horn", 3, 1, ambient=amb)
    sp = named_subcomplex("spine", 3, ambient=amb)
    bd = named_subcomplex("boundary", 3, ambient=amb)
    assert (A | A) == A
    assert (sp & bd) == sp
    assert A.is_closed() and (A & sp).is_closed()


def test_mixing_ambients_is_rejected():
    with pytest.raises(ValueError):
        named_subcomplex("spine", 2, bound=2) | named_subcomplex("spine", 3, bound=3)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_maps_from_a_point(n):
    assert count_maps(point(n), standard_simplex(n, n)) == n + 1


def test_maps_into_arrow_nerve():
    N = nerve(walking_arrow(), 2)
    D1 = standard_simplex(1, 2)
    maps = enumerate_maps(D1, N)
    assert len(maps) == 3
    assert all(m.violations() == [] for m in maps)
    assert count_maps(D1, point(2)) == 1


def test_lifting_against_an_isomorphism_is_unique():
    D = standard_simplex(2, 2)
    A = named_subcomplex("horn", 2, 1, bound=2).inclusion()
    i = SimplicialMap(A.source, D, A.components)
    f = identity_map(D)
    top = SimplicialMap(A.source, D, A.components)
    assert len(solve_lifting(i, f, top, identity_map(D))) == 1


def test_inner_horn_in_a_nerve_has_one_filler():
    N = nerve(walking_iso(), 2)
    H = named_subcomplex("horn", 2, 1, bound=2)
    D = H.ambient
    inc = SimplicialMap(H.as_sset(), D, H.inclusion().components)
    f = map_to_point(N)
    bottom = map_to_point(D)
    tops = enumerate_maps(H.as_sset(), N)
    assert tops
    for top in tops:
        assert len(solve_lifting(inc, f, top, bottom)) == 1


def test_identity_inclusion_has_only_the_top_as_filler():
    D = standard_simplex(1, 1)
    N = nerve(walking_arrow(), 1)
    for top in enumerate_maps(D, N):
        fillers = solve_lifting(identity_map(D), identity_map(N), top, top)
        assert [h.key() for h in fillers] == [top.key()]


def test_noncommuting_square_is_rejected():
    D = standard_simplex(1, 1)
    N = nerve(walking_arrow(), 1)
    a, b = enumerate_maps(D, N)[:2]
    with pytest.raises(LiftingError):
        solve_lifting(identity_map(D), identity_map(N), a, b)


def test_groupoid_nerves_are_kan():
    for C in (walking_iso(), terminal()):
        assert has_rlp(map_to_point(nerve(C, 3)), "horns", 3)


def test_identity_lifts_everything():
    N = nerve(walking_arrow(), 3)
    for family in ("boundaries", "horns", "inner_horns", "left_horns"):
        assert has_rlp(identity_map(N), family, 3)


def test_horn_inclusion_is_not_a_trivial_fibration():
    H = named_subcomplex("horn", 2, 1, bound=2)
    inc = SimplicialMap(H.as_sset(), H.ambient, H.inclusion().components)
    w = find_rlp_failure(inc, "boundaries", 2)
    assert w is not None and w["generator"] == "boundary(1)"


def test_arrow_nerve_is_not_kan():
    assert not has_rlp(map_to_point(nerve(walking_arrow(), 2)), "horns", 2)


def test_fiber_product_over_a_point_is_the_product():
    A, B = standard_simplex(1, 2), standard_simplex(1, 2)
    P, _, _ = fiber_product(map_to_point(A), map_to_point(B))
    assert P.counts() == [a * b for a, b in zip(A.counts(), B.counts())]
    assert P.check_identities() == []


def test_generated_subcomplex_is_face_closed():
    D = standard_simplex(3, 3)
    S = Subcomplex.generated(D, [(2, D.index[2][(0, 1, 3)])])
    assert S == simplex_subcomplex(3, [(0, 1, 3)], ambient=D)
    assert edges(S) == {(0, 1), (0, 3), (1, 3)}


def test_dimension_cap():
    with pytest.raises(BoundError):
        standard_simplex(50)
