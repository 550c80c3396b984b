from itertools import product

import pytest

from spanfib.simpset import identity_map, named_subcomplex, standard_simplex
from spanfib.subdiv import (codegeneracy, coface, compose_monotone, retraction_pair, sd, sigma_map,
                            sigma_poset)

# covering relations of the interval poset on [4], each (i, j) above (i, j-1) and (i+1, j)
SIGMA4_HASSE = {
    "01>00", "01>11", "02>01", "02>12", "03>02", "03>13", "04>03", "04>14", "12>11", "12>22",
    "13>12", "13>23", "14>13", "14>24", "23>22", "23>33", "24>23", "24>34", "34>33", "34>44",
}


def covers(P):
    return {f"{a[0]}{a[1]}>{b[0]}{b[1]}" for a, b in P.hasse}


@pytest.mark.parametrize("n", range(7))
def test_element_count(n):
    assert len(sigma_poset(n)) == (n + 1) * (n + 2) // 2


def test_order_is_reverse_interval_inclusion():
    P = sigma_poset(3)
    for x, y in product(P.elements, repeat=2):
        assert P.leq(x, y) == (x[0] <= y[0] <= y[1] <= x[1])


def test_sigma4_covering_relations():
    P = sigma_poset(4)
    assert len(P) == 15
    assert covers(P) == SIGMA4_HASSE


def test_small_sigma():
    assert list(sigma_poset(0).elements) == [(0, 0)]
    assert covers(sigma_poset(1)) == {"01>00", "01>11"}


def test_sigma_map_identity_and_face():
    f = sigma_map((0, 1, 2))
    assert all(f(x) == x for x in sigma_poset(2).elements)
    d1 = sigma_map(coface(2, 1))
    assert coface(2, 1) == (0, 2)
    assert d1((0, 1)) == (0, 2)
    s0 = sigma_map(codegeneracy(0, 0))
    assert {s0(x) for x in sigma_poset(1).elements} == {(0, 0)}


def test_sigma_map_is_monotone_and_functorial():
    P2, P3 = sigma_poset(2), sigma_poset(3)
    for alpha in [(0, 1, 3), (0, 0, 2), (1, 2, 2), (0, 2, 3)]:
        f = sigma_map(alpha)
        for x, y in product(P2.elements, repeat=2):
            if P2.leq(x, y):
                assert P3.leq(f(x), f(y))
    beta, alpha = (0, 2, 3, 3), (0, 1, 3)
    g, f = sigma_map(beta), sigma_map(alpha)
    h = sigma_map(compose_monotone(beta, alpha))
    assert all(h(x) == g(f(x)) for x in P2.elements)


def test_sd_of_an_edge_is_a_span():
    S = sd(named_subcomplex("full", 1, bound=2))
    assert S.counts()[0] == 3
    assert S.nondegenerate_counts()[:3] == [3, 2, 0]


def test_sd_of_a_point():
    assert sd(named_subcomplex("full", 0, bound=3)).counts() == standard_simplex(0, 3).counts()


def test_sd_of_the_zero_horn():
    amb = standard_simplex(2, 2)
    S = sd(named_subcomplex("horn", 2, 0, ambient=amb))
    assert set(S.labels[0]) == {((0, 0),), ((0, 1),), ((1, 1),), ((0, 2),), ((2, 2),)}
    whole = sd(named_subcomplex("full", 2, ambient=amb))
    assert set(S.labels[1]) <= set(whole.labels[1])


def test_retraction_pair():
    i, r = retraction_pair(2)
    vertex = {lab: k for k, lab in enumerate(i.target.labels[0])}
    image_of_1 = i.target.labels[0][i(0, 1)]
    assert image_of_1 == ((1, 2),)
    assert r.source.labels[0][vertex[((0, 1),)]] == ((0, 1),)
    assert r(0, vertex[((0, 1),)]) == 0
    for n in range(5):
        i, r = retraction_pair(n)
        assert r.compose(i).key() == identity_map(i.source).key()
