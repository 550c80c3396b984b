"""Randomized invariants; each property is checked against an independent route where one exists."""

from itertools import product
from math import gcd

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from spanfib.bisimp import adjunction_counts
from spanfib.catfile import dump, dump_category, equivalent, parse
from spanfib.fincat import Triple, compute_pullback, divisor_lattice, from_poset, is_pullback, nerve
from spanfib.groupoid import FinGroupoid, GroupoidFunctor, equivalence_bruteforce, equivalence_verdict
from spanfib.instances import BUILDERS
from spanfib.simpset import Subcomplex, standard_simplex
from spanfib.spancat import SigmaDiagram, compose_spans
from spanfib.subdiv import compose_monotone, sigma_map, sigma_poset

from conftest import instance
from test_bisimp import iso_nerve

FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def posets(draw, max_size=4):
    n = draw(st.integers(1, max_size))
    rel = {(i, j): draw(st.booleans()) for i in range(n) for j in range(i + 1, n)}
    # transitive closure of a relation on an already sorted set stays antisymmetric
    below = {(i, i) for i in range(n)} | {k for k, v in rel.items() if v}
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if (i, k) in below and (k, j) in below:
                    below.add((i, j))
    names = [f"p{i}" for i in range(n)]
    return from_poset(names, lambda a, b: (int(a[1:]), int(b[1:])) in below, name="P")


@st.composite
def monotone(draw, m, n):
    return tuple(sorted(draw(st.lists(st.integers(0, n), min_size=m + 1, max_size=m + 1))))


@FAST
@given(posets())
def test_poset_categories_obey_the_laws(P):
    assert P.law_violations() == []
    assert P.n_morphisms == sum(len(P.hom(a, b)) for a in range(P.n_objects) for b in range(P.n_objects))
    assert all(len(P.hom(a, b)) <= 1 for a in range(P.n_objects) for b in range(P.n_objects))


@FAST
@given(posets())
def test_nerves_satisfy_the_simplicial_identities(P):
    X = nerve(P, 3)
    assert X.check_identities() == []
    # a chain of length k in a poset is a weakly increasing (k+1)-tuple
    leq = {(P.src[m], P.tgt[m]) for m in range(P.n_morphisms)}
    for k in range(4):
        chains = sum(1 for c in product(range(P.n_objects), repeat=k + 1)
                     if all((c[i], c[i + 1]) in leq for i in range(k)))
        assert X.size(k) == chains


@FAST
@given(posets())
def test_opposite_is_an_involution(P):
    Q = P.opposite()
    assert Q.law_violations() == []
    assert nerve(Q, 2).counts() == nerve(P, 2).counts()
    R = Q.opposite()
    assert R.objects == P.objects and R.mor_names == P.mor_names
    assert all(R.src[m] == P.src[m] and R.tgt[m] == P.tgt[m] for m in range(P.n_morphisms))


@FAST
@given(posets())
def test_pullback_certificates_replay(P):
    for f, g in product(range(P.n_morphisms), repeat=2):
        if P.tgt[f] != P.tgt[g]:
            continue
        sq = compute_pullback(P, f, g)
        # in a poset the pullback is the greatest common lower bound
        lower = [c for c in range(P.n_objects) if P.hom(c, P.src[f]) and P.hom(c, P.src[g])]
        greatest = [c for c in lower if all(P.hom(d, c) for d in lower)]
        assert (sq is None) == (not greatest)
        if sq is not None:
            assert sq.apex in greatest
            assert sq.replay(P)
            assert is_pullback(P, f, g, sq.apex, sq.g_prime, sq.f_prime)


@FAST
@given(posets())
def test_catfile_round_trip(P):
    d = parse(dump(parse(_dump_with_classes(P))))
    assert equivalent(d, parse(_dump_with_classes(P)))
    assert d.category().n_morphisms == P.n_morphisms


def _dump_with_classes(P):
    return dump_category(P, Triple.from_kinds(P, "all", "isos"))


@FAST
@given(st.data())
def test_sigma_maps_are_functorial(data):
    m, n, k = (data.draw(st.integers(0, 3)) for _ in range(3))
    alpha = data.draw(monotone(m, n))
    beta = data.draw(monotone(n, k))
    f, g = sigma_map(alpha), sigma_map(beta)
    h = sigma_map(compose_monotone(beta, alpha))
    Pm, Pn = sigma_poset(m), sigma_poset(n)
    for x in Pm.elements:
        assert f(x) in Pn.elements
        assert h(x) == g(f(x))
    for x, y in product(Pm.elements, repeat=2):
        if Pm.leq(x, y):
            assert Pn.leq(f(x), f(y))


# ---------------------------------------------------------------------------
# groupoids whose components are connected with cyclic automorphism groups


class CyclicGroupoid(FinGroupoid):
    """Objects ``(c, i)``; component ``c`` has automorphism group Z/orders[c]."""

    def __init__(self, sizes, orders):
        super().__init__([(c, i) for c, s in enumerate(sizes) for i in range(s)])
        self.orders = orders

    def _isos_from(self, a):
        c = a[0]
        return [(b, (a, b, g)) for b in self.objects if b[0] == c for g in range(self.orders[c])]

    def compose(self, h, g):
        return (g[0], h[1], (g[2] + h[2]) % self.orders[g[0][0]])

    def identity(self, a):
        return (a, a, 0)

    def inverse(self, m):
        return (m[1], m[0], -m[2] % self.orders[m[0][0]])


@st.composite
def cyclic_functors(draw):
    def groupoid():
        k = draw(st.integers(1, 3))
        sizes = draw(st.lists(st.integers(1, 2), min_size=k, max_size=k))
        orders = draw(st.lists(st.integers(1, 4), min_size=k, max_size=k))
        return CyclicGroupoid(sizes, orders)

    G, H = groupoid(), groupoid()
    comp = [draw(st.integers(0, len(H.orders) - 1)) for _ in G.orders]
    # g -> t*g is a homomorphism Z/n -> Z/m exactly when m divides n*t
    mult = [draw(st.sampled_from([t for t in range(H.orders[d]) if (n * t) % H.orders[d] == 0]))
            for n, d in zip(G.orders, comp)]
    targets = {a: draw(st.sampled_from([b for b in H.objects if b[0] == comp[a[0]]])) for a in G.objects}

    def on_mor(m):
        a, b, g = m
        return (targets[a], targets[b], (mult[a[0]] * g) % H.orders[comp[a[0]]])

    return GroupoidFunctor(G, H, targets.__getitem__, on_mor), comp, mult


@settings(max_examples=150, deadline=None)
@given(cyclic_functors())
def test_equivalence_routes_agree_on_cyclic_groupoids(args):
    F, comp, mult = args
    G, H = F.source, F.target
    assert F.violations() == []
    # equivalence iff bijective on components and an isomorphism on each automorphism group
    expected = (sorted(comp) == list(range(len(H.orders)))
                and all(G.orders[c] == H.orders[d] and gcd(mult[c], G.orders[c]) == 1
                        for c, d in enumerate(comp)))
    assert equivalence_verdict(F).ok == equivalence_bruteforce(F) == expected


# ---------------------------------------------------------------------------

LATTICES = [6, 8, 12, 18, 30]


@FAST
@given(st.sampled_from(LATTICES), st.data())
def test_composing_with_a_degenerate_span_keeps_the_apex(n, data):
    t = Triple.from_kinds(divisor_lattice(n))
    C = t.cat
    b = data.draw(st.sampled_from(range(C.n_morphisms)))
    f = data.draw(st.sampled_from(C.out_of(C.src[b])))
    s1 = SigmaDiagram([C.tgt[b], C.src[b], C.tgt[f]], [b, f])
    x = C.tgt[f]
    F = compose_spans(t, s1, SigmaDiagram([x, x, x], [x, x]))
    assert F.obj((0, 2)) == C.src[b]
    G = compose_spans(t, SigmaDiagram([C.tgt[b]] * 3, [C.tgt[b]] * 2), s1)
    assert G.obj((0, 2)) == C.src[b]


@st.composite
def subcomplexes(draw, n):
    D = standard_simplex(n, 1)
    cells = [(k, x) for k in D.grades() for x in range(D.size(k))]
    picks = draw(st.lists(st.sampled_from(cells), min_size=1, max_size=2, unique=True))
    return Subcomplex.generated(D, picks).as_sset()


@settings(max_examples=30, deadline=None)
@given(subcomplexes(1), subcomplexes(1))
def test_adjunction_counts_agree(A, B):
    assert len(set(adjunction_counts(A, B, iso_nerve(1, 1)))) == 1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["walking_iso", "groth_small", "groth_violating"]), st.data())
def test_cocartesian_verdicts_are_orbit_invariant(name, data):
    inst = instance(name)
    G1 = inst.segal_map.source.levels[1]
    F = data.draw(st.sampled_from(G1.objects))
    other = data.draw(st.sampled_from(sorted(G1.orbit(F), key=repr)))
    assert inst.segal.is_cocartesian(F) == inst.segal.is_cocartesian(other)


def test_builders_are_deterministic():
    for name, build in BUILDERS.items():
        assert equivalent(build(), build())
