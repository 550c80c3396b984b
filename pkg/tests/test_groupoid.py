from spanfib.fincat import FinFunctor, finset_skeleton, product, projection, walking_arrow, walking_iso
from spanfib.groupoid import (CoreGroupoid, FullSubgroupoid, GroupoidFunctor, PointGroupoid, StrictPullback,
                              equivalence_bruteforce, equivalence_verdict, fibers_contractible,
                              identity_functor, isofibration_failure, trivial_fibration_failure)


def core_functor(p: FinFunctor) -> GroupoidFunctor:
    return GroupoidFunctor(CoreGroupoid(p.source), CoreGroupoid(p.target), p.on_object, p)


def const(G, H, target_obj):
    unit = H.identity(target_obj)
    return GroupoidFunctor(G, H, lambda a: target_obj, lambda m: unit)


def both(F):
    v = equivalence_verdict(F)
    assert v.ok == equivalence_bruteforce(F)
    return v


def test_identity_is_an_equivalence():
    for C in (walking_iso(), finset_skeleton(2)):
        assert both(identity_functor(CoreGroupoid(C))).ok


def test_skeleton_inclusion_is_an_equivalence():
    G = CoreGroupoid(walking_iso())
    F = GroupoidFunctor(PointGroupoid(), G, lambda a: 0, lambda m: 0)
    assert both(F).ok


def test_collapsing_two_components_is_not_an_equivalence():
    G = CoreGroupoid(walking_arrow())   # two objects, no isomorphisms between them
    v = both(const(G, PointGroupoid(), ()))
    assert not v.ok and v.witness["reason"] == "not injective on components"


def test_forgetting_automorphisms_is_not_full():
    G = CoreGroupoid(finset_skeleton(2))
    F = GroupoidFunctor(G, G, lambda a: a, lambda m: G.identity(G.cat.src[m]))
    v = both(F)
    assert not v.ok and v.witness["reason"] == "not faithful"


def test_missing_component_is_not_essentially_surjective():
    G = CoreGroupoid(walking_arrow())
    v = both(GroupoidFunctor(PointGroupoid(), G, lambda a: 1, lambda m: 1))
    assert not v.ok and v.witness["reason"] == "not essentially surjective"


def test_projection_off_an_iso_factor():
    C = product(walking_iso(), walking_arrow())
    p = projection(walking_iso(), walking_arrow(), C, which=1)
    F = core_functor(p)
    assert both(F).ok
    assert isofibration_failure(F) is None
    assert trivial_fibration_failure(F) is None
    assert fibers_contractible(F) is None


def test_non_isofibration_has_a_witness():
    G, H = PointGroupoid(), CoreGroupoid(walking_iso())
    F = GroupoidFunctor(G, H, lambda a: 0, lambda m: 0)
    w = isofibration_failure(F)
    assert w is not None and w["target"] == "1"
    assert trivial_fibration_failure(F)["reason"] == "not surjective on objects"


def test_strict_pullback_over_a_point():
    A, B = CoreGroupoid(walking_iso()), CoreGroupoid(finset_skeleton(2))
    pt = PointGroupoid()
    P = StrictPullback(const(A, pt, ()), const(B, pt, ()))
    assert len(P.objects) == 2 * 3
    assert P.n_morphisms() == A.n_morphisms() * B.n_morphisms()


def test_full_subgroupoid():
    G = CoreGroupoid(finset_skeleton(2))
    S = FullSubgroupoid(G, lambda a: a != 0)
    assert S.objects == (1, 2)
    assert S.n_morphisms() == 1 + 2


def test_contractible_fibers_of_an_equivalence_onto_its_image():
    G = CoreGroupoid(walking_iso())
    w = fibers_contractible(const(G, PointGroupoid(), ()))
    assert w is None
    w = fibers_contractible(identity_functor(CoreGroupoid(finset_skeleton(2))))
    assert w is None
