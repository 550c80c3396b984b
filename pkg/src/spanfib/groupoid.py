"""Finite groupoids given by orbit enumeration, and diagram groupoids.

A groupoid here is described by ``isos_from(a)``: every morphism out of
``a`` paired with its target.  That single primitive yields hom-sets,
automorphism groups and connected components, and it is cheap to provide
for groupoids of diagrams (transport a diagram along a family of
isomorphisms).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Hashable, Iterable, Sequence

from .fincat import FinCategory


class FinGroupoid:
    """Base class; subclasses implement ``_isos_from``, ``compose``, ``identity``, ``inverse``."""

    def __init__(self, objects: Iterable[Hashable], name: str = ""):
        self.objects = tuple(objects)
        self.object_set = frozenset(self.objects)
        self.name = name
        self._iso_cache: dict = {}

    def _isos_from(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def inverse(self, m):
        raise NotImplementedError

    def isos_from(self, a) -> tuple:
        hit = self._iso_cache.get(a)
        if hit is None:
            hit = tuple(self._isos_from(a))
            self._iso_cache[a] = hit
        return hit

    def hom(self, a, b) -> list:
        return [m for t, m in self.isos_from(a) if t == b]

    def automorphisms(self, a) -> list:
        return self.hom(a, a)

    def orbit(self, a) -> frozenset:
        return frozenset(t for t, _ in self.isos_from(a))

    def components(self) -> list[list]:
        label: dict = {}
        comps: list = []
        for a in self.objects:
            if a in label:
                continue
            for b in self.orbit(a):
                label[b] = len(comps)
            comps.append([])
        for a in self.objects:
            comps[label[a]].append(a)
        return comps

    def n_morphisms(self) -> int:
        return sum(len(self.isos_from(a)) for a in self.objects)

    def is_contractible(self) -> bool:
        """Nonempty, connected, trivial automorphism group."""
        if not self.objects:
            return False
        a = self.objects[0]
        isos = self.isos_from(a)
        return len(isos) == len(self.objects) and len({t for t, _ in isos}) == len(self.objects)

    def __contains__(self, a) -> bool:
        return a in self.object_set

    def __len__(self):
        return len(self.objects)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}: {len(self.objects)} objects>"


class GroupoidFunctor:
    def __init__(self, source: FinGroupoid, target: FinGroupoid,
                 on_objects: Callable, on_morphisms: Callable, name: str = ""):
        self.source = source
        self.target = target
        self.on_objects = on_objects
        self.on_morphisms = on_morphisms
        self.name = name
        self._obj_cache: dict = {}

    def obj(self, a):
        hit = self._obj_cache.get(a)
        if hit is None:
            hit = self.on_objects(a)
            self._obj_cache[a] = hit
        return hit

    def mor(self, m):
        return self.on_morphisms(m)

    def violations(self, limit: int = 10) -> list[str]:
        """Objects must land in the target and morphisms must be preserved."""
        bad = []
        for a in self.source.objects:
            fa = self.obj(a)
            if fa not in self.target:
                bad.append(f"object {a!r} sent outside the target")
                continue
            for b, m in self.source.isos_from(a):
                if self.mor(m) not in self.target.hom(fa, self.obj(b)):
                    bad.append(f"morphism {m!r} not sent to a morphism {fa!r} -> {self.obj(b)!r}")
            if len(bad) >= limit:
                break
        return bad

    def compose(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        return GroupoidFunctor(other.source, self.target,
                               lambda a: self.obj(other.obj(a)),
                               lambda m: self.mor(other.mor(m)))


def identity_functor(G: FinGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(G, G, lambda a: a, lambda m: m, name="id")


# ---------------------------------------------------------------------------
# decisions


@dataclass
class Verdict:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def equivalence_verdict(F: GroupoidFunctor) -> Verdict:
    """Essentially surjective and fully faithful.

    For groupoids, fully faithful means injective on components plus a
    bijection on every automorphism group; both are checked exhaustively.
    """
    G, H = F.source, F.target
    hit_components = {}
    for comp in G.components():
        a = comp[0]
        fa = F.obj(a)
        key = H.orbit(fa)
        if key in hit_components:
            return Verdict(False, {"reason": "not injective on components",
                                   "objects": [repr(hit_components[key]), repr(a)]})
        hit_components[key] = a
        auts = G.automorphisms(a)
        images = {F.mor(m) for m in auts}
        if len(images) != len(auts):
            return Verdict(False, {"reason": "not faithful", "object": repr(a)})
        if len(images) != len(H.automorphisms(fa)):
            return Verdict(False, {"reason": "not full", "object": repr(a)})
    for comp in H.components():
        if H.orbit(comp[0]) not in hit_components:
            return Verdict(False, {"reason": "not essentially surjective", "object": repr(comp[0])})
    return Verdict(True)


def groupoid_equivalence(F: GroupoidFunctor) -> bool:
    return equivalence_verdict(F).ok


def equivalence_bruteforce(F: GroupoidFunctor) -> bool:
    """Hom-set-by-hom-set oracle for ``groupoid_equivalence``."""
    G, H = F.source, F.target
    for a in G.objects:
        for b in G.objects:
            src = G.hom(a, b)
            img = {F.mor(m) for m in src}
            if len(img) != len(src) or len(img) != len(H.hom(F.obj(a), F.obj(b))):
                return False
    images = [F.obj(a) for a in G.objects]
    for h in H.objects:
        if not any(H.hom(x, h) for x in images):
            return False
    return True


def isofibration_failure(F: GroupoidFunctor):
    """Witness of an iso out of ``F(a)`` with no lift out of ``a``, or ``None``."""
    G, H = F.source, F.target
    for a in G.objects:
        lifts = {(F.obj(b), F.mor(m)) for b, m in G.isos_from(a)}
        for t, h in H.isos_from(F.obj(a)):
            if (t, h) not in lifts:
                return {"object": repr(a), "iso": repr(h), "target": repr(t)}
    return None


def is_isofibration(F: GroupoidFunctor) -> bool:
    return isofibration_failure(F) is None


def trivial_fibration_failure(F: GroupoidFunctor):
    """Surjective on objects and fully faithful, i.e. the nerve map lifts against every boundary."""
    image = {F.obj(a) for a in F.source.objects}
    for b in F.target.objects:
        if b not in image:
            return {"reason": "not surjective on objects", "object": repr(b)}
    v = equivalence_verdict(F)
    return None if v.ok else v.witness


# ---------------------------------------------------------------------------
# constructions


class CoreGroupoid(FinGroupoid):
    """Core of a finite category; objects and morphisms are indices."""

    def __init__(self, C: FinCategory):
        super().__init__(range(C.n_objects), name=f"core({C.name})")
        self.cat = C

    def _isos_from(self, a):
        C = self.cat
        return [(C.tgt[m], m) for m in C.isos_out_of(a)]

    def compose(self, g, f):
        return self.cat.compose(g, f)

    def identity(self, a):
        return a

    def inverse(self, m):
        return self.cat.inverse(m)


class PointGroupoid(FinGroupoid):
    def __init__(self):
        super().__init__([()], name="pt")

    def _isos_from(self, a):
        return [((), ())]

    def compose(self, g, f):
        return ()

    def identity(self, a):
        return ()

    def inverse(self, m):
        return ()


class StrictPullback(FinGroupoid):
    """``G ×_K H`` for ``F: G -> K`` and ``E: H -> K``; objects and morphisms are pairs."""

    def __init__(self, F: GroupoidFunctor, E: GroupoidFunctor, name: str = ""):
        if F.target is not E.target:
            raise ValueError("cospan legs have different targets")
        by_image: dict = {}
        for b in E.source.objects:
            by_image.setdefault(E.obj(b), []).append(b)
        objs = [(a, b) for a in F.source.objects for b in by_image.get(F.obj(a), ())]
        super().__init__(objs, name=name or "pullback")
        self.F, self.E = F, E
        self.G, self.H = F.source, E.source

    def _isos_from(self, ab):
        a, b = ab
        right: dict = {}
        for b2, h in self.H.isos_from(b):
            right.setdefault((self.E.obj(b2), self.E.mor(h)), []).append((b2, h))
        out = []
        for a2, g in self.G.isos_from(a):
            for b2, h in right.get((self.F.obj(a2), self.F.mor(g)), ()):
                out.append(((a2, b2), (g, h)))
        return out

    def compose(self, x, y):
        return (self.G.compose(x[0], y[0]), self.H.compose(x[1], y[1]))

    def identity(self, ab):
        return (self.G.identity(ab[0]), self.H.identity(ab[1]))

    def inverse(self, m):
        return (self.G.inverse(m[0]), self.H.inverse(m[1]))

    def projections(self):
        p1 = GroupoidFunctor(self, self.G, lambda ab: ab[0], lambda m: m[0], name="pr1")
        p2 = GroupoidFunctor(self, self.H, lambda ab: ab[1], lambda m: m[1], name="pr2")
        return p1, p2


class FullSubgroupoid(FinGroupoid):
    """The objects of ``G`` satisfying ``keep`` with every isomorphism between them."""

    def __init__(self, G: FinGroupoid, keep: Callable, name: str = ""):
        self.ambient = G
        super().__init__([a for a in G.objects if keep(a)], name=name or f"sub({G.name})")

    def _isos_from(self, a):
        return [(t, m) for t, m in self.ambient.isos_from(a) if t in self.object_set]

    def compose(self, g, f):
        return self.ambient.compose(g, f)

    def identity(self, a):
        return self.ambient.identity(a)

    def inverse(self, m):
        return self.ambient.inverse(m)


class StrictFiber(FinGroupoid):
    """Objects over ``k`` and morphisms over ``id_k``."""

    def __init__(self, F: GroupoidFunctor, k, name: str = ""):
        super().__init__([a for a in F.source.objects if F.obj(a) == k], name=name or "fiber")
        self.F = F
        self.k = k
        self.base_identity = F.target.identity(k)

    def _isos_from(self, a):
        return [(b, m) for b, m in self.F.source.isos_from(a)
                if b in self.object_set and self.F.mor(m) == self.base_identity]

    def compose(self, g, f):
        return self.F.source.compose(g, f)

    def identity(self, a):
        return self.F.source.identity(a)

    def inverse(self, m):
        return self.F.source.inverse(m)


def fibers_contractible(F: GroupoidFunctor):
    """Witness of a base object whose strict fiber is not contractible, or ``None``."""
    by_image: dict = {}
    for a in F.source.objects:
        by_image.setdefault(F.obj(a), []).append(a)
    for k in F.target.objects:
        fib = StrictFiber(F, k)
        if not fib.is_contractible():
            return {"base": repr(k), "fiber_objects": len(fib.objects),
                    "components": len(fib.components()) if fib.objects else 0}
    return None


# ---------------------------------------------------------------------------
# diagrams indexed by a finite shape


@dataclass(frozen=True)
class Shape:
    """Elements, arrows ``x -> y`` and commutation triangles ``(x, y, z)``.

    A triangle asks that the arrow ``x -> z`` equal ``(y -> z) ∘ (x -> y)``.
    """

    elements: tuple
    arrows: tuple
    triangles: tuple = ()
    arrow_index: dict = field(init=False, compare=False, hash=False, repr=False)
    element_index: dict = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "arrow_index", {a: i for i, a in enumerate(self.arrows)})
        object.__setattr__(self, "element_index", {x: i for i, x in enumerate(self.elements)})

    def restrict_to(self, elements: Iterable, arrows: Iterable) -> "Shape":
        els = tuple(x for x in self.elements if x in set(elements))
        arr = tuple(a for a in self.arrows if a in set(arrows))
        aset = set(arr)
        tri = tuple(t for t in self.triangles
                    if (t[0], t[1]) in aset and (t[1], t[2]) in aset and (t[0], t[2]) in aset)
        return Shape(els, arr, tri)


def poset_shape(elements: Sequence, leq: Callable, allowed: Callable | None = None) -> Shape:
    """All strict relations (optionally filtered) and all 3-chains among them."""
    els = tuple(elements)
    ok = allowed or (lambda *xs: True)
    arrows = tuple((x, y) for x in els for y in els if x != y and leq(x, y) and ok(x, y))
    aset = set(arrows)
    tris = tuple((x, y, z) for x, y in arrows for z in els
                 if (y, z) in aset and (x, z) in aset and ok(x, y, z))
    return Shape(els, arrows, tris)


Diagram = tuple  # (objects per element, morphisms per arrow)


def transport(C: FinCategory, shape: Shape, diagram: Diagram, comps: Sequence[int]) -> Diagram:
    """Target of the natural isomorphism with components ``comps`` out of ``diagram``."""
    objs, arrs = diagram
    new_objs = tuple(C.tgt[c] for c in comps)
    ei = shape.element_index
    new_arrs = tuple(
        C.compose(C.compose(comps[ei[y]], a), C.inverse(comps[ei[x]]))
        for (x, y), a in zip(shape.arrows, arrs))
    return (new_objs, new_arrs)


def is_natural(C: FinCategory, shape: Shape, src: Diagram, tgt: Diagram, comps) -> bool:
    ei = shape.element_index
    for (x, y), a, b in zip(shape.arrows, src[1], tgt[1]):
        if C.compose(b, comps[ei[x]]) != C.compose(comps[ei[y]], a):
            return False
    return True


class DiagramGroupoid(FinGroupoid):
    """Given functors ``shape -> C`` and the natural isomorphisms between them.

    ``component_ok(i, m)`` can forbid components at element ``i`` (used for
    strict fibers, where some components must be identities).
    """

    def __init__(self, C: FinCategory, shape: Shape, objects: Iterable[Diagram],
                 component_ok: Callable | None = None, name: str = ""):
        super().__init__(objects, name=name)
        self.cat = C
        self.shape = shape
        self.component_ok = component_ok
        # transport builds plain tuples; hand back the stored object instead
        self._canon = {d: d for d in self.objects}

    def canonical(self, d):
        return self._canon.get(d, d)

    def _isos_from(self, d):
        C = self.cat
        choices = []
        for i, o in enumerate(d[0]):
            isos = C.isos_out_of(o)
            if self.component_ok is not None:
                isos = [m for m in isos if self.component_ok(i, m)]
            choices.append(isos)
        out = []
        for comps in iproduct(*choices):
            t = self._canon.get(transport(C, self.shape, d, comps))
            if t is not None:
                out.append((t, tuple(comps)))
        return out

    def compose(self, g, f):
        C = self.cat
        return tuple(C.compose(a, b) for a, b in zip(g, f))

    def identity(self, d):
        return tuple(d[0])

    def inverse(self, m):
        return tuple(self.cat.inverse(c) for c in m)


def enumerate_shape_functors(C: FinCategory, shape: Shape, allowed: dict | None = None,
                             fixed_objects: dict | None = None, fixed_arrows: dict | None = None):
    """Yield every functor ``shape -> C`` as ``(objects, arrows)``.

    ``allowed`` maps an arrow to a set of permitted morphisms.  Fixed values
    pin elements or arrows.
    """
    allowed = allowed or {}
    fixed_objects = fixed_objects or {}
    fixed_arrows = fixed_arrows or {}
    els = shape.elements
    ei = shape.element_index
    arrows = list(shape.arrows)
    # triangles indexed by the arrow that completes them last
    order = _arrow_order(shape)
    pos = {a: k for k, a in enumerate(order)}
    checks: dict = {}
    for x, y, z in shape.triangles:
        last = max(((x, y), (y, z), (x, z)), key=lambda a: pos[a])
        checks.setdefault(last, []).append((x, y, z))
    obj = [None] * len(els)
    for x, o in fixed_objects.items():
        obj[ei[x]] = o
    mor: dict = {}

    def triangle_ok(t):
        x, y, z = t
        return C.compose(mor[(y, z)], mor[(x, y)]) == mor[(x, z)]

    def assign_arrow(k):
        if k == len(order):
            yield from assign_free(0)
            return
        a = order[k]
        x, y = a
        ox, oy = obj[ei[x]], obj[ei[y]]
        if a in fixed_arrows:
            cands = [fixed_arrows[a]]
        elif ox is not None and oy is not None:
            cands = C.hom(ox, oy)
        elif ox is not None:
            cands = C.out_of(ox)
        elif oy is not None:
            cands = C.into(oy)
        else:
            cands = range(C.n_morphisms)
        perm = allowed.get(a)
        for m in cands:
            if perm is not None and m not in perm:
                continue
            if (ox is not None and C.src[m] != ox) or (oy is not None and C.tgt[m] != oy):
                continue
            setx = ox is None
            sety = oy is None and not (setx and x == y)
            if setx:
                obj[ei[x]] = C.src[m]
            if sety:
                obj[ei[y]] = C.tgt[m]
            mor[a] = m
            if all(triangle_ok(t) for t in checks.get(a, ())):
                yield from assign_arrow(k + 1)
            del mor[a]
            if setx:
                obj[ei[x]] = None
            if sety:
                obj[ei[y]] = None

    free = [i for i, x in enumerate(els) if not any(x in a for a in arrows)]

    def assign_free(j):
        if j == len(free):
            yield (tuple(obj), tuple(mor[a] for a in arrows))
            return
        i = free[j]
        if obj[i] is not None:
            yield from assign_free(j + 1)
            return
        for o in range(C.n_objects):
            obj[i] = o
            yield from assign_free(j + 1)
        obj[i] = None

    yield from assign_arrow(0)


def _arrow_order(shape: Shape) -> list:
    """Order arrows so that each one touches already-visited elements when possible."""
    remaining = list(shape.arrows)
    seen: set = set()
    order = []
    while remaining:
        best = max(remaining, key=lambda a: ((a[0] in seen) + (a[1] in seen), -remaining.index(a)))
        remaining.remove(best)
        order.append(best)
        seen.update(best)
    return order
