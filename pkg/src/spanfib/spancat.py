"""Span categories of a triple, level by level, and the span Segal space.

An ``n``-simplex of the span category is a functor out of the interval
poset on ``[n]`` whose squares are pullbacks with egressive backward legs
and ingressive forward legs.  Diagrams are stored on covering relations
only; composites along longer relations are derived on demand.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from .fincat import (CategoryError, FinCategory, FinFunctor, Triple,
                     functor_of_triples_violations, is_adequate, is_pullback, pullback_cones,
                     compute_pullback)
from .groupoid import (CoreGroupoid, DiagramGroupoid, FinGroupoid, GroupoidFunctor, Shape,
                       enumerate_shape_functors, equivalence_verdict, poset_shape)
from .simpset import SimplicialMap, Subcomplex, TruncatedSimplicialSet, check_cap, named_subcomplex
from .subdiv import codegeneracy, coface, sigma_map, sigma_poset


class InadequateTriple(ValueError):
    pass


class SigmaDiagram(tuple):
    """``(objects, generators)`` over the interval poset on ``[n]``.

    ``objects`` follows ``sigma_poset(n).elements`` and ``generators``
    follows ``sigma_poset(n).hasse``.  Equality is strict equality of these
    two tuples.
    """

    __slots__ = ()

    def __new__(cls, objs: Sequence[int], gens: Sequence[int]):
        return super().__new__(cls, (tuple(objs), tuple(gens)))

    @property
    def objs(self) -> tuple:
        return self[0]

    @property
    def gens(self) -> tuple:
        return self[1]

    @property
    def n(self) -> int:
        k = len(self[0])
        n = 0
        while (n + 1) * (n + 2) // 2 < k:
            n += 1
        return n

    @property
    def poset(self):
        return sigma_poset(self.n)

    def obj(self, x) -> int:
        return self[0][self.poset.index[x]]

    def gen(self, x, y) -> int:
        return self[1][self.poset.hasse_index[(x, y)]]


def relation(C: FinCategory, F: SigmaDiagram, x, y) -> int:
    """The morphism ``F(x) -> F(y)`` for ``x <= y``, composed along generators."""
    if x == y:
        return F.obj(x)
    i, j = x
    if y[1] < j:
        step = (i, j - 1)
    else:
        step = (i + 1, j)
    return C.compose(relation(C, F, step, y), F.gen(x, step))


def precompose(C: FinCategory, F: SigmaDiagram, alpha: Sequence[int]) -> SigmaDiagram:
    """``F`` restricted along the interval map induced by ``alpha: [m] -> [n]``."""
    m = len(alpha) - 1
    Q = sigma_poset(m)
    s = sigma_map(alpha)
    objs = [F.obj(s(x)) for x in Q.elements]
    gens = [relation(C, F, s(x), s(y)) for x, y in Q.hasse]
    return SigmaDiagram(objs, gens)


def postcompose(p: FinFunctor, F: SigmaDiagram) -> SigmaDiagram:
    return SigmaDiagram([p.on_object(o) for o in F.objs], [p(g) for g in F.gens])


def diagram_violations(C: FinCategory, F: SigmaDiagram) -> list[str]:
    """Generators must match endpoints and every elementary square must commute."""
    P = F.poset
    bad = []
    for (x, y), g in zip(P.hasse, F.gens):
        if C.src[g] != F.obj(x) or C.tgt[g] != F.obj(y):
            bad.append(f"generator {x}->{y} has wrong endpoints")
    if bad:
        return bad
    for top, back, front, bottom in P.squares():
        lhs = C.compose(F.gen(back, bottom), F.gen(top, back))
        rhs = C.compose(F.gen(front, bottom), F.gen(top, front))
        if lhs != rhs:
            bad.append(f"square at {top} does not commute")
    return bad


def is_acart(F: SigmaDiagram, t: Triple) -> bool:
    return acart_failure(F, t) is None


def acart_failure(F: SigmaDiagram, t: Triple):
    """First offending square of the aCart condition, or ``None``."""
    C = t.cat
    if diagram_violations(C, F):
        return {"reason": "not a functor"}
    for a, b, c, d in F.poset.rectangles():
        back_top = relation(C, F, a, b)
        back_bot = relation(C, F, c, d)
        fwd_top = relation(C, F, a, c)
        fwd_bot = relation(C, F, b, d)
        if back_top not in t.egressive or back_bot not in t.egressive:
            return {"reason": "backward leg not egressive", "square": (a, b, c, d)}
        if fwd_top not in t.ingressive or fwd_bot not in t.ingressive:
            return {"reason": "forward leg not ingressive", "square": (a, b, c, d)}
        if not is_pullback(C, fwd_bot, back_bot, F.obj(a), back_top, fwd_top):
            return {"reason": "not a pullback", "square": (a, b, c, d)}
    return None


# ---------------------------------------------------------------------------
# enumeration


def level_one_spans(t: Triple) -> list[tuple[int, int, int]]:
    """``(apex, backward leg, forward leg)`` with egressive back and ingressive front."""
    C = t.cat
    out = []
    for y in range(C.n_objects):
        backs = [m for m in C.out_of(y) if m in t.egressive]
        fwds = [m for m in C.out_of(y) if m in t.ingressive]
        out.extend((y, b, f) for b in backs for f in fwds)
    return out


def enumerate_acart(t: Triple, n: int) -> list[SigmaDiagram]:
    """All aCart diagrams at level ``n``, built row by row from pullback cones.

    Level-one cells are arbitrary spans; each wider cell ranges over all
    pullback cones of the cospan below it.  Requires an adequate triple.
    """
    check_cap(n)
    C = t.cat
    P = sigma_poset(n)
    if n == 0:
        return sorted(SigmaDiagram([o], []) for o in range(C.n_objects))
    spans = level_one_spans(t)
    by_source: dict = {}
    for s in spans:
        by_source.setdefault(C.tgt[s[1]], []).append(s)
    cells = [(i, j) for l in range(2, n + 1) for i in range(0, n - l + 1) for j in (i + l,)]
    out = []
    obj = {}
    gen = {}

    def fill(k):
        if k == len(cells):
            out.append(SigmaDiagram([obj[x] for x in P.elements], [gen[h] for h in P.hasse]))
            return
        i, j = cells[k]
        f = gen[((i, j - 1), (i + 1, j - 1))]
        g = gen[((i + 1, j), (i + 1, j - 1))]
        for apex, gp, fp in pullback_cones(C, f, g):
            obj[(i, j)] = apex
            gen[((i, j), (i, j - 1))] = gp
            gen[((i, j), (i + 1, j))] = fp
            fill(k + 1)

    def chain(i, start):
        if i == n:
            fill(0)
            return
        for y, b, f in by_source.get(start, ()) if start is not None else spans:
            obj[(i, i)] = C.tgt[b]
            obj[(i + 1, i + 1)] = C.tgt[f]
            obj[(i, i + 1)] = y
            gen[((i, i + 1), (i, i))] = b
            gen[((i, i + 1), (i + 1, i + 1))] = f
            chain(i + 1, C.tgt[f])

    chain(0, None)
    out.sort()
    return out


def enumerate_all_sigma_functors(C: FinCategory, n: int) -> list[SigmaDiagram]:
    """Every functor from the interval poset to ``C`` (slow; used as an oracle)."""
    P = sigma_poset(n)
    shape = poset_shape(P.elements, lambda x, y: P.leq(x, y))
    out = []
    for objs, arrs in enumerate_shape_functors(C, shape):
        amap = dict(zip(shape.arrows, arrs))
        out.append(SigmaDiagram(objs, [amap[h] for h in P.hasse]))
    out.sort()
    return out


class SpanLevel:
    """aCart diagrams of one level, with their index."""

    def __init__(self, t: Triple, n: int, members: list[SigmaDiagram]):
        self.triple = t
        self.n = n
        self.members = members
        self.index = {F: k for k, F in enumerate(members)}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _require_adequate(t: Triple):
    rep = is_adequate(t)
    if not rep.ok:
        raise InadequateTriple(f"triple is not adequate: {rep.witnesses[0]}")


def span_level(t: Triple, n: int) -> SpanLevel:
    _require_adequate(t)
    return SpanLevel(t, n, enumerate_acart(t, n))


def span_simplicial_set(t: Triple, bound: int) -> TruncatedSimplicialSet:
    """The span category as a truncated simplicial set with diagram labels."""
    _require_adequate(t)
    check_cap(bound, "bound")
    C = t.cat
    levels = [enumerate_acart(t, k) for k in range(bound + 1)]
    return TruncatedSimplicialSet.build(
        bound, levels,
        lambda k, i, F: precompose(C, F, coface(k, i)),
        lambda k, i, F: precompose(C, F, codegeneracy(k, i)),
        name=f"Span({t.name or C.name})")


def compose_spans(t: Triple, s1: SigmaDiagram, s2: SigmaDiagram, choice: str = "least") -> SigmaDiagram:
    """The 2-simplex whose apex is the chosen pullback of the middle cospan."""
    C = t.cat
    if s1.n != 1 or s2.n != 1:
        raise ValueError("compose_spans takes two spans")
    if s1.obj((1, 1)) != s2.obj((0, 0)):
        raise ValueError("spans are not composable")
    f = s1.gen((0, 1), (1, 1))
    g = s2.gen((0, 1), (0, 0))
    sq = compute_pullback(C, f, g, choice=choice)
    if sq is None:
        raise InadequateTriple("middle cospan has no pullback")
    P = sigma_poset(2)
    obj = {(0, 0): s1.obj((0, 0)), (1, 1): s1.obj((1, 1)), (2, 2): s2.obj((1, 1)),
           (0, 1): s1.obj((0, 1)), (1, 2): s2.obj((0, 1)), (0, 2): sq.apex}
    gen = {((0, 1), (0, 0)): s1.gen((0, 1), (0, 0)), ((0, 1), (1, 1)): f,
           ((1, 2), (1, 1)): g, ((1, 2), (2, 2)): s2.gen((0, 1), (1, 1)),
           ((0, 2), (0, 1)): sq.g_prime, ((0, 2), (1, 2)): sq.f_prime}
    return SigmaDiagram([obj[x] for x in P.elements], [gen[h] for h in P.hasse])


def span_of_functor(p: FinFunctor, s: Triple, t: Triple, bound: int,
                    source: TruncatedSimplicialSet | None = None,
                    target: TruncatedSimplicialSet | None = None) -> SimplicialMap:
    """Post-composition ``Span(s) -> Span(t)``."""
    bad = functor_of_triples_violations(p, s, t)
    if bad:
        raise CategoryError(bad)
    X = source or span_simplicial_set(s, bound)
    Y = target or span_simplicial_set(t, bound)
    comps = [[Y.index[k][postcompose(p, F)] for F in X.labels[k]] for k in X.grades()]
    return SimplicialMap(X, Y, comps)


# ---------------------------------------------------------------------------
# simplicial groupoids


class SimplicialGroupoid:
    """Groupoids ``G_0 .. G_M`` with a functor ``G_n -> G_m`` for each monotone ``[m] -> [n]``.

    Subclasses implement ``_make_operator(n, alpha)``.
    """

    def __init__(self, levels: Sequence[FinGroupoid], name: str = ""):
        self.levels = list(levels)
        self.bound = len(self.levels) - 1
        self.name = name
        self._ops: dict = {}

    def operator(self, n: int, alpha: Sequence[int]) -> GroupoidFunctor:
        key = (n, tuple(alpha))
        hit = self._ops.get(key)
        if hit is None:
            hit = self._make_operator(n, tuple(alpha))
            self._ops[key] = hit
        return hit

    def _make_operator(self, n, alpha):
        raise NotImplementedError

    def face(self, m: int, i: int) -> GroupoidFunctor:
        """``d_i: G_m -> G_{m-1}``."""
        return self.operator(m, coface(m, i))

    def degen(self, m: int, i: int) -> GroupoidFunctor:
        """``s_i: G_m -> G_{m+1}``."""
        return self.operator(m, codegeneracy(m, i))

    def identity_violations(self) -> list[str]:
        """Simplicial identities checked on objects and morphisms."""
        bad = []
        M = self.bound
        for m in range(2, M + 1):
            for j in range(m + 1):
                for i in range(j):
                    lhs = self.face(m - 1, i).compose(self.face(m, j))
                    rhs = self.face(m - 1, j - 1).compose(self.face(m, i))
                    bad += _functor_differences(self.levels[m], lhs, rhs, f"d{i}d{j}")
        for m in range(M):
            for j in range(m + 1):
                for i in range(m + 2):
                    lhs = self.face(m + 1, i).compose(self.degen(m, j))
                    if i < j:
                        rhs = self.degen(m - 1, j - 1).compose(self.face(m, i))
                    elif i in (j, j + 1):
                        rhs = None
                    else:
                        rhs = self.degen(m - 1, j).compose(self.face(m, i - 1))
                    bad += _functor_differences(self.levels[m], lhs, rhs, f"d{i}s{j}")
        return bad


def _functor_differences(G: FinGroupoid, F1, F2, label) -> list[str]:
    out = []
    for a in G.objects:
        b1 = F1.obj(a)
        b2 = a if F2 is None else F2.obj(a)
        if b1 != b2:
            out.append(f"{label} differs on object {a!r}")
            continue
        for _, m in G.isos_from(a):
            if F1.mor(m) != (m if F2 is None else F2.mor(m)):
                out.append(f"{label} differs on a morphism out of {a!r}")
                break
    return out


class SimplicialGroupoidMap:
    """Level-wise functors ``X_m -> Y_m`` commuting with the structure."""

    def __init__(self, source: SimplicialGroupoid, target: SimplicialGroupoid,
                 level_functor: Callable[[int], GroupoidFunctor], name: str = ""):
        self.source = source
        self.target = target
        self._level = level_functor
        self._cache: dict = {}
        self.name = name

    def level(self, m: int) -> GroupoidFunctor:
        hit = self._cache.get(m)
        if hit is None:
            hit = self._level(m)
            self._cache[m] = hit
        return hit

    def naturality_violations(self) -> list[str]:
        bad = []
        X = self.source
        for m in range(1, X.bound + 1):
            for i in range(m + 1):
                lhs = self.target.face(m, i).compose(self.level(m))
                rhs = self.level(m - 1).compose(X.face(m, i))
                bad += _functor_differences(X.levels[m], lhs, rhs, f"face {i} at level {m}")
        return bad


class SpanSegalSpace(SimplicialGroupoid):
    """Level ``m``: aCart diagrams and their natural isomorphisms."""

    def __init__(self, t: Triple, M: int):
        _require_adequate(t)
        check_cap(M)
        self.triple = t
        C = t.cat
        levels = [DiagramGroupoid(C, sigma_poset(m).shape(), enumerate_acart(t, m), name=f"G_{m}")
                  for m in range(M + 1)]
        super().__init__(levels, name=f"SPAN({t.name or C.name})")

    def _make_operator(self, n, alpha):
        C = self.triple.cat
        m = len(alpha) - 1
        s = sigma_map(alpha)
        picks = tuple(sigma_poset(n).index[s(x)] for x in sigma_poset(m).elements)
        target = self.levels[m]
        return GroupoidFunctor(self.levels[n], target,
                               lambda F: target.canonical(precompose(C, F, alpha)),
                               lambda eta: tuple(eta[k] for k in picks))


class ConstantSimplicialGroupoid(SimplicialGroupoid):
    """The same groupoid at every level, identity structure functors."""

    def __init__(self, G: FinGroupoid, M: int):
        super().__init__([G] * (M + 1), name=f"const({G.name})")

    def _make_operator(self, n, alpha):
        return GroupoidFunctor(self.levels[n], self.levels[len(alpha) - 1], lambda a: a, lambda m: m)


# ---------------------------------------------------------------------------
# diagrams of shape A inside a simplicial groupoid


def maximal_faces(A: Subcomplex) -> list[tuple]:
    """Nondegenerate simplices of ``A`` (vertex tuples) not contained in a larger one."""
    faces = [lab for k in A.ambient.grades() for lab in A.nondegenerate_labels(k)]
    sets = [frozenset(f) for f in faces]
    out = [f for f, fs in zip(faces, sets) if not any(fs < other for other in sets)]
    return sorted(out, key=lambda f: (-len(f), f))


def _positions(sub: Sequence[int], face: Sequence[int]) -> tuple[int, ...]:
    return tuple(face.index(v) for v in sub)


class FamilyGroupoid(FinGroupoid):
    """Compatible families ``(x_sigma)`` over the maximal faces of ``A``.

    This is the strict limit of the levels of ``X`` over the simplices of
    ``A``, i.e. the groupoid whose nerve is the division of the nerve of
    ``X`` by ``A``.  With ``fixed_edge`` the restriction to the edge 01 must
    equal it and morphisms must restrict to its identity.
    """

    def __init__(self, X: SimplicialGroupoid, A: Subcomplex, fixed_edge=None, name: str = ""):
        self.X = X
        self.A = A
        self.faces = maximal_faces(A)
        self.fixed_edge = fixed_edge
        for f in self.faces:
            if len(f) - 1 > X.bound:
                raise ValueError(f"face {f} exceeds the simplicial groupoid bound {X.bound}")
        if fixed_edge is not None and not any({0, 1} <= set(f) for f in self.faces):
            raise ValueError("the edge 01 is not in the shape")
        # (a, b, restriction of a, restriction of b) for overlapping faces a > b
        self._links = []
        for a, fa in enumerate(self.faces):
            for b in range(a):
                fb = self.faces[b]
                common = tuple(v for v in fa if v in fb)
                if common:
                    self._links.append((a, b, self._op(fa, common), self._op(fb, common)))
        self._edge = [(a, self._op(f, (0, 1))) for a, f in enumerate(self.faces) if {0, 1} <= set(f)]
        self._edge_id = None if fixed_edge is None else X.levels[1].identity(fixed_edge)
        super().__init__(self._enumerate(), name=name or "family")

    def _op(self, face, sub):
        return self.X.operator(len(face) - 1, _positions(sub, face))

    def _links_into(self, a):
        return [(b, Ra, Rb) for a2, b, Ra, Rb in self._links if a2 == a]

    def _enumerate(self):
        out = []
        chosen = []
        links = [self._links_into(a) for a in range(len(self.faces))]
        edge = dict(self._edge)

        def grow(a):
            if a == len(self.faces):
                out.append(tuple(chosen))
                return
            G = self.X.levels[len(self.faces[a]) - 1]
            for x in G.objects:
                if self.fixed_edge is not None and a in edge and edge[a].obj(x) != self.fixed_edge:
                    continue
                if all(Ra.obj(x) == Rb.obj(chosen[b]) for b, Ra, Rb in links[a]):
                    chosen.append(x)
                    grow(a + 1)
                    chosen.pop()

        grow(0)
        return out

    def _isos_from(self, fam):
        out = []
        tgt = []
        mors = []
        links = [self._links_into(a) for a in range(len(self.faces))]
        edge = dict(self._edge)

        def grow(a):
            if a == len(self.faces):
                out.append((tuple(tgt), tuple(mors)))
                return
            G = self.X.levels[len(self.faces[a]) - 1]
            for t, m in G.isos_from(fam[a]):
                if self._edge_id is not None and a in edge and edge[a].mor(m) != self._edge_id:
                    continue
                if all(Ra.mor(m) == Rb.mor(mors[b]) for b, Ra, Rb in links[a]):
                    tgt.append(t)
                    mors.append(m)
                    grow(a + 1)
                    tgt.pop()
                    mors.pop()

        grow(0)
        return out

    def _level(self, a):
        return self.X.levels[len(self.faces[a]) - 1]

    def compose(self, g, f):
        return tuple(self._level(a).compose(x, y) for a, (x, y) in enumerate(zip(g, f)))

    def identity(self, fam):
        return tuple(self._level(a).identity(x) for a, x in enumerate(fam))

    def inverse(self, m):
        return tuple(self._level(a).inverse(x) for a, x in enumerate(m))


def family_groupoid(X: SimplicialGroupoid, A: Subcomplex, fixed_edge=None) -> FamilyGroupoid:
    return FamilyGroupoid(X, A, fixed_edge)


def restriction_functor(big: FamilyGroupoid, small: FamilyGroupoid) -> GroupoidFunctor:
    """Restrict families along an inclusion of shapes ``small.A ⊆ big.A``."""
    X = big.X
    plan = []
    for tau in small.faces:
        for a, sigma in enumerate(big.faces):
            if set(tau) <= set(sigma):
                plan.append((a, X.operator(len(sigma) - 1, _positions(tau, sigma))))
                break
        else:
            raise ValueError(f"face {tau} is not inside the larger shape")
    return GroupoidFunctor(big, small,
                           lambda fam: tuple(R.obj(fam[a]) for a, R in plan),
                           lambda m: tuple(R.mor(m[a]) for a, R in plan), name="restrict")


def induced_functor(f: SimplicialGroupoidMap, src: FamilyGroupoid, tgt: FamilyGroupoid) -> GroupoidFunctor:
    """Apply ``f`` face by face; both groupoids must use the same shape."""
    dims = [len(s) - 1 for s in src.faces]
    return GroupoidFunctor(src, tgt,
                           lambda fam: tuple(f.level(d).obj(x) for d, x in zip(dims, fam)),
                           lambda m: tuple(f.level(d).mor(x) for d, x in zip(dims, m)),
                           name=f.name)


def segal_failure(X: SimplicialGroupoid, up_to: int | None = None):
    """First level whose spine restriction is not an equivalence, or ``None``."""
    top = X.bound if up_to is None else min(up_to, X.bound)
    for m in range(2, top + 1):
        full = FamilyGroupoid(X, named_subcomplex("full", m, bound=m))
        spine = FamilyGroupoid(X, named_subcomplex("spine", m, bound=m))
        v = equivalence_verdict(restriction_functor(full, spine))
        if not v.ok:
            return {"level": m, "detail": v.witness}
    return None


def span_segal_space(t: Triple, M: int) -> SpanSegalSpace:
    return SpanSegalSpace(t, M)


def span_segal_map(p: FinFunctor, X: SpanSegalSpace, Y: SpanSegalSpace) -> SimplicialGroupoidMap:
    bad = functor_of_triples_violations(p, X.triple, Y.triple)
    if bad:
        raise CategoryError(bad)

    def level(m):
        Ym = Y.levels[m]
        return GroupoidFunctor(X.levels[m], Ym,
                               lambda F: Ym.canonical(postcompose(p, F)),
                               lambda eta: tuple(p(c) for c in eta))

    return SimplicialGroupoidMap(X, Y, level, name="SPAN(p)")


def zeroth_row(S: SimplicialGroupoid) -> TruncatedSimplicialSet:
    levels = [list(G.objects) for G in S.levels]
    return TruncatedSimplicialSet.build(
        S.bound, levels,
        lambda k, i, x: S.face(k, i).obj(x),
        lambda k, i, x: S.degen(k, i).obj(x),
        name=f"row0({S.name})")


def zeroth_row_map(f: SimplicialGroupoidMap, X: TruncatedSimplicialSet | None = None,
                   Y: TruncatedSimplicialSet | None = None) -> SimplicialMap:
    X = X or zeroth_row(f.source)
    Y = Y or zeroth_row(f.target)
    comps = [[Y.index[k][f.level(k).obj(x)] for x in X.labels[k]] for k in X.grades()]
    return SimplicialMap(X, Y, comps)


# ---------------------------------------------------------------------------
# spans with an invertible leg


def chain_shape(n: int, reverse: bool = False) -> Shape:
    """``0 -> 1 -> ... -> n`` (or with every arrow reversed)."""
    arrows = tuple((k + 1, k) if reverse else (k, k + 1) for k in range(n))
    return Shape(tuple(range(n + 1)), arrows, ())


def chain_groupoid(C: FinCategory, n: int, reverse: bool = False) -> DiagramGroupoid:
    """Functors ``[n] -> C`` (or ``[n] -> C^op``) and natural isomorphisms."""
    shape = chain_shape(n, reverse)
    objs = sorted(enumerate_shape_functors(C, shape))
    return DiagramGroupoid(C, shape, objs, name=f"Fun([{n}],C)")


def equivalence_embedding(C: FinCategory, variant: str, M: int = 2) -> dict:
    """Compare chains in ``C`` (or ``C^op``) with spans having one invertible leg.

    ``backward_iso`` uses the triple with egressive = isomorphisms and the
    inclusion ``k -> (k, n)``; ``forward_iso`` uses ingressive =
    isomorphisms and ``k -> (0, k)``.  Returns per-level verdicts for
    ``r_n ∘ i_n = id`` and for ``i_n`` being an equivalence.
    """
    if variant == "backward_iso":
        t = Triple.from_kinds(C, "all", "isos", name="backward-iso")
    elif variant == "forward_iso":
        t = Triple.from_kinds(C, "isos", "all", name="forward-iso")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    S = SpanSegalSpace(t, M)
    levels = []
    for n in range(M + 1):
        src = chain_groupoid(C, n, reverse=(variant == "forward_iso"))
        i_n, r_n = _embedding_functors(C, variant, n, src, S.levels[n])
        retract_ok = all(r_n.obj(i_n.obj(a)) == a for a in src.objects) and all(
            r_n.mor(i_n.mor(m)) == m for a in src.objects for _, m in src.isos_from(a))
        eq = equivalence_verdict(i_n)
        levels.append({"n": n, "retraction": retract_ok, "equivalence": eq.ok,
                       "witness": eq.witness, "source_objects": len(src.objects),
                       "target_objects": len(S.levels[n].objects)})
    return {"variant": variant, "triple": t, "segal": S, "levels": levels,
            "ok": all(l["retraction"] and l["equivalence"] for l in levels)}


def _embedding_functors(C, variant, n, src: DiagramGroupoid, tgt):
    P = sigma_poset(n)
    if variant == "backward_iso":
        r = lambda x: x[0]          # noqa: E731
        inc = lambda k: (k, n)      # noqa: E731
    else:
        r = lambda x: x[1]          # noqa: E731
        inc = lambda k: (0, k)      # noqa: E731
    shape = src.shape
    arrow_of = {a: idx for idx, a in enumerate(shape.arrows)}

    def chain_rel(objs, arrs, a, b):
        # morphism objs[a] -> objs[b] in C along the chain (identity if a == b)
        if a == b:
            return objs[a]
        step = 1 if (a, a + 1) in arrow_of else -1
        out = objs[a]
        k = a
        while k != b:
            out = C.compose(arrs[arrow_of[(k, k + step)]], out)
            k += step
        return out

    def i_obj(d):
        objs, arrs = d
        new_objs = [objs[r(x)] for x in P.elements]
        gens = [chain_rel(objs, arrs, r(x), r(y)) for x, y in P.hasse]
        return tgt.canonical(SigmaDiagram(new_objs, gens))

    def i_mor(eta):
        return tuple(eta[r(x)] for x in P.elements)

    def r_obj(F):
        objs = tuple(F.obj(inc(k)) for k in range(n + 1))
        arrs = tuple(relation(C, F, inc(a), inc(b)) if inc(b) != inc(a) and P.leq(inc(a), inc(b))
                     else relation(C, F, inc(b), inc(a)) for a, b in shape.arrows)
        return (objs, arrs)

    def r_mor(eta):
        return tuple(eta[P.index[inc(k)]] for k in range(n + 1))

    i_n = GroupoidFunctor(src, tgt, i_obj, i_mor, name=f"i_{n}")
    r_n = GroupoidFunctor(tgt, src, r_obj, r_mor, name=f"r_{n}")
    return i_n, r_n
