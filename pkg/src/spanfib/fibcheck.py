"""Inner fibrations and cocartesian edges in two models, and end-to-end verifiers.

Quasicategory model: horn lifting against truncated simplicial maps.
Segal model: simplicial finite groupoids, where a homotopy pullback is
decided as a strict pullback plus a comparison equivalence, which is only
sound when one leg into the corner is an isofibration.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .fincat import (FinCategory, FinFunctor, Triple, cartesian_failure, cocartesian_failure,
                     functor_of_triples_violations, is_adequate, is_cartesian_1cat,
                     is_cocartesian_1cat, is_pullback, nerve, restrict_to_triple_parts)
from .groupoid import (DiagramGroupoid, FullSubgroupoid, GroupoidFunctor, Shape, StrictPullback,
                       Verdict, enumerate_shape_functors, equivalence_verdict, fibers_contractible,
                       groupoid_equivalence, isofibration_failure, trivial_fibration_failure)
from .simpset import SimplicialMap, find_rlp_failure, lifting_failures, map_to_point, named_subcomplex
from .spancat import (FamilyGroupoid, SigmaDiagram, SimplicialGroupoidMap, SpanSegalSpace,
                      induced_functor, restriction_functor, segal_failure, span_of_functor,
                      span_segal_map, span_simplicial_set)

__all__ = [
    "GroupoidSquare", "NoIsofibrationLeg", "SegalConditionFailure", "InvalidInstance",
    "groupoid_equivalence", "homotopy_pullback_check", "homotopy_pullback_verdict",
    "SegalChecker", "is_cocartesian_segal", "is_inner_fibration_qcat", "is_cocartesian_qcat",
    "CheckRecord", "VerificationReport", "SpanInstance", "verify_thm_main",
    "verify_thm_variant", "factorization_pipeline_check", "coherence_check", "coherence_failures",
    "pointwise_marked_check", "generated_edges", "lowest_condition_check",
]


class NoIsofibrationLeg(ValueError):
    """Neither leg into the corner is an isofibration; the strict pullback proves nothing."""


class SegalConditionFailure(ValueError):
    pass


class InvalidInstance(ValueError):
    """Inputs violate a precondition (inadequate triple, not a functor of triples)."""


# ---------------------------------------------------------------------------
# homotopy pullbacks of finite groupoids


@dataclass
class GroupoidSquare:
    """``top: P -> Q``, ``left: P -> R``, ``right: Q -> S``, ``bottom: R -> S``."""

    top: GroupoidFunctor
    left: GroupoidFunctor
    right: GroupoidFunctor
    bottom: GroupoidFunctor

    def commutation_failure(self):
        P = self.top.source
        for a in P.objects:
            if self.right.obj(self.top.obj(a)) != self.bottom.obj(self.left.obj(a)):
                return {"object": repr(a)}
            for _, m in P.isos_from(a):
                if self.right.mor(self.top.mor(m)) != self.bottom.mor(self.left.mor(m)):
                    return {"object": repr(a), "morphism": repr(m)}
        return None

    def isofibration_legs(self) -> list[str]:
        return [name for name, F in (("bottom", self.bottom), ("right", self.right))
                if isofibration_failure(F) is None]


def homotopy_pullback_verdict(sq: GroupoidSquare) -> Verdict:
    """Compare ``P`` with the strict pullback ``Q x_S R``.

    Raises ``NoIsofibrationLeg`` if neither leg into ``S`` is an isofibration.
    """
    bad = sq.commutation_failure()
    if bad is not None:
        raise ValueError(f"square does not commute: {bad}")
    if not sq.isofibration_legs():
        raise NoIsofibrationLeg("neither leg into the corner is an isofibration")
    pb = StrictPullback(sq.right, sq.bottom)
    top, left = sq.top, sq.left
    comparison = GroupoidFunctor(top.source, pb,
                                 lambda a: (top.obj(a), left.obj(a)),
                                 lambda m: (top.mor(m), left.mor(m)), name="comparison")
    return equivalence_verdict(comparison)


def homotopy_pullback_check(sq: GroupoidSquare) -> bool:
    return homotopy_pullback_verdict(sq).ok


# ---------------------------------------------------------------------------
# the Segal model


class SegalChecker:
    """Cocartesianness of edges for a map of simplicial groupoids.

    The Segal condition on source and target is verified once, up to the
    bound of the source, before any edge is examined.
    """

    def __init__(self, f: SimplicialGroupoidMap, check_segal: bool = True):
        self.f = f
        self.X, self.Y = f.source, f.target
        if check_segal:
            for S, side in ((self.X, "source"), (self.Y, "target")):
                w = segal_failure(S)
                if w is not None:
                    raise SegalConditionFailure(f"{side} fails the Segal condition: {w}")
        self._shapes: dict = {}

    def _shape(self, kind: str, n: int):
        key = (kind, n)
        if key not in self._shapes:
            self._shapes[key] = named_subcomplex(kind, n, bound=n)
        return self._shapes[key]

    def square(self, e, kind: str = "horn", n: int = 2) -> GroupoidSquare:
        """Fixed-edge square for ``A ⊆ Delta^n`` with ``A`` = ``horn(n, 0)`` or ``left_spine(n)``."""
        if n > self.X.bound:
            raise ValueError(f"level {n} exceeds the simplicial groupoid bound {self.X.bound}")
        full = self._shape("full", n)
        if kind == "horn":
            A = named_subcomplex("horn", n, 0, bound=n)
        else:
            A = self._shape(kind, n)
        fe = self.f.level(1).obj(e)
        P = FamilyGroupoid(self.X, full, fixed_edge=e, name="P")
        Q = FamilyGroupoid(self.X, A, fixed_edge=e, name="Q")
        R = FamilyGroupoid(self.Y, full, fixed_edge=fe, name="R")
        S = FamilyGroupoid(self.Y, A, fixed_edge=fe, name="S")
        return GroupoidSquare(restriction_functor(P, Q), induced_functor(self.f, P, R),
                              induced_functor(self.f, Q, S), restriction_functor(R, S))

    def verdict(self, e, kind: str = "horn", n: int = 2) -> Verdict:
        return homotopy_pullback_verdict(self.square(e, kind, n))

    def is_cocartesian(self, e) -> bool:
        return self.verdict(e).ok

    def lowest_condition_replay(self, e, n: int = 3) -> dict:
        """If the ``n = 2`` square is a homotopy pullback, so is the left-spine square at ``n``."""
        low = self.verdict(e, "left_spine", 2).ok
        high = self.verdict(e, "left_spine", n).ok
        return {"low": low, "high": high, "holds": (not low) or high}


def generated_edges(X, e) -> frozenset:
    """``e``, the degenerate edges, and everything isomorphic to one of them."""
    G1 = X.levels[1]
    s0 = X.degen(0, 0)
    out = set(G1.orbit(e))
    for x in X.levels[0].objects:
        out |= G1.orbit(s0.obj(x))
    return frozenset(out)


def _marked(fam: FamilyGroupoid, marked) -> FullSubgroupoid:
    (a, op), = fam._edge[:1]
    return FullSubgroupoid(fam, lambda x: op.obj(x[a]) in marked, name=f"{fam.name}-marked")


def _comparison(P, Q, R, S, f) -> GroupoidFunctor:
    """``P -> R x_S Q`` for family groupoids with ``Q, S`` on the smaller shape."""
    big_q = P.ambient if isinstance(P, FullSubgroupoid) else P
    small_q = Q.ambient if isinstance(Q, FullSubgroupoid) else Q
    res = restriction_functor(big_q, small_q)
    push = induced_functor(f, big_q, R)
    res_y = restriction_functor(R, S)
    push_q = induced_functor(f, small_q, S)
    E = GroupoidFunctor(Q, S, push_q.obj, push_q.mor)
    pb = StrictPullback(res_y, E)
    return GroupoidFunctor(P, pb, lambda x: (push.obj(x), res.obj(x)),
                           lambda m: (push.mor(m), res.mor(m)), name="comparison")


def pointwise_marked_check(f: SimplicialGroupoidMap, A, marked) -> dict:
    """Both sides of the pointwise criterion for ``A ⊆ Delta^n`` in the groupoid model.

    Side one: the marked comparison ``(Delta^n\\X)_M -> (Delta^n\\Y) x (A\\X)_M`` is a
    trivial fibration, ``M`` being the marked edges.  Side two: the fixed-edge
    comparison is a trivial fibration for every marked edge.
    """
    X, Y = f.source, f.target
    n = max(max(lab) for lab in A.ambient.labels[0])
    full = named_subcomplex("full", n, bound=A.ambient.bound)
    P = _marked(FamilyGroupoid(X, full), marked)
    Q = _marked(FamilyGroupoid(X, A), marked)
    R, S = FamilyGroupoid(Y, full), FamilyGroupoid(Y, A)
    side1 = trivial_fibration_failure(_comparison(P, Q, R, S, f))
    failing = []
    for e in sorted(marked, key=repr):
        fe = f.level(1).obj(e)
        Pe, Qe = FamilyGroupoid(X, full, fixed_edge=e), FamilyGroupoid(X, A, fixed_edge=e)
        Re, Se = FamilyGroupoid(Y, full, fixed_edge=fe), FamilyGroupoid(Y, A, fixed_edge=fe)
        if trivial_fibration_failure(_comparison(Pe, Qe, Re, Se, f)) is not None:
            failing.append(e)
    ok1, ok2 = side1 is None, not failing
    return {"side1": ok1, "side2": ok2, "agree": ok1 == ok2, "witness1": side1, "failing_edges": failing}


def is_cocartesian_segal(f: SimplicialGroupoidMap, e, check_segal: bool = True) -> bool:
    return SegalChecker(f, check_segal).is_cocartesian(e)


# ---------------------------------------------------------------------------
# the quasicategory model


def inner_fibration_failure(f: SimplicialMap, up_to: int = 3):
    return find_rlp_failure(f, "inner_horns", min(up_to, f.source.bound))


def is_inner_fibration_qcat(f: SimplicialMap, up_to: int = 3, check_quasicategories: bool = False) -> bool:
    if check_quasicategories:
        for X in (f.source, f.target):
            if inner_fibration_failure(map_to_point(X), up_to) is not None:
                raise ValueError(f"{X.name or 'simplicial set'} has an unfillable inner horn")
    return inner_fibration_failure(f, up_to) is None


def cocartesian_qcat_failure(f: SimplicialMap, e: int, up_to: int = 3):
    """An unfillable ``horn(n, 0)`` with first edge ``e``, ``2 <= n <= up_to``, or ``None``."""
    top = min(up_to, f.source.bound)
    subs = ((f"horn({n},0)", n, named_subcomplex("horn", n, 0, bound=n)) for n in range(2, top + 1))
    for w in lifting_failures(f, subs, fixed_labels={(0, 1): (1, e)}):
        return w
    return None


def is_cocartesian_qcat(f: SimplicialMap, e: int, up_to: int = 3) -> bool:
    return cocartesian_qcat_failure(f, e, up_to) is None


# ---------------------------------------------------------------------------
# reports


def _plain(x):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    return repr(x)


@dataclass
class CheckRecord:
    name: str
    anchor: str
    bound: int | None
    verdict: str
    entailed: bool | None = None
    witness: object = None
    millis: int = 0
    note: str = ""
    data: object = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        out = {"name": self.name, "anchor": self.anchor, "bound": self.bound, "verdict": self.verdict}
        if self.entailed is not None:
            out["entailed"] = self.entailed
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.note:
            out["note"] = self.note
        if self.data is not None:
            out["data"] = _plain(self.data)
        out["millis"] = self.millis
        return out


@dataclass
class VerificationReport:
    title: str
    records: list = field(default_factory=list)

    def run(self, name: str, anchor: str, bound, fn: Callable[[], object], entailed=None, note: str = ""):
        """Time ``fn``; a ``None`` result passes, anything else is the failure witness."""
        t0 = time.perf_counter()
        w = fn()
        ms = int((time.perf_counter() - t0) * 1000)
        rec = CheckRecord(name, anchor, bound, "pass" if w is None else "fail", entailed, w, ms, note)
        self.records.append(rec)
        return rec

    def info(self, name: str, anchor: str, bound, fn: Callable[[], object], note: str = ""):
        """Time ``fn`` and keep its result as data; informational records always pass."""
        t0 = time.perf_counter()
        data = fn()
        ms = int((time.perf_counter() - t0) * 1000)
        rec = CheckRecord(name, anchor, bound, "pass", None, None, ms, note, data)
        self.records.append(rec)
        return rec

    def __getitem__(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "records": [r.to_dict() for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [self.title]
        for r in self.records:
            ent = "" if r.entailed is None else (" [entailed]" if r.entailed else " [not-entailed]")
            lines.append(f"  {r.verdict.upper():4} {r.name}{ent} (bound {r.bound}, {r.millis} ms)")
            if r.note:
                lines.append(f"       {r.note}")
            if r.data is not None:
                lines.append(f"       data: {json.dumps(_plain(r.data))}")
            if r.witness is not None:
                lines.append(f"       witness: {json.dumps(_plain(r.witness))}")
        lines.append("overall: " + ("pass" if self.ok else "fail"))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# instances


class SpanInstance:
    """A functor of adequate triples with its span constructions built lazily."""

    def __init__(self, p: FinFunctor, s: Triple, t: Triple, bound: int = 3, M: int = 2):
        for tr, side in ((s, "source"), (t, "target")):
            rep = is_adequate(tr)
            if not rep.ok:
                raise InvalidInstance(f"{side} triple is not adequate: {rep.witnesses[:1]}")
        bad = functor_of_triples_violations(p, s, t)
        if bad:
            raise InvalidInstance(f"not a functor of triples: {bad[0]}")
        self.p, self.s, self.t = p, s, t
        self.C, self.D = s.cat, t.cat
        self.bound, self.M = bound, M
        self._cache: dict = {}

    def _get(self, key, make):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    @property
    def span_map(self) -> SimplicialMap:
        return self._get("span", lambda: span_of_functor(self.p, self.s, self.t, self.bound))

    @property
    def segal_map(self) -> SimplicialGroupoidMap:
        def make():
            return span_segal_map(self.p, SpanSegalSpace(self.s, self.M), SpanSegalSpace(self.t, self.M))
        return self._get("segal", make)

    @property
    def segal(self) -> SegalChecker:
        return self._get("checker", lambda: SegalChecker(self.segal_map))

    @property
    def p_lower(self) -> FinFunctor:
        return self._get("lower", lambda: restrict_to_triple_parts(self.p, self.s, self.t, "ingressive")[0])

    @property
    def p_upper(self) -> FinFunctor:
        return self._get("upper", lambda: restrict_to_triple_parts(self.p, self.s, self.t, "egressive")[0])

    # the restricted functors live on wide subcategories; translate indices by name
    def _sub_index(self, sub: FinFunctor, m: int) -> int:
        return sub.source.mor_index[self.C.mor_names[m]]

    def cocartesian(self, m: int) -> bool:
        return self._get(("cocart", m), lambda: is_cocartesian_1cat(self.p, m))

    def cartesian(self, m: int) -> bool:
        return self._get(("cart", m), lambda: is_cartesian_1cat(self.p, m))

    def lower_cocartesian(self, m: int) -> bool:
        if m not in self.s.ingressive:
            return False
        return self._get(("lcocart", m),
                         lambda: is_cocartesian_1cat(self.p_lower, self._sub_index(self.p_lower, m)))

    def upper_cartesian(self, m: int) -> bool:
        if m not in self.s.egressive:
            return False
        return self._get(("ucart", m),
                         lambda: is_cartesian_1cat(self.p_upper, self._sub_index(self.p_upper, m)))

    def span_index(self, F: SigmaDiagram) -> int:
        return self.span_map.source.index[1][F]

    def level_one(self) -> list[SigmaDiagram]:
        return list(self.span_map.source.labels[1])

    def describe_span(self, F: SigmaDiagram) -> dict:
        C = self.C
        y = F.obj((0, 1))
        return {"apex": C.objects[y], "back": C.mor_names[F.gen((0, 1), (0, 0))],
                "forward": C.mor_names[F.gen((0, 1), (1, 1))]}

    def name_diagram(self, F, base: bool = False) -> dict:
        C = self.D if base else self.C
        P = F.poset
        return {"objects": {f"{i}{j}": C.objects[o] for (i, j), o in zip(P.elements, F.objs)},
                "arrows": {f"{a[0]}{a[1]}>{b[0]}{b[1]}": C.mor_names[m] for (a, b), m in zip(P.hasse, F.gens)}}

    def name_horn_witness(self, w: dict) -> dict:
        return {"generator": w["generator"], "bottom": self.name_diagram(w["bottom"], base=True),
                "top": {"".join(map(str, k)): self.name_diagram(v) for k, v in w["top"].items()}}

    def find_span(self, back: str, forward: str) -> SigmaDiagram:
        """The level-one diagram with the given back and forward legs."""
        C = self.C
        for nm in (back, forward):
            if nm not in C.mor_index:
                raise InvalidInstance(f"unknown morphism {nm}")
        b, f = C.mor_index[back], C.mor_index[forward]
        for F in self.level_one():
            if F.gen((0, 1), (0, 0)) == b and F.gen((0, 1), (1, 1)) == f:
                return F
        raise InvalidInstance(f"no span with back leg {back} and forward leg {forward}")

    def segal_verdicts(self) -> dict:
        return self._get("segal_verdicts", lambda: {F: self.segal.is_cocartesian(F) for F in self.level_one()})

    def qcat_verdicts(self) -> dict:
        def make():
            X = self.span_map
            return {F: is_cocartesian_qcat(X, self.span_index(F), self.bound) for F in self.level_one()}
        return self._get("qcat_verdicts", make)

    def designated_spans(self, kind: str = "main") -> list[SigmaDiagram]:
        """Back leg egressive and upper-cartesian, forward leg ingressive and cocartesian.

        ``kind="variant"`` asks the same of the back leg; the two readings
        coincide, and the keyword exists so reports can say which theorem
        the spans come from.
        """
        out = []
        for F in self.level_one():
            back = F.gen((0, 1), (0, 0))
            fwd = F.gen((0, 1), (1, 1))
            if back in self.s.egressive and self.upper_cartesian(back) and \
                    fwd in self.s.ingressive and self.cocartesian(fwd):
                out.append(F)
        return out


def _squares(C: FinCategory):
    """Commutative squares ``g o f' = f o g'`` as ``(f, f', g, g')``; ``f: y -> x``, ``g': y' -> y``."""
    for f in range(C.n_morphisms):
        y, x = C.src[f], C.tgt[f]
        for g in C.into(x):
            for gp in C.into(y):
                yp = C.src[gp]
                target = C.compose(f, gp)
                for fp in C.hom(yp, C.src[g]):
                    if C.compose(g, fp) == target:
                        yield f, fp, g, gp


# ---------------------------------------------------------------------------
# theorem checks


def _h1_failure(inst: SpanInstance):
    """Every ingressive of the target with a lifted source has a doubly cocartesian ingressive lift."""
    C, D, p = inst.C, inst.D, inst.p
    for g in sorted(inst.t.ingressive):
        for c in range(C.n_objects):
            if p.on_object(c) != D.src[g]:
                continue
            ok = any(p(f) == g and f in inst.s.ingressive and inst.cocartesian(f) and inst.lower_cocartesian(f)
                     for f in C.out_of(c))
            if not ok:
                return {"morphism": D.mor_names[g], "source_lift": C.objects[c]}
    return None


def _ambigressive_pullback(tr: Triple, f, fp, g, gp) -> bool:
    C = tr.cat
    return (f in tr.ingressive and fp in tr.ingressive and g in tr.egressive and gp in tr.egressive
            and is_pullback(C, f, g, C.src[fp], gp, fp))


def _square_witness(C: FinCategory, f, fp, g, gp, **extra) -> dict:
    return {"f": C.mor_names[f], "f'": C.mor_names[fp], "g": C.mor_names[g], "g'": C.mor_names[gp], **extra}


def _h2_failure(inst: SpanInstance):
    """Over ambigressive pullbacks of the base, ``f'`` cocartesian iff the square is an ambigressive pullback."""
    C, p, s, t = inst.C, inst.p, inst.s, inst.t
    for f, fp, g, gp in _squares(C):
        if f not in s.ingressive or fp not in s.ingressive or gp not in s.egressive:
            continue
        if not inst.cocartesian(f):
            continue
        if not _ambigressive_pullback(t, p(f), p(fp), p(g), p(gp)):
            continue
        lhs = inst.cocartesian(fp)
        rhs = _ambigressive_pullback(s, f, fp, g, gp)
        if lhs != rhs:
            return _square_witness(C, f, fp, g, gp, f_prime_cocartesian=lhs, ambigressive_pullback=rhs)
    return None


def _designated_failure(inst: SpanInstance, spans: Iterable[SigmaDiagram]):
    X_map = inst.span_map
    for F in spans:
        e = inst.span_index(F)
        qcat = cocartesian_qcat_failure(X_map, e, inst.bound)
        segal = inst.segal.verdict(F)
        if qcat is not None or not segal.ok:
            return {"span": inst.describe_span(F), "quasicategory": qcat is None, "segal": segal.ok,
                    "detail": inst.name_horn_witness(qcat) if qcat is not None else segal.witness}
    return None


def _consistency_failure(inst: SpanInstance):
    seg, qc = inst.segal_verdicts(), inst.qcat_verdicts()
    for F in inst.level_one():
        if seg[F] and not qc[F]:
            return {"span": inst.describe_span(F)}
    return None


def coherence_failures(inst: SpanInstance) -> dict:
    """Counterexamples to Segal => quasicategory and to iso-orbit invariance of either verdict."""
    seg, qc = inst.segal_verdicts(), inst.qcat_verdicts()
    out = {"implication": [inst.describe_span(F) for F in inst.level_one() if seg[F] and not qc[F]],
           "segal_orbit": [], "qcat_orbit": []}
    G1 = inst.segal_map.source.levels[1]
    for comp in G1.components():
        for key, verdicts in (("segal_orbit", seg), ("qcat_orbit", qc)):
            if len({verdicts[F] for F in comp}) > 1:
                out[key].append([inst.describe_span(F) for F in comp])
    return out


def lowest_condition_check(inst: SpanInstance, n: int = 3) -> VerificationReport:
    """For every edge: a homotopy pullback at the two-dimensional left spine forces one at ``n``."""
    f = span_segal_map(inst.p, SpanSegalSpace(inst.s, n), SpanSegalSpace(inst.t, n))
    checker = SegalChecker(f)
    rep = VerificationReport(f"left-spine replay for {inst.p.name or 'p'}")

    def failure():
        for e in f.source.levels[1].objects:
            r = checker.lowest_condition_replay(e, n)
            if not r["holds"]:
                return {"span": inst.describe_span(e), **r}
        return None

    rep.run(f"lowest condition implies level {n}", "left-spine-replay", n, failure)
    return rep


def coherence_check(inst: SpanInstance) -> VerificationReport:
    rep = VerificationReport(f"cross-model coherence for {inst.p.name or 'p'}")
    bad = inst._get("coherence", lambda: coherence_failures(inst))
    n = len(inst.level_one())
    rep.run("Segal-cocartesian implies quasicategory-cocartesian", "coherence-implication", inst.bound,
            lambda: bad["implication"] or None, note=f"{n} edges")
    rep.run("Segal verdict is constant on iso-orbits", "coherence-orbit", inst.M,
            lambda: bad["segal_orbit"] or None)
    rep.run("quasicategory verdict is constant on iso-orbits", "coherence-orbit", inst.bound,
            lambda: bad["qcat_orbit"] or None)
    return rep


def _inner_fibration_record(rep: VerificationReport, inst: SpanInstance, entailed: bool):
    rep.run("C1 span functor is an inner fibration", "conclusion-inner", inst.bound,
            lambda: inner_fibration_failure(inst.span_map, inst.bound), entailed=entailed)


def _hypothesis_zero(rep: VerificationReport, inst: SpanInstance):
    N = min(inst.bound, 3)
    pm = _nerve_map(inst.p, N)
    rep.run("H0 underlying functor is an inner fibration", "hypothesis-inner", N,
            lambda: inner_fibration_failure(pm, N),
            note="automatic for nerves of functors; evaluated for the record")


def _nerve_map(p: FinFunctor, N: int) -> SimplicialMap:
    X, Y = nerve(p.source, N), nerve(p.target, N)
    comps = []
    for k in X.grades():
        if k == 0:
            comps.append([Y.index[0][p.on_object(o)] for o in X.labels[0]])
        else:
            comps.append([Y.index[k][tuple(p(m) for m in ch)] for ch in X.labels[k]])
    return SimplicialMap(X, Y, comps)


def verify_thm_main(p: FinFunctor, s: Triple, t: Triple, bound: int = 3, M: int = 2) -> VerificationReport:
    """Hypotheses H1, H2 and conclusions C1 (inner), C2 (designated spans), C3 (Segal => qcat)."""
    inst = p if isinstance(p, SpanInstance) else SpanInstance(p, s, t, bound, M)
    rep = VerificationReport(f"main theorem for {inst.p.name or 'p'}")
    _hypothesis_zero(rep, inst)
    h1 = rep.run("H1 ingressive lifts are cocartesian twice", "hypothesis-1", None, lambda: _h1_failure(inst))
    h2 = rep.run("H2 cocartesian squares are exactly ambigressive pullbacks", "hypothesis-2", None,
                 lambda: _h2_failure(inst))
    entailed = h1.passed and h2.passed
    _inner_fibration_record(rep, inst, entailed)
    spans = inst.designated_spans()
    rep.run("C2 designated spans are cocartesian in both models", "conclusion-cocartesian", inst.bound,
            lambda: _designated_failure(inst, spans), entailed=entailed,
            note=f"{len(spans)} designated spans")
    rep.run("C3 Segal-cocartesian implies quasicategory-cocartesian", "conclusion-first-row", inst.bound,
            lambda: _consistency_failure(inst))
    return rep


def _variant_v1_failure(inst: SpanInstance):
    for m in range(inst.C.n_morphisms):
        if (m in inst.s.egressive) != inst.cartesian(m):
            return {"morphism": inst.C.mor_names[m], "egressive": m in inst.s.egressive,
                    "cartesian": inst.cartesian(m)}
    return None


def _variant_v2_failure(inst: SpanInstance):
    """``p^dagger`` has cartesian lifts of every egressive with a lifted target."""
    C, D, p = inst.C, inst.D, inst.p
    for g in sorted(inst.t.egressive):
        for c in range(C.n_objects):
            if p.on_object(c) != D.tgt[g]:
                continue
            if not any(p(f) == g and inst.upper_cartesian(f) for f in C.into(c) if f in inst.s.egressive):
                return {"morphism": D.mor_names[g], "target_lift": C.objects[c]}
    return None


def _variant_v3_failure(inst: SpanInstance):
    """Over pullback squares with egressive verticals and cocartesian ingressive ``f``."""
    C, s = inst.C, inst.s
    for f, fp, g, gp in _squares(C):
        if g not in s.egressive or gp not in s.egressive or f not in s.ingressive:
            continue
        if not inst.cocartesian(f) or not is_pullback(C, f, g, C.src[fp], gp, fp):
            continue
        if not (fp in s.ingressive and inst.cocartesian(fp) and inst.lower_cocartesian(fp)):
            return _square_witness(C, f, fp, g, gp, ingressive=fp in s.ingressive,
                                   cocartesian=inst.cocartesian(fp),
                                   lower_cocartesian=inst.lower_cocartesian(fp))
    return None


def verify_thm_variant(p: FinFunctor, s: Triple, t: Triple, bound: int = 3, M: int = 2) -> VerificationReport:
    """Variant hypotheses V1-V3 and the same three conclusions."""
    inst = p if isinstance(p, SpanInstance) else SpanInstance(p, s, t, bound, M)
    rep = VerificationReport(f"variant theorem for {inst.p.name or 'p'}")
    _hypothesis_zero(rep, inst)
    v1 = rep.run("V1 egressives are exactly the cartesian morphisms", "variant-hypothesis-1", None,
                 lambda: _variant_v1_failure(inst))
    v2 = rep.run("V2 egressive part is a cartesian fibration", "variant-hypothesis-2", None,
                 lambda: _variant_v2_failure(inst))
    v3 = rep.run("V3 cocartesian ingressives pull back along egressives", "variant-hypothesis-3", None,
                 lambda: _variant_v3_failure(inst), note="evaluated on pullback squares")
    entailed = v1.passed and v2.passed and v3.passed
    _inner_fibration_record(rep, inst, entailed)
    spans = inst.designated_spans("variant")
    rep.run("C2 designated spans are cocartesian in both models", "conclusion-cocartesian", inst.bound,
            lambda: _designated_failure(inst, spans), entailed=entailed,
            note=f"{len(spans)} designated spans")
    rep.run("C3 Segal-cocartesian implies quasicategory-cocartesian", "conclusion-first-row", inst.bound,
            lambda: _consistency_failure(inst))
    return rep


# ---------------------------------------------------------------------------
# the factorization pipeline

# vertex names are the Σ_2 elements; labels per arrow
_ING, _EGR, _COC, _UCART, _LCOC = "ingressive", "egressive", "cocartesian", "upper-cartesian", "lower-cocartesian"

PIPELINE_STEPS = (
    # (new vertices, new arrows with labels, new triangles)
    (("00", "01", "11", "02", "22"),
     ((("01", "11"), (_ING, _COC)), (("01", "00"), (_EGR, _UCART)),
      (("02", "00"), (_EGR,)), (("02", "22"), (_ING,))), ()),
    ((), ((("02", "01"), (_EGR,)),), (("02", "01", "00"),)),
    ((), ((("02", "11"), ()),), (("02", "01", "11"),)),
    (("12",), ((("02", "12"), (_ING, _COC, _LCOC)),), ()),
    ((), ((("12", "11"), ()),), (("02", "12", "11"),)),
    ((), ((("12", "22"), (_ING,)),), (("02", "12", "22"),)),
)


def pipeline_shapes():
    """``[(Shape, labels)]`` for A_1 .. A_6."""
    out = []
    els: list = []
    arrows: list = []
    tris: list = []
    labels: dict = {}
    for new_els, new_arrows, new_tris in PIPELINE_STEPS:
        els += list(new_els)
        for a, lab in new_arrows:
            arrows.append(a)
            labels[a] = lab
        tris += list(new_tris)
        out.append((Shape(tuple(els), tuple(arrows), tuple(tris)), dict(labels)))
    return out


def _label_sets(inst: SpanInstance, labels: dict, over_base: bool) -> dict:
    C = inst.D if over_base else inst.C
    tr = inst.t if over_base else inst.s
    out = {}
    for a, labs in labels.items():
        keep = set(range(C.n_morphisms))
        for lab in labs:
            if lab == _ING:
                keep &= tr.ingressive
            elif lab == _EGR:
                keep &= tr.egressive
            elif over_base:
                continue
            elif lab == _COC:
                keep = {m for m in keep if inst.cocartesian(m)}
            elif lab == _UCART:
                keep = {m for m in keep if inst.upper_cartesian(m)}
            elif lab == _LCOC:
                keep = {m for m in keep if inst.lower_cocartesian(m)}
        if len(keep) < C.n_morphisms:
            out[a] = keep
    return out


def labelled_functor_groupoid(inst: SpanInstance, shape: Shape, labels: dict, over_base: bool,
                              name: str = "") -> DiagramGroupoid:
    C = inst.D if over_base else inst.C
    objs = list(enumerate_shape_functors(C, shape, _label_sets(inst, labels, over_base)))
    return DiagramGroupoid(C, shape, objs, name=name)


def _restrict_diagrams(big: DiagramGroupoid, small: DiagramGroupoid) -> GroupoidFunctor:
    ei = [big.shape.element_index[x] for x in small.shape.elements]
    ai = [big.shape.arrow_index[a] for a in small.shape.arrows]

    def obj(d):
        return small.canonical((tuple(d[0][i] for i in ei), tuple(d[1][i] for i in ai)))

    return GroupoidFunctor(big, small, obj, lambda m: tuple(m[i] for i in ei), name="restrict")


def _push_diagrams(p: FinFunctor, src: DiagramGroupoid, tgt: DiagramGroupoid) -> GroupoidFunctor:
    def obj(d):
        return tgt.canonical((tuple(p.on_object(o) for o in d[0]), tuple(p(a) for a in d[1])))

    return GroupoidFunctor(src, tgt, obj, lambda m: tuple(p(c) for c in m), name="p")


def comparison_functor(inst: SpanInstance, k: int, groupoids=None) -> GroupoidFunctor:
    """``j_k: Fun'(A_{k+1}, C) -> Fun'(A_k, C) x_{Fun'(A_k, D)} Fun'(A_{k+1}, D)`` for ``1 <= k <= 5``."""
    gs = groupoids or _pipeline_groupoids(inst)
    (CA, DA), (CB, DB) = gs[k - 1], gs[k]
    res_c = _restrict_diagrams(CB, CA)
    res_d = _restrict_diagrams(DB, DA)
    push_a = _push_diagrams(inst.p, CA, DA)
    push_b = _push_diagrams(inst.p, CB, DB)
    pb = StrictPullback(push_a, res_d, name=f"corner_{k}")
    return GroupoidFunctor(CB, pb,
                           lambda d: (res_c.obj(d), push_b.obj(d)),
                           lambda m: (res_c.mor(m), push_b.mor(m)), name=f"j_{k}")


def _pipeline_groupoids(inst: SpanInstance):
    def make():
        out = []
        for i, (shape, labels) in enumerate(pipeline_shapes(), start=1):
            out.append((labelled_functor_groupoid(inst, shape, labels, False, f"Fun'(A{i},C)"),
                        labelled_functor_groupoid(inst, shape, labels, True, f"Fun'(A{i},D)")))
        return out
    return inst._get("pipeline", make)


def factorization_pipeline_check(p, s: Triple | None = None, t: Triple | None = None,
                                 bound: int = 3, M: int = 2) -> VerificationReport:
    """Each ``j_k`` must be an isofibration whose strict fibers are contractible."""
    inst = p if isinstance(p, SpanInstance) else SpanInstance(p, s, t, bound, M)
    rep = VerificationReport(f"factorization pipeline for {inst.p.name or 'p'}")
    gs = _pipeline_groupoids(inst)
    for k in range(1, 6):
        j = comparison_functor(inst, k, gs)
        rep.run(f"j{k} isofibration", f"pipeline-{k}", None, lambda j=j: isofibration_failure(j))
        rep.run(f"j{k} contractible fibers", f"pipeline-{k}", None, lambda j=j: fibers_contractible(j))
    return rep
