"""Finite categories, functors, pullbacks and triples.

Morphisms are integers.  The first ``len(objects)`` morphisms are the
identities, so ``identity(a) == a`` for an object index ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from .simpset import TruncatedSimplicialSet


class CategoryError(ValueError):
    """Raised with every violated law when a description is not a category."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:5]) + (" ..." if len(self.violations) > 5 else ""))


class FinCategory:
    __slots__ = ("name", "objects", "mor_names", "src", "tgt", "comp", "obj_index",
                 "mor_index", "_hom", "_inverse", "_pb_cache", "_out", "_into")

    def __init__(self, objects: Sequence[str], morphisms: Sequence[tuple[str, str, str]],
                 compose: Mapping[tuple[str, str], str], name: str = "", check: bool = True):
        """Objects, non-identity morphisms ``(name, src, tgt)`` and composites.

        ``compose[(g, f)] = h`` means ``g ∘ f = h``.  Identities are added as
        ``id_<object>`` and composites with them are implicit.
        """
        self.name = name
        self.objects = tuple(objects)
        problems = []
        if len(set(self.objects)) != len(self.objects):
            problems.append("duplicate object names")
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        names = [f"id_{o}" for o in self.objects]
        src = list(range(len(self.objects)))
        tgt = list(range(len(self.objects)))
        for m in morphisms:
            nm, s, t = m
            if s not in self.obj_index or t not in self.obj_index:
                problems.append(f"morphism {nm} has dangling endpoint ({s} -> {t})")
                continue
            if nm.startswith("id_") and nm[3:] in self.obj_index:
                if s == t == nm[3:]:
                    continue  # explicit identity, already present
                problems.append(f"identity name {nm} used for a non-identity")
                continue
            names.append(nm)
            src.append(self.obj_index[s])
            tgt.append(self.obj_index[t])
        self.mor_names = tuple(names)
        self.mor_index = {}
        for i, nm in enumerate(self.mor_names):
            if nm in self.mor_index:
                problems.append(f"duplicate morphism name {nm}")
            self.mor_index[nm] = i
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        comp = {}
        nobj = len(self.objects)
        for i in range(len(self.mor_names)):
            comp[(self.tgt[i], i)] = i
            comp[(i, self.src[i])] = i
        for (g, f), h in compose.items():
            missing = [x for x in (g, f, h) if x not in self.mor_index]
            if missing:
                problems.append(f"unknown morphism name(s) {missing} in composite {g} {f} = {h}")
                continue
            gi, fi, hi = self.mor_index[g], self.mor_index[f], self.mor_index[h]
            if self.src[gi] != self.tgt[fi]:
                problems.append(f"composite {g} {f} given for non-composable pair")
                continue
            if self.src[hi] != self.src[fi] or self.tgt[hi] != self.tgt[gi]:
                problems.append(f"composite {g} {f} = {h} has wrong endpoints")
                continue
            if (gi, fi) in comp and comp[(gi, fi)] != hi:
                problems.append(f"conflicting composite for {g} {f}")
                continue
            comp[(gi, fi)] = hi
        self.comp = comp
        self._hom = {}
        self._out = [[] for _ in range(nobj)]
        self._into = [[] for _ in range(nobj)]
        for i in range(len(self.mor_names)):
            self._hom.setdefault((self.src[i], self.tgt[i]), []).append(i)
            self._out[self.src[i]].append(i)
            self._into[self.tgt[i]].append(i)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}
        self._inverse = None
        self._pb_cache = {}
        if check:
            problems.extend(self.law_violations())
            if problems:
                raise CategoryError(problems)

    # -- basic access ----------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_names)

    def identity(self, a: int) -> int:
        return a

    def is_identity(self, m: int) -> bool:
        return m < len(self.objects)

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._hom.get((a, b), ())

    def out_of(self, a: int) -> list[int]:
        return self._out[a]

    def into(self, b: int) -> list[int]:
        return self._into[b]

    def compose(self, g: int, f: int) -> int:
        """``g ∘ f``."""
        return self.comp[(g, f)]

    def compose_path(self, *ms: int) -> int:
        """``ms[0] ∘ ms[1] ∘ ...``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.comp[(m, out)]
        return out

    def obj(self, name: str) -> int:
        return self.obj_index[name]

    def mor(self, name: str) -> int:
        return self.mor_index[name]

    def describe(self, m: int) -> str:
        return f"{self.mor_names[m]}: {self.objects[self.src[m]]} -> {self.objects[self.tgt[m]]}"

    # -- laws ------------------------------------------------------------
    def law_violations(self) -> list[str]:
        bad = []
        nm = self.mor_names
        for g in range(self.n_morphisms):
            for f in self.into(self.src[g]):
                if (g, f) not in self.comp:
                    bad.append(f"missing composite {nm[g]} {nm[f]}")
        if bad:
            return bad
        for h in range(self.n_morphisms):
            for g in self.into(self.src[h]):
                hg = self.comp[(h, g)]
                for f in self.into(self.src[g]):
                    if self.comp[(hg, f)] != self.comp[(h, self.comp[(g, f)])]:
                        bad.append(f"associativity fails on ({nm[h]}, {nm[g]}, {nm[f]})")
        return bad

    # -- isomorphisms ----------------------------------------------------
    def _inverses(self) -> dict:
        if self._inverse is None:
            inv = {}
            for f in range(self.n_morphisms):
                for g in self.hom(self.tgt[f], self.src[f]):
                    if self.comp[(g, f)] == self.src[f] and self.comp[(f, g)] == self.tgt[f]:
                        inv[f] = g
                        break
            self._inverse = inv
        return self._inverse

    def is_iso(self, m: int) -> bool:
        return m in self._inverses()

    def inverse(self, m: int) -> int:
        return self._inverses()[m]

    def isos(self) -> list[int]:
        return sorted(self._inverses())

    def isos_out_of(self, a: int) -> list[int]:
        inv = self._inverses()
        return [m for m in self._out[a] if m in inv]

    def isos_between(self, a: int, b: int) -> list[int]:
        inv = self._inverses()
        return [m for m in self.hom(a, b) if m in inv]

    def automorphisms(self, a: int) -> list[int]:
        return self.isos_between(a, a)

    def is_groupoid(self) -> bool:
        return len(self._inverses()) == self.n_morphisms

    # -- derived categories -------------------------------------------------
    def opposite(self) -> "FinCategory":
        morph = [(self.mor_names[i], self.objects[self.tgt[i]], self.objects[self.src[i]])
                 for i in range(self.n_objects, self.n_morphisms)]
        comp = {}
        for (g, f), h in self.comp.items():
            if self.is_identity(g) or self.is_identity(f):
                continue
            comp[(self.mor_names[f], self.mor_names[g])] = self.mor_names[h]
        return FinCategory(self.objects, morph, comp, name=f"{self.name}^op", check=False)

    def __repr__(self):
        return f"<FinCategory {self.name or '?'}: {self.n_objects} objects, {self.n_morphisms} morphisms>"

    def __eq__(self, other):
        return (isinstance(other, FinCategory) and self.objects == other.objects
                and self.mor_names == other.mor_names and self.src == other.src
                and self.tgt == other.tgt and self.comp == other.comp)

    def __hash__(self):
        return hash((self.objects, self.mor_names))


def validate_category(raw) -> FinCategory:
    """Build a category from a raw description, raising ``CategoryError``.

    ``raw`` is a mapping with keys ``objects``, ``morphisms`` (triples
    ``name, src, tgt``) and ``compose`` (mapping ``(g, f) -> h``), or an
    already-built category, which is re-checked.
    """
    if isinstance(raw, FinCategory):
        bad = raw.law_violations()
        if bad:
            raise CategoryError(bad)
        return raw
    return FinCategory(raw["objects"], raw["morphisms"], raw.get("compose", {}),
                       name=raw.get("name", ""))


def subcategory(C: FinCategory, morphisms: Iterable[int], name: str = ""):
    """Wide subcategory on ``morphisms`` (identities added); returns ``(S, inclusion)``."""
    keep = sorted(set(morphisms) | set(range(C.n_objects)))
    kset = set(keep)
    morph = [(C.mor_names[m], C.objects[C.src[m]], C.objects[C.tgt[m]]) for m in keep if m >= C.n_objects]
    comp = {}
    for (g, f), h in C.comp.items():
        if g in kset and f in kset and g >= C.n_objects and f >= C.n_objects:
            if h not in kset:
                raise CategoryError([f"subcategory not closed: {C.mor_names[g]} {C.mor_names[f]}"])
            comp[(C.mor_names[g], C.mor_names[f])] = C.mor_names[h]
    S = FinCategory(C.objects, morph, comp, name=name or f"sub({C.name})", check=False)
    inc = FinFunctor(S, C, tuple(range(C.n_objects)), tuple(C.mor_index[n] for n in S.mor_names))
    return S, inc


def core(C: FinCategory) -> FinCategory:
    """Same objects, exactly the isomorphisms."""
    S, _ = subcategory(C, C.isos(), name=f"core({C.name})")
    return S


# ---------------------------------------------------------------------------
# functors


class FinFunctor:
    __slots__ = ("source", "target", "obj_map", "mor_map", "name")

    def __init__(self, source: FinCategory, target: FinCategory, obj_map: Sequence[int],
                 mor_map: Sequence[int], name: str = ""):
        self.source = source
        self.target = target
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)
        self.name = name

    @classmethod
    def from_names(cls, source: FinCategory, target: FinCategory, assignment: Mapping[str, str],
                   name: str = "") -> "FinFunctor":
        """Build from a name assignment; identities follow from objects."""
        bad = []
        obj = []
        for o in source.objects:
            if o not in assignment:
                bad.append(f"object {o} not assigned")
                obj.append(0)
            elif assignment[o] not in target.obj_index:
                bad.append(f"object {o} assigned to unknown {assignment[o]}")
                obj.append(0)
            else:
                obj.append(target.obj_index[assignment[o]])
        mor = list(obj)
        for m in source.mor_names[source.n_objects:]:
            if m not in assignment:
                bad.append(f"morphism {m} not assigned")
                mor.append(0)
            elif assignment[m] not in target.mor_index:
                bad.append(f"morphism {m} assigned to unknown {assignment[m]}")
                mor.append(0)
            else:
                mor.append(target.mor_index[assignment[m]])
        for key in assignment:
            if key not in source.obj_index and key not in source.mor_index:
                bad.append(f"unknown name {key} in functor assignment")
        if bad:
            raise CategoryError(bad)
        F = cls(source, target, obj, mor, name)
        bad = F.violations()
        if bad:
            raise CategoryError(bad)
        return F

    def __call__(self, m: int) -> int:
        return self.mor_map[m]

    def on_object(self, a: int) -> int:
        return self.obj_map[a]

    def violations(self) -> list[str]:
        C, D = self.source, self.target
        bad = []
        for a in range(C.n_objects):
            if self.mor_map[a] != self.obj_map[a]:
                bad.append(f"identity of {C.objects[a]} not preserved")
        for m in range(C.n_morphisms):
            fm = self.mor_map[m]
            if D.src[fm] != self.obj_map[C.src[m]] or D.tgt[fm] != self.obj_map[C.tgt[m]]:
                bad.append(f"endpoints of {C.mor_names[m]} not preserved")
        if bad:
            return bad
        for (g, f), h in C.comp.items():
            if D.comp[(self.mor_map[g], self.mor_map[f])] != self.mor_map[h]:
                bad.append(f"composite {C.mor_names[g]} {C.mor_names[f]} not preserved")
        return bad

    def compose(self, other: "FinFunctor") -> "FinFunctor":
        """``self ∘ other``."""
        return FinFunctor(other.source, self.target,
                          [self.obj_map[a] for a in other.obj_map],
                          [self.mor_map[m] for m in other.mor_map])

    def restrict(self, inc_source: FinFunctor, inc_target: FinFunctor) -> "FinFunctor":
        """Restriction to subcategories given by their inclusions."""
        S, T = inc_source.source, inc_target.source
        back = {m: i for i, m in enumerate(inc_target.mor_map)}
        mor = []
        for i in range(S.n_morphisms):
            img = self.mor_map[inc_source.mor_map[i]]
            if img not in back:
                raise CategoryError([f"{S.mor_names[i]} does not land in the target subcategory"])
            mor.append(back[img])
        return FinFunctor(S, T, [self.obj_map[a] for a in range(S.n_objects)], mor)


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, range(C.n_objects), range(C.n_morphisms), name="id")


# ---------------------------------------------------------------------------
# pullbacks


@dataclass(frozen=True)
class PullbackSquare:
    """``g_prime: apex -> y`` and ``f_prime: apex -> x'`` over ``f: y -> x``, ``g: x' -> x``."""

    f: int
    g: int
    apex: int
    f_prime: int
    g_prime: int
    certificate: Mapping = field(default_factory=dict, compare=False, hash=False)

    def replay(self, C: FinCategory) -> bool:
        """Re-derive uniqueness of every mediating morphism from scratch."""
        for (q, c, d), m in self.certificate.items():
            hits = [u for u in C.hom(q, self.apex)
                    if C.compose(self.g_prime, u) == c and C.compose(self.f_prime, u) == d]
            if hits != [m]:
                return False
        return len(self.certificate) == sum(1 for _ in cones(C, self.f, self.g))


def cones(C: FinCategory, f: int, g: int, apex: int | None = None):
    """Cones ``(q, c: q -> y, d: q -> x')`` with ``f∘c = g∘d``."""
    y, xp = C.src[f], C.src[g]
    apexes = range(C.n_objects) if apex is None else (apex,)
    for q in apexes:
        by_image: dict = {}
        for d in C.hom(q, xp):
            by_image.setdefault(C.compose(g, d), []).append(d)
        for c in C.hom(q, y):
            for d in by_image.get(C.compose(f, c), ()):
                yield q, c, d


def _universal(C: FinCategory, f: int, g: int, p: int, a: int, b: int) -> bool:
    """Is the cone ``(p, a, b)`` over ``(f, g)`` a limit?"""
    for q in range(C.n_objects):
        seen = set()
        for m in C.hom(q, p):
            key = (C.compose(a, m), C.compose(b, m))
            if key in seen:
                return False
            seen.add(key)
        if len(seen) != sum(1 for _ in cones(C, f, g, q)):
            return False
    return True


def is_pullback(C: FinCategory, f: int, g: int, apex: int, g_prime: int, f_prime: int) -> bool:
    """Is the commuting square with legs ``g_prime: apex -> y``, ``f_prime: apex -> x'`` a pullback?"""
    if C.src[g_prime] != apex or C.src[f_prime] != apex:
        return False
    if C.tgt[g_prime] != C.src[f] or C.tgt[f_prime] != C.src[g]:
        return False
    if C.compose(f, g_prime) != C.compose(g, f_prime):
        return False
    key = ("is", f, g, g_prime, f_prime)
    hit = C._pb_cache.get(key)
    if hit is None:
        hit = _universal(C, f, g, apex, g_prime, f_prime)
        C._pb_cache[key] = hit
    return hit


def compute_pullback(C: FinCategory, f: int, g: int, choice: str = "least") -> PullbackSquare | None:
    """Pullback of ``f: y -> x`` and ``g: x' -> x``, or ``None`` if none exists.

    ``choice="least"`` scans apexes and legs by increasing index,
    ``"greatest"`` by decreasing index; the two are used to test that
    nothing depends on the choice.
    """
    if C.tgt[f] != C.tgt[g]:
        raise ValueError("not a cospan")
    key = ("pb", f, g, choice)
    if key in C._pb_cache:
        return C._pb_cache[key]
    found = None
    objs = range(C.n_objects)
    if choice == "greatest":
        objs = reversed(objs)
    for p in objs:
        cand = list(cones(C, f, g, p))
        if choice == "greatest":
            cand.reverse()
        for _, a, b in cand:
            if _universal(C, f, g, p, a, b):
                found = (p, a, b)
                break
        if found:
            break
    result = None
    if found is not None:
        p, a, b = found
        cert = {}
        for q, c, d in cones(C, f, g):
            for m in C.hom(q, p):
                if C.compose(a, m) == c and C.compose(b, m) == d:
                    cert[(q, c, d)] = m
                    break
        result = PullbackSquare(f, g, p, f_prime=b, g_prime=a, certificate=cert)
    C._pb_cache[key] = result
    return result


def pullback_cones(C: FinCategory, f: int, g: int) -> list[tuple[int, int, int]]:
    """Every pullback cone ``(apex, g_prime, f_prime)``: the chosen one composed with isos."""
    key = ("all", f, g)
    hit = C._pb_cache.get(key)
    if hit is not None:
        return hit
    sq = compute_pullback(C, f, g)
    out = []
    if sq is not None:
        for u in C.into(sq.apex):
            if C.is_iso(u):
                out.append((C.src[u], C.compose(sq.g_prime, u), C.compose(sq.f_prime, u)))
    out.sort()
    C._pb_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# triples


class Triple:
    """A category with ingressive and egressive wide subcategories."""

    __slots__ = ("cat", "ingressive", "egressive", "name", "_adequate")

    def __init__(self, cat: FinCategory, ingressive: Iterable[int], egressive: Iterable[int],
                 name: str = "", check: bool = True):
        self.cat = cat
        self.ingressive = frozenset(ingressive)
        self.egressive = frozenset(egressive)
        self.name = name
        self._adequate = None
        if check:
            bad = self.violations()
            if bad:
                raise CategoryError(bad)

    @classmethod
    def from_kinds(cls, C: FinCategory, ingressive="all", egressive="all", name=""):
        """Classes given as ``"all"``, ``"isos"`` or an iterable of morphism names."""
        return cls(C, _resolve(C, ingressive), _resolve(C, egressive), name=name)

    def violations(self) -> list[str]:
        C = self.cat
        bad = []
        for label, S in (("ingressive", self.ingressive), ("egressive", self.egressive)):
            for m in C.isos():
                if m not in S:
                    bad.append(f"{label} class misses isomorphism {C.mor_names[m]}")
            for (g, f), h in C.comp.items():
                if g in S and f in S and h not in S:
                    bad.append(f"{label} class not closed: {C.mor_names[g]} {C.mor_names[f]}")
        return bad

    def is_ambigressive(self, f: int, g: int) -> bool:
        """``f`` ingressive and ``g`` egressive with a common target."""
        C = self.cat
        return f in self.ingressive and g in self.egressive and C.tgt[f] == C.tgt[g]

    def ambigressive_cospans(self):
        C = self.cat
        for f in sorted(self.ingressive):
            for g in C.into(C.tgt[f]):
                if g in self.egressive:
                    yield f, g

    def pullback(self, f: int, g: int) -> PullbackSquare | None:
        return compute_pullback(self.cat, f, g)

    def opposite_roles(self) -> "Triple":
        return Triple(self.cat, self.egressive, self.ingressive, name=f"{self.name}^swap", check=False)

    def __repr__(self):
        return (f"<Triple {self.name or self.cat.name}: {len(self.ingressive)} ingressive, "
                f"{len(self.egressive)} egressive>")


def _resolve(C: FinCategory, spec) -> set[int]:
    if spec == "all":
        return set(range(C.n_morphisms))
    if spec == "isos":
        return set(C.isos())
    if spec == "identities":
        return set(range(C.n_objects))
    out = set(range(C.n_objects))
    for nm in spec:
        if isinstance(nm, int):
            out.add(nm)
        elif nm in C.mor_index:
            out.add(C.mor_index[nm])
        else:
            raise CategoryError([f"unknown morphism {nm}"])
    return out


@dataclass
class AdequacyReport:
    ok: bool
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_adequate(t: Triple) -> AdequacyReport:
    """Pullbacks of ingressives along egressives exist and stay in the classes.

    Every pullback square of a given cospan is the chosen one precomposed
    with an isomorphism, and both classes contain the isomorphisms and are
    closed under composition, so checking the chosen square settles (2).
    """
    if t._adequate is not None:
        return t._adequate
    C = t.cat
    wit = []
    for f, g in t.ambigressive_cospans():
        sq = compute_pullback(C, f, g)
        if sq is None:
            wit.append({"kind": "no pullback", "f": C.mor_names[f], "g": C.mor_names[g]})
            continue
        if sq.f_prime not in t.ingressive:
            wit.append({"kind": "pulled-back ingressive not ingressive", "f": C.mor_names[f],
                        "g": C.mor_names[g], "f'": C.mor_names[sq.f_prime]})
        if sq.g_prime not in t.egressive:
            wit.append({"kind": "pulled-back egressive not egressive", "f": C.mor_names[f],
                        "g": C.mor_names[g], "g'": C.mor_names[sq.g_prime]})
    t._adequate = AdequacyReport(not wit, wit)
    return t._adequate


def functor_of_triples_violations(p: FinFunctor, s: Triple, t: Triple) -> list[str]:
    """Check ``p`` preserves ingressives, egressives and ambigressive pullbacks."""
    C, D = s.cat, t.cat
    bad = []
    for m in s.ingressive:
        if p(m) not in t.ingressive:
            bad.append(f"ingressive {C.mor_names[m]} not sent to an ingressive")
    for m in s.egressive:
        if p(m) not in t.egressive:
            bad.append(f"egressive {C.mor_names[m]} not sent to an egressive")
    for f, g in s.ambigressive_cospans():
        sq = compute_pullback(C, f, g)
        if sq is None:
            continue
        if not is_pullback(D, p(f), p(g), p.on_object(sq.apex), p(sq.g_prime), p(sq.f_prime)):
            bad.append(f"pullback of {C.mor_names[f]} along {C.mor_names[g]} not preserved")
    return sorted(bad)


# ---------------------------------------------------------------------------
# (co)cartesian morphisms


def cocartesian_failure(p: FinFunctor, f: int):
    """Witness against ``f`` being ``p``-cocartesian, or ``None``."""
    C, D = p.source, p.target
    c, c1 = C.src[f], C.tgt[f]
    pf = p(f)
    for f2 in C.out_of(c):
        c2 = C.tgt[f2]
        for h in D.hom(p.on_object(c1), p.on_object(c2)):
            if D.compose(h, pf) != p(f2):
                continue
            lifts = [g for g in C.hom(c1, c2) if p(g) == h and C.compose(g, f) == f2]
            if len(lifts) != 1:
                return {"f''": C.mor_names[f2], "h": D.mor_names[h], "lifts": [C.mor_names[g] for g in lifts]}
    return None


def is_cocartesian_1cat(p: FinFunctor, f: int) -> bool:
    return cocartesian_failure(p, f) is None


def cartesian_failure(p: FinFunctor, f: int):
    C, D = p.source, p.target
    c1, c = C.src[f], C.tgt[f]
    pf = p(f)
    for f2 in C.into(c):
        c2 = C.src[f2]
        for h in D.hom(p.on_object(c2), p.on_object(c1)):
            if D.compose(pf, h) != p(f2):
                continue
            lifts = [g for g in C.hom(c2, c1) if p(g) == h and C.compose(f, g) == f2]
            if len(lifts) != 1:
                return {"f''": C.mor_names[f2], "h": D.mor_names[h], "lifts": [C.mor_names[g] for g in lifts]}
    return None


def is_cartesian_1cat(p: FinFunctor, f: int) -> bool:
    return cartesian_failure(p, f) is None


def restrict_to_triple_parts(p: FinFunctor, s: Triple, t: Triple, part: str):
    """``p_dagger`` (``part="ingressive"``) or ``p^dagger`` (``"egressive"``)."""
    Cs, ic = subcategory(s.cat, getattr(s, part), name=f"{s.cat.name}_{part}")
    Ds, id_ = subcategory(t.cat, getattr(t, part), name=f"{t.cat.name}_{part}")
    return p.restrict(ic, id_), ic, id_


# ---------------------------------------------------------------------------
# nerve


def nerve(C: FinCategory, bound: int) -> TruncatedSimplicialSet:
    """Level ``k``: composable chains ``(m1, ..., mk)``, ``m1`` applied first."""
    levels = [list(range(C.n_objects))]
    if bound >= 1:
        levels.append([(m,) for m in range(C.n_morphisms)])
    for k in range(2, bound + 1):
        levels.append([ch + (m,) for ch in levels[-1] for m in C.out_of(C.tgt[ch[-1]])])

    def face(k, i, ch):
        if k == 1:
            return C.tgt[ch[0]] if i == 0 else C.src[ch[0]]
        if i == 0:
            return ch[1:]
        if i == k:
            return ch[:-1]
        return ch[:i - 1] + (C.compose(ch[i], ch[i - 1]),) + ch[i + 1:]

    def degen(k, i, ch):
        if k == 0:
            return (ch,)
        obj = C.src[ch[i]] if i < k else C.tgt[ch[-1]]
        return ch[:i] + (obj,) + ch[i:]

    return TruncatedSimplicialSet.build(bound, levels, face, degen, name=f"N({C.name})")


# ---------------------------------------------------------------------------
# constructors


def from_poset(elements: Sequence[str], leq, name: str = "") -> FinCategory:
    """Poset category; the morphism ``a -> b`` for ``a <= b`` is named ``a_b``."""
    els = list(elements)
    morph = [(f"{a}_{b}", a, b) for a in els for b in els if a != b and leq(a, b)]
    comp = {}
    for a, b, c in iproduct(els, els, els):
        if a != b and b != c and leq(a, b) and leq(b, c):
            if a == c:
                raise CategoryError([f"not antisymmetric at {a}, {b}"])
            comp[(f"{b}_{c}", f"{a}_{b}")] = f"{a}_{c}"
    return FinCategory(els, morph, comp, name=name)


def walking_arrow() -> FinCategory:
    return FinCategory(["0", "1"], [("u", "0", "1")], {}, name="arrow")


def interval(n: int) -> FinCategory:
    """The poset ``[n]``."""
    return from_poset([str(i) for i in range(n + 1)], lambda a, b: int(a) <= int(b), name=f"[{n}]")


def walking_iso() -> FinCategory:
    return FinCategory(["a", "b"], [("f", "a", "b"), ("g", "b", "a")],
                       {("g", "f"): "id_a", ("f", "g"): "id_b"}, name="iso")


def terminal() -> FinCategory:
    return FinCategory(["pt"], [], {}, name="terminal")


def divisor_lattice(n: int) -> FinCategory:
    divs = [str(d) for d in range(1, n + 1) if n % d == 0]
    return from_poset(divs, lambda a, b: int(b) % int(a) == 0, name=f"div({n})")


def finset_skeleton(n: int) -> FinCategory:
    """Sets ``{0..k-1}`` for ``k <= n`` and all functions between them.

    The function ``a -> b`` with values ``v0 v1 ...`` is named ``s<a>_<b>_<v0v1...>``
    (``e`` for the empty function).
    """
    objs = [str(k) for k in range(n + 1)]
    funcs = {}
    morph = []
    for a in range(n + 1):
        for b in range(n + 1):
            for vals in iproduct(range(b), repeat=a):
                if a == b and vals == tuple(range(a)):
                    funcs[(a, b, vals)] = f"id_{a}"
                    continue
                nm = f"s{a}_{b}_{''.join(map(str, vals)) or 'e'}"
                funcs[(a, b, vals)] = nm
                morph.append((nm, str(a), str(b)))
    comp = {}
    for (a, b, fv), nm_f in funcs.items():
        if nm_f.startswith("id_"):
            continue
        for (b2, c, gv), nm_g in funcs.items():
            if b2 != b or nm_g.startswith("id_"):
                continue
            comp[(nm_g, nm_f)] = funcs[(a, c, tuple(gv[v] for v in fv))]
    return FinCategory(objs, morph, comp, name=f"FinSet<={n}")


def _comp_name(C: FinCategory, m: int) -> str:
    return C.objects[m] if C.is_identity(m) else C.mor_names[m]


def _prod_name(C: FinCategory, D: FinCategory, m: int, k: int) -> str:
    if C.is_identity(m) and D.is_identity(k):
        return f"id_{C.objects[m]}.{D.objects[k]}"
    return f"{_comp_name(C, m)}.{_comp_name(D, k)}"


def product(C: FinCategory, D: FinCategory, name: str = "") -> FinCategory:
    """Product category; the pair ``(m, k)`` is named ``m.k`` with identities written as objects."""
    objs = [f"{a}.{b}" for a in C.objects for b in D.objects]
    morph = []
    for m in range(C.n_morphisms):
        for k in range(D.n_morphisms):
            if C.is_identity(m) and D.is_identity(k):
                continue
            morph.append((_prod_name(C, D, m, k), f"{C.objects[C.src[m]]}.{D.objects[D.src[k]]}",
                          f"{C.objects[C.tgt[m]]}.{D.objects[D.tgt[k]]}"))
    comp = {}
    for (g, f), h in C.comp.items():
        for (g2, f2), h2 in D.comp.items():
            if (C.is_identity(g) and D.is_identity(g2)) or (C.is_identity(f) and D.is_identity(f2)):
                continue
            comp[(_prod_name(C, D, g, g2), _prod_name(C, D, f, f2))] = _prod_name(C, D, h, h2)
    return FinCategory(objs, morph, comp, name=name or f"{C.name}x{D.name}")


def projection(C: FinCategory, D: FinCategory, P: FinCategory, which: int = 1) -> FinFunctor:
    """Projection ``C x D -> D`` (``which=1``) or ``-> C`` (``which=0``) for ``P = product(C, D)``."""
    tgt = D if which == 1 else C
    obj = []
    for o in P.objects:
        a, b = o.split(".")
        obj.append(tgt.obj_index[b if which == 1 else a])
    mor = [0] * P.n_morphisms
    for m in range(C.n_morphisms):
        for k in range(D.n_morphisms):
            mor[P.mor_index[_prod_name(C, D, m, k)]] = k if which == 1 else m
    return FinFunctor(P, tgt, obj, mor, name="pr")


def grothendieck(A: FinCategory, B: FinCategory, phi: FinFunctor, name: str = ""):
    """Total category of the functor ``[1] -> Cat`` picking ``phi: A -> B``.

    Objects are ``0:a`` and ``1:b``; a morphism ``0:a -> 1:b`` is a
    morphism ``phi(a) -> b`` in ``B``.  Returns ``(total, projection to [1])``.
    """
    objs = [f"0:{a}" for a in A.objects] + [f"1:{b}" for b in B.objects]
    kinds = {}
    morph = []
    for m in range(A.n_morphisms):
        nm = f"0:{A.mor_names[m]}"
        kinds[nm] = ("A", m)
        if not A.is_identity(m):
            morph.append((nm, f"0:{A.objects[A.src[m]]}", f"0:{A.objects[A.tgt[m]]}"))
    for m in range(B.n_morphisms):
        nm = f"1:{B.mor_names[m]}"
        kinds[nm] = ("B", m)
        if not B.is_identity(m):
            morph.append((nm, f"1:{B.objects[B.src[m]]}", f"1:{B.objects[B.tgt[m]]}"))
    for a in range(A.n_objects):
        for m in B.out_of(phi.on_object(a)):
            nm = f"u:{A.objects[a]}:{B.mor_names[m]}"
            kinds[nm] = ("U", a, m)
            morph.append((nm, f"0:{A.objects[a]}", f"1:{B.objects[B.tgt[m]]}"))

    def nm_of(kind):
        if kind[0] == "A":
            m = kind[1]
            return f"id_0:{A.objects[m]}" if A.is_identity(m) else f"0:{A.mor_names[m]}"
        if kind[0] == "B":
            m = kind[1]
            return f"id_1:{B.objects[m]}" if B.is_identity(m) else f"1:{B.mor_names[m]}"
        return f"u:{A.objects[kind[1]]}:{B.mor_names[kind[2]]}"

    comp = {}
    names = list(kinds)
    for g in names:
        kg = kinds[g]
        for f in names:
            kf = kinds[f]
            res = None
            if kg[0] == "A" and kf[0] == "A" and A.src[kg[1]] == A.tgt[kf[1]]:
                res = ("A", A.compose(kg[1], kf[1]))
            elif kg[0] == "B" and kf[0] == "B" and B.src[kg[1]] == B.tgt[kf[1]]:
                res = ("B", B.compose(kg[1], kf[1]))
            elif kg[0] == "B" and kf[0] == "U" and B.src[kg[1]] == B.tgt[kf[2]]:
                res = ("U", kf[1], B.compose(kg[1], kf[2]))
            elif kg[0] == "U" and kf[0] == "A" and kg[1] == A.tgt[kf[1]]:
                res = ("U", A.src[kf[1]], B.compose(kg[2], phi(kf[1])))
            if res is None:
                continue
            gn, fn = nm_of(kg), nm_of(kf)
            if gn.startswith("id_") or fn.startswith("id_"):
                continue
            comp[(gn, fn)] = nm_of(res)
    total = FinCategory(objs, morph, comp, name=name or f"Groth({phi.name or 'phi'})")
    I = walking_arrow()
    obj = [0] * A.n_objects + [1] * B.n_objects
    mor = []
    for i, nm in enumerate(total.mor_names):
        if nm.startswith("id_"):
            mor.append(obj[i])
        elif nm.startswith("u:"):
            mor.append(I.mor_index["u"])
        else:
            mor.append(0 if nm.startswith("0:") else 1)
    return total, FinFunctor(total, I, obj, mor, name="p")
