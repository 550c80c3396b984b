"""Line-oriented text format for finite categories, triples and functors.

    # comments run to the end of the line
    CATEGORY C
    OBJECTS
    a b c
    MORPHISMS
    f a b
    g b c
    h a c
    COMPOSE
    g f = h
    INGRESSIVE
    all
    EGRESSIVE
    isos f

    FUNCTOR p C D
    a = x
    f = u

Identities are implicit and named ``id_<object>``.  A class line lists
``all``, ``isos`` and morphism names; isomorphisms are always included.
A missing class section means ``all``.  Without a ``CATEGORY`` header the
first category takes the name passed to :func:`parse`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .fincat import CategoryError, FinCategory, FinFunctor, Triple

SECTIONS = ("OBJECTS", "MORPHISMS", "COMPOSE", "INGRESSIVE", "EGRESSIVE")
_NAME = re.compile(r"^[A-Za-z0-9_.:<>=+\-']+$")


class ParseError(ValueError):
    def __init__(self, line: int, message: str, source: str = ""):
        self.line = line
        self.message = message
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")


@dataclass
class _CatDraft:
    name: str
    line: int
    objects: list = field(default_factory=list)
    morphisms: list = field(default_factory=list)   # (name, src, tgt, line)
    compose: list = field(default_factory=list)     # (g, f, h, line)
    classes: dict = field(default_factory=dict)     # section -> [(token, line)]


@dataclass
class _FunctorDraft:
    name: str
    source: str
    target: str
    line: int
    assignment: list = field(default_factory=list)  # (key, value, line)


@dataclass
class Description:
    """Parsed contents of one file, in file order."""

    categories: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)

    def category(self, name: str | None = None) -> FinCategory:
        return self.categories[name or next(iter(self.categories))]

    def triple(self, name: str | None = None) -> Triple:
        return self.triples[name or next(iter(self.triples))]

    def functor(self, name: str | None = None) -> FinFunctor:
        if not self.functors:
            raise KeyError("no FUNCTOR block in the description")
        return self.functors[name or next(iter(self.functors))]

    def functor_triples(self, name: str | None = None):
        """``(p, source triple, target triple)``."""
        p = self.functor(name)
        return p, self.triples[p.source.name], self.triples[p.target.name]


def _tokens(raw: str) -> list[str]:
    return raw.split("#", 1)[0].split()


def parse(text: str, default_name: str = "C", source: str = "") -> Description:
    def fail(line, msg):
        raise ParseError(line, msg, source)

    cats: list[_CatDraft] = []
    funs: list[_FunctorDraft] = []
    section = None
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head = toks[0]
        if head == "CATEGORY":
            if len(toks) != 2:
                fail(lineno, "expected 'CATEGORY <name>'")
            current = _CatDraft(toks[1], lineno)
            cats.append(current)
            section = None
            continue
        if head == "FUNCTOR":
            if len(toks) != 4:
                fail(lineno, "expected 'FUNCTOR <name> <source> <target>'")
            current = _FunctorDraft(toks[1], toks[2], toks[3], lineno)
            funs.append(current)
            section = "FUNCTOR"
            continue
        if head in SECTIONS:
            if len(toks) != 1:
                fail(lineno, f"section header {head} takes no arguments")
            if not isinstance(current, _CatDraft):
                if current is not None or cats:
                    fail(lineno, f"section {head} outside a CATEGORY block")
                current = _CatDraft(default_name, lineno)
                cats.append(current)
            if head in ("INGRESSIVE", "EGRESSIVE") and head in current.classes:
                fail(lineno, f"duplicate {head} section")
            section = head
            if head in ("INGRESSIVE", "EGRESSIVE"):
                current.classes[head] = []
            continue
        if section is None:
            fail(lineno, f"unexpected {head!r} before any section header")
        for t in toks:
            if t != "=" and not _NAME.match(t):
                fail(lineno, f"bad name {t!r}")
        if section == "OBJECTS":
            current.objects += [(t, lineno) for t in toks]
        elif section == "MORPHISMS":
            if len(toks) != 3:
                fail(lineno, "expected '<name> <source> <target>'")
            current.morphisms.append((*toks, lineno))
        elif section == "COMPOSE":
            if len(toks) != 4 or toks[2] != "=":
                fail(lineno, "expected '<g> <f> = <h>'")
            current.compose.append((toks[0], toks[1], toks[3], lineno))
        elif section == "FUNCTOR":
            if len(toks) != 3 or toks[1] != "=":
                fail(lineno, "expected '<name> = <image>'")
            current.assignment.append((toks[0], toks[2], lineno))
        else:
            current.classes[section] += [(t, lineno) for t in toks]

    out = Description()
    for d in cats:
        C, T = _build_category(d, fail)
        if d.name in out.categories:
            fail(d.line, f"duplicate category {d.name}")
        out.categories[d.name] = C
        out.triples[d.name] = T
    for d in funs:
        if d.name in out.functors:
            fail(d.line, f"duplicate functor {d.name}")
        out.functors[d.name] = _build_functor(d, out.categories, fail)
    return out


def _build_category(d: _CatDraft, fail):
    objs = []
    seen = set()
    for o, ln in d.objects:
        if o in seen:
            fail(ln, f"duplicate object {o}")
        seen.add(o)
        objs.append(o)
    if not objs:
        fail(d.line, f"category {d.name} has no objects")
    mor_names = {f"id_{o}" for o in objs}
    morph = []
    for nm, s, t, ln in d.morphisms:
        for end in (s, t):
            if end not in seen:
                fail(ln, f"unknown object {end}")
        if nm in mor_names:
            fail(ln, f"duplicate morphism name {nm}")
        mor_names.add(nm)
        morph.append((nm, s, t))
    comp = {}
    for g, f, h, ln in d.compose:
        for m in (g, f, h):
            if m not in mor_names:
                fail(ln, f"unknown morphism {m}")
        if (g, f) in comp:
            fail(ln, f"composite {g} {f} given twice")
        comp[(g, f)] = h
    try:
        C = FinCategory(objs, morph, comp, name=d.name)
    except CategoryError as e:
        fail(d.line, f"category {d.name} violates the category laws: {e.args[0][0]}")
    kinds = {}
    for sec in ("INGRESSIVE", "EGRESSIVE"):
        toks = d.classes.get(sec)
        if toks is None:
            kinds[sec] = set(range(C.n_morphisms))
            continue
        keep = set(C.isos())
        for t, ln in toks:
            if t == "all":
                keep |= set(range(C.n_morphisms))
            elif t == "isos":
                pass
            elif t in C.mor_index:
                keep.add(C.mor_index[t])
            else:
                fail(ln, f"unknown morphism {t}")
        kinds[sec] = keep
    try:
        T = Triple(C, kinds["INGRESSIVE"], kinds["EGRESSIVE"], name=d.name)
    except CategoryError as e:
        fail(d.line, f"classes of {d.name} are not subcategories: {e.args[0][0]}")
    return C, T


def _build_functor(d: _FunctorDraft, cats: dict, fail) -> FinFunctor:
    for c in (d.source, d.target):
        if c not in cats:
            fail(d.line, f"unknown category {c}")
    S, T = cats[d.source], cats[d.target]
    assign = {}
    for k, v, ln in d.assignment:
        if k not in S.obj_index and k not in S.mor_index:
            fail(ln, f"unknown name {k} in {d.source}")
        if v not in T.obj_index and v not in T.mor_index:
            fail(ln, f"unknown name {v} in {d.target}")
        if k in assign:
            fail(ln, f"{k} assigned twice")
        assign[k] = v
    # identities may be omitted from the assignment
    for m in S.mor_names[:S.n_objects]:
        assign.pop(m, None)
    try:
        return FinFunctor.from_names(S, T, assign, name=d.name)
    except CategoryError as e:
        fail(d.line, f"functor {d.name}: {e.args[0][0]}")


def load(path) -> Description:
    p = Path(path)
    return parse(p.read_text(), default_name=p.stem, source=str(p))


# ---------------------------------------------------------------------------
# writing


def _class_line(C: FinCategory, keep) -> str:
    keep = set(keep)
    if len(keep) == C.n_morphisms:
        return "all"
    extra = [C.mor_names[m] for m in sorted(keep) if not C.is_iso(m)]
    return " ".join(["isos"] + extra)


def dump_category(C: FinCategory, triple: Triple | None = None) -> str:
    lines = [f"CATEGORY {C.name}", "OBJECTS", " ".join(C.objects)]
    if C.n_morphisms > C.n_objects:
        lines.append("MORPHISMS")
        for m in range(C.n_objects, C.n_morphisms):
            lines.append(f"{C.mor_names[m]} {C.objects[C.src[m]]} {C.objects[C.tgt[m]]}")
    comps = sorted((g, f, h) for (g, f), h in C.comp.items()
                   if not C.is_identity(g) and not C.is_identity(f))
    if comps:
        lines.append("COMPOSE")
        lines += [f"{C.mor_names[g]} {C.mor_names[f]} = {C.mor_names[h]}" for g, f, h in comps]
    if triple is not None:
        lines += ["INGRESSIVE", _class_line(C, triple.ingressive),
                  "EGRESSIVE", _class_line(C, triple.egressive)]
    return "\n".join(lines) + "\n"


def dump_functor(p: FinFunctor) -> str:
    S, T = p.source, p.target
    lines = [f"FUNCTOR {p.name or 'p'} {S.name} {T.name}"]
    lines += [f"{o} = {T.objects[p.on_object(i)]}" for i, o in enumerate(S.objects)]
    lines += [f"{S.mor_names[m]} = {T.mor_names[p(m)]}" for m in range(S.n_objects, S.n_morphisms)]
    return "\n".join(lines) + "\n"


def dump(desc: Description) -> str:
    parts = [dump_category(C, desc.triples.get(name)) for name, C in desc.categories.items()]
    parts += [dump_functor(p) for p in desc.functors.values()]
    return "\n".join(parts)


def equivalent(a: Description, b: Description) -> bool:
    """Same categories, classes and functors, compared by names."""
    if list(a.categories) != list(b.categories) or list(a.functors) != list(b.functors):
        return False
    for name, C in a.categories.items():
        D = b.categories[name]
        if C.objects != D.objects or set(C.mor_names) != set(D.mor_names):
            return False
        for m, nm in enumerate(C.mor_names):
            k = D.mor_index[nm]
            if (C.objects[C.src[m]], C.objects[C.tgt[m]]) != (D.objects[D.src[k]], D.objects[D.tgt[k]]):
                return False
        ca = {(C.mor_names[g], C.mor_names[f]): C.mor_names[h] for (g, f), h in C.comp.items()}
        cb = {(D.mor_names[g], D.mor_names[f]): D.mor_names[h] for (g, f), h in D.comp.items()}
        if ca != cb:
            return False
        ta, tb = a.triples[name], b.triples[name]
        for x, y in ((ta.ingressive, tb.ingressive), (ta.egressive, tb.egressive)):
            if {C.mor_names[m] for m in x} != {D.mor_names[m] for m in y}:
                return False
    for name, p in a.functors.items():
        q = b.functors[name]
        if (p.source.name, p.target.name) != (q.source.name, q.target.name):
            return False
        S, T = p.source, p.target
        for m, nm in enumerate(S.mor_names):
            if T.mor_names[p(m)] != q.target.mor_names[q(q.source.mor_index[nm])]:
                return False
        for i, o in enumerate(S.objects):
            if T.objects[p.on_object(i)] != q.target.objects[q.on_object(q.source.obj_index[o])]:
                return False
    return True
