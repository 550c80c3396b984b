"""Truncated bisimplicial sets, box products, divisions and markings.

Bidegree ``(m, n)``: ``m`` is horizontal, ``n`` vertical.  The face keys
used by the search engine are ``(0, i)`` for horizontal faces and
``(1, j)`` for vertical ones.
"""

from __future__ import annotations

from itertools import combinations
from itertools import product as iproduct
from typing import Callable, Hashable, Iterable, Sequence

from ._search import MapSearch, complete
from .simpset import (BoundError, SimplicialMap, Subcomplex, TruncatedSimplicialSet, check_cap,
                      face_of_simplex, fiber_product, find_rlp_failure, identity_map, named_subcomplex,
                      simplex_subcomplex, standard_simplex)
from .spancat import SimplicialGroupoid, SimplicialGroupoidMap
from .subdiv import codegeneracy, coface

H, V = 0, 1


class TruncatedBisimplicialSet:
    """Sets ``X_{mn}`` for ``m <= M``, ``n <= V`` with both sets of structure maps."""

    def __init__(self, M: int, Vb: int, labels: dict, tables: dict, name: str = ""):
        self.M = M
        self.V = Vb
        self.labels = {g: tuple(v) for g, v in labels.items()}
        self.index = {g: {lab: i for i, lab in enumerate(v)} for g, v in self.labels.items()}
        # tables[("d" | "s", direction, m, n, i)] -> tuple
        self.tables = tables
        self.name = name
        self._grades = tuple(sorted(self.labels, key=lambda g: (g[0] + g[1], g[0])))
        self._witness = self._compute_witnesses()
        self._nondeg = {g: tuple(x for x in range(self.size(g)) if self._witness[g][x] is None)
                        for g in self._grades}

    @classmethod
    def build(cls, M: int, Vb: int, level: Callable[[int, int], Iterable[Hashable]],
              face: Callable, degen: Callable, name: str = ""):
        """``face(direction, m, n, i, label)`` and ``degen(...)`` act on labels."""
        labels = {(m, n): list(level(m, n)) for m in range(M + 1) for n in range(Vb + 1)}
        index = {g: {lab: i for i, lab in enumerate(v)} for g, v in labels.items()}
        tables = {}
        for (m, n), labs in labels.items():
            for d, k in ((H, m), (V, n)):
                lower = (m - 1, n) if d == H else (m, n - 1)
                upper = (m + 1, n) if d == H else (m, n + 1)
                if k >= 1:
                    for i in range(k + 1):
                        tables[("d", d, m, n, i)] = tuple(index[lower][face(d, m, n, i, x)] for x in labs)
                if upper in labels:
                    for i in range(k + 1):
                        tables[("s", d, m, n, i)] = tuple(index[upper][degen(d, m, n, i, x)] for x in labs)
        return cls(M, Vb, labels, tables, name)

    def _compute_witnesses(self):
        wit = {}
        for g in self._grades:
            m, n = g
            row = [None] * self.size(g)
            for d, k, lower in ((H, m - 1, (m - 1, n)), (V, n - 1, (m, n - 1))):
                if k < 0:
                    continue
                for i in range(k + 1):
                    for y, x in enumerate(self.tables[("s", d, lower[0], lower[1], i)]):
                        if row[x] is None:
                            row[x] = ((d, i), lower, y)
            wit[g] = tuple(row)
        return wit

    # -- graded-set protocol -------------------------------------------
    def grades(self):
        return self._grades

    def size(self, g) -> int:
        return len(self.labels[g])

    def face_specs(self, g):
        m, n = g
        out = [((H, i), (m - 1, n)) for i in range(m + 1)] if m >= 1 else []
        if n >= 1:
            out += [((V, j), (m, n - 1)) for j in range(n + 1)]
        return tuple(out)

    def face(self, g, key, x):
        return self.tables[("d", key[0], g[0], g[1], key[1])][x]

    def degen(self, g, key, x):
        return self.tables[("s", key[0], g[0], g[1], key[1])][x]

    def witness(self, g, x):
        return self._witness[g][x]

    def nondegenerate(self, g):
        return self._nondeg[g]

    # -- conveniences ----------------------------------------------------
    def hface(self, m, n, i, x):
        return self.tables[("d", H, m, n, i)][x]

    def vface(self, m, n, j, x):
        return self.tables[("d", V, m, n, j)][x]

    def hdegen(self, m, n, i, x):
        return self.tables[("s", H, m, n, i)][x]

    def vdegen(self, m, n, j, x):
        return self.tables[("s", V, m, n, j)][x]

    def counts(self) -> dict:
        return {g: self.size(g) for g in self._grades}

    def column(self, m: int) -> TruncatedSimplicialSet:
        """``n -> X_{mn}``."""
        faces = [()] + [tuple(self.tables[("d", V, m, n, j)] for j in range(n + 1))
                        for n in range(1, self.V + 1)]
        degens = [tuple(self.tables[("s", V, m, n, j)] for j in range(n + 1)) for n in range(self.V)]
        return TruncatedSimplicialSet(self.V, [self.labels[(m, n)] for n in range(self.V + 1)],
                                      tuple(faces), tuple(degens), name=f"{self.name}_{m}*")

    def row(self, n: int) -> TruncatedSimplicialSet:
        """``m -> X_{mn}``."""
        faces = [()] + [tuple(self.tables[("d", H, m, n, i)] for i in range(m + 1))
                        for m in range(1, self.M + 1)]
        degens = [tuple(self.tables[("s", H, m, n, i)] for i in range(m + 1)) for m in range(self.M)]
        return TruncatedSimplicialSet(self.M, [self.labels[(m, n)] for m in range(self.M + 1)],
                                      tuple(faces), tuple(degens), name=f"{self.name}_*{n}")

    def check_identities(self) -> list[str]:
        bad = []
        for m in range(self.M + 1):
            bad += [f"column {m}: {b}" for b in self.column(m).check_identities()]
        for n in range(self.V + 1):
            bad += [f"row {n}: {b}" for b in self.row(n).check_identities()]
        # horizontal and vertical operators commute
        for (m, n) in self._grades:
            for x in range(self.size((m, n))):
                for hk, hl in _ops(m, self.M):
                    for vk, vl in _ops(n, self.V):
                        a = self._apply(V, vk, vl, m + hl, n, self._apply(H, hk, hl, m, n, x))
                        b = self._apply(H, hk, hl, m, n + vl, self._apply(V, vk, vl, m, n, x))
                        if a != b:
                            bad.append(f"operators {hk}/{vk} do not commute at {(m, n)} element {x}")
        return bad

    def _apply(self, d, i, delta, m, n, x):
        kind = "d" if delta < 0 else "s"
        return self.tables[(kind, d, m, n, i)][x]

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<TruncatedBisimplicialSet{nm} M={self.M} V={self.V}>"


def _ops(k, bound):
    out = [(i, -1) for i in range(k + 1)] if k >= 1 else []
    if k + 1 <= bound:
        out += [(i, +1) for i in range(k + 1)]
    return out


class BisimplicialMap:
    def __init__(self, source: TruncatedBisimplicialSet, target: TruncatedBisimplicialSet, components: dict):
        self.source = source
        self.target = target
        self.components = {g: tuple(v) for g, v in components.items()}

    def __call__(self, g, x):
        return self.components[g][x]

    def image(self, g, x):
        return self.components[g][x]

    def violations(self) -> list[str]:
        X, Y = self.source, self.target
        bad = []
        for g in X.grades():
            for x in range(X.size(g)):
                for key, gl in X.face_specs(g):
                    if self(gl, X.face(g, key, x)) != Y.face(g, key, self(g, x)):
                        bad.append(f"face {key} at {g} element {x}")
        return bad


def identity_bimap(X: TruncatedBisimplicialSet) -> BisimplicialMap:
    return BisimplicialMap(X, X, {g: range(X.size(g)) for g in X.grades()})


# ---------------------------------------------------------------------------
# constructions


def box(A: TruncatedSimplicialSet, B: TruncatedSimplicialSet, name: str = "") -> TruncatedBisimplicialSet:
    """``(A box B)_{mn} = A_m x B_n`` with factor-wise structure."""

    def level(m, n):
        return [(a, b) for a in range(A.size(m)) for b in range(B.size(n))]

    def face(d, m, n, i, lab):
        a, b = lab
        return (A.face(m, i, a), b) if d == H else (a, B.face(n, i, b))

    def degen(d, m, n, i, lab):
        a, b = lab
        return (A.degen(m, i, a), b) if d == H else (a, B.degen(n, i, b))

    return TruncatedBisimplicialSet.build(A.bound, B.bound, level, face, degen,
                                          name=name or f"{A.name}□{B.name}")


def box_map(u: SimplicialMap, v: SimplicialMap, src=None, tgt=None) -> BisimplicialMap:
    src = src or box(u.source, v.source)
    tgt = tgt or box(u.target, v.target)
    comps = {}
    for g in src.grades():
        m, n = g
        comps[g] = [tgt.index[g][(u(m, a), v(n, b))] for a, b in src.labels[g]]
    return BisimplicialMap(src, tgt, comps)


def box_hom_count(A, B, X, allowed=None) -> int:
    return MapSearch(box(A, B), X, allowed=allowed).count()


def groupoid_nerve(S: SimplicialGroupoid, Vb: int = 2) -> TruncatedBisimplicialSet:
    """``X_{mn}`` = chains of ``n`` composable morphisms in level ``m``.

    Labels are ``(objects, morphisms)`` with ``n + 1`` objects.
    """

    def chains(G, n):
        out = []

        def grow(objs, mors):
            if len(mors) == n:
                out.append((tuple(objs), tuple(mors)))
                return
            for t, mm in G.isos_from(objs[-1]):
                objs.append(t)
                mors.append(mm)
                grow(objs, mors)
                objs.pop()
                mors.pop()

        for a in G.objects:
            grow([a], [])
        return out

    def face(d, m, n, i, lab):
        objs, mors = lab
        if d == H:
            F = S.face(m, i)
            return (tuple(F.obj(a) for a in objs), tuple(F.mor(x) for x in mors))
        G = S.levels[m]
        if i == 0:
            return (objs[1:], mors[1:])
        if i == n:
            return (objs[:-1], mors[:-1])
        return (objs[:i] + objs[i + 1:], mors[:i - 1] + (G.compose(mors[i], mors[i - 1]),) + mors[i + 1:])

    def degen(d, m, n, i, lab):
        objs, mors = lab
        if d == H:
            F = S.degen(m, i)
            return (tuple(F.obj(a) for a in objs), tuple(F.mor(x) for x in mors))
        G = S.levels[m]
        return (objs[:i + 1] + objs[i:], mors[:i] + (G.identity(objs[i]),) + mors[i:])

    return TruncatedBisimplicialSet.build(S.bound, Vb, lambda m, n: chains(S.levels[m], n),
                                          face, degen, name=f"N({S.name})")


def groupoid_nerve_map(f: SimplicialGroupoidMap, X: TruncatedBisimplicialSet,
                       Y: TruncatedBisimplicialSet) -> BisimplicialMap:
    comps = {}
    for g in X.grades():
        F = f.level(g[0])
        comps[g] = [Y.index[g][(tuple(F.obj(a) for a in objs), tuple(F.mor(x) for x in mors))]
                    for objs, mors in X.labels[g]]
    return BisimplicialMap(X, Y, comps)


# ---------------------------------------------------------------------------
# markings


class Marking:
    """Marked edges of a simplicial set (grade 1) or bisimplicial set (grade (1, 0)).

    Degenerate edges are always added.
    """

    def __init__(self, carrier, marked: Iterable[int] = ()):
        self.carrier = carrier
        bis = isinstance(carrier, TruncatedBisimplicialSet)
        self.grade = (1, 0) if bis else 1
        if bis:
            degenerate = {carrier.hdegen(0, 0, 0, v) for v in range(carrier.size((0, 0)))}
        elif carrier.bound >= 1:
            degenerate = {carrier.degen(0, 0, v) for v in range(carrier.size(0))}
        else:
            degenerate = set()
        self.marked = frozenset(marked) | frozenset(degenerate)

    def __contains__(self, x):
        return x in self.marked

    def respects_path_components(self) -> bool:
        """Edges joined by a vertical 1-simplex are both marked or both unmarked."""
        X = self.carrier
        if not isinstance(X, TruncatedBisimplicialSet) or X.V < 1:
            return True
        for w in range(X.size((1, 1))):
            a, b = X.vface(1, 1, 1, w), X.vface(1, 1, 0, w)
            if (a in self.marked) != (b in self.marked):
                return False
        return True

    def path_closure(self) -> "Marking":
        """Smallest path-respecting marking containing this one."""
        X = self.carrier
        marked = set(self.marked)
        if isinstance(X, TruncatedBisimplicialSet) and X.V >= 1:
            adj: dict = {}
            for w in range(X.size((1, 1))):
                a, b = X.vface(1, 1, 1, w), X.vface(1, 1, 0, w)
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
            todo = list(marked)
            while todo:
                x = todo.pop()
                for y in adj.get(x, ()):
                    if y not in marked:
                        marked.add(y)
                        todo.append(y)
        return Marking(X, marked)


def flat(X) -> Marking:
    return Marking(X)


def sharp(X) -> Marking:
    g = (1, 0) if isinstance(X, TruncatedBisimplicialSet) else 1
    return Marking(X, range(X.size(g)))


def l_marking(A: TruncatedSimplicialSet) -> Marking:
    """Only the nondegenerate edge ``01`` is marked (``A`` labelled by vertex tuples)."""
    e = A.index[1].get((0, 1))
    if e is None:
        raise ValueError("the edge 01 is not in the shape")
    return Marking(A, [e])


def generated_marking(X: TruncatedBisimplicialSet, e: int) -> Marking:
    """Degenerate edges, ``e``, and everything joined to them by vertical paths."""
    return Marking(X, [e]).path_closure()


def marked_box(A: Marking, B: TruncatedSimplicialSet, X: TruncatedBisimplicialSet | None = None) -> Marking:
    """``(a, b)`` in bidegree ``(1, 0)`` is marked iff ``a`` is."""
    X = X or box(A.carrier, B)
    return Marking(X, [x for x, (a, b) in enumerate(X.labels[(1, 0)]) if a in A.marked])


def _allowed_for(source_marking: Marking | None, target_marking: Marking | None):
    if source_marking is None or target_marking is None:
        return None
    g = source_marking.grade
    return {(g, s): target_marking.marked for s in source_marking.marked}


# ---------------------------------------------------------------------------
# divisions


class Division:
    """``A\\X`` (``side="under"``) or ``X/B`` (``side="over"``) as a simplicial set.

    ``under``: level ``n`` holds the maps ``A box Delta^n -> X`` (marked ones
    if markings are given).  ``over``: level ``m`` holds the maps
    ``Delta^m box B -> X``; its marking consists of the 1-simplices sending
    every ``(01, b)`` to a marked edge.  Labels are full value tables.
    """

    def __init__(self, side: str, shape: TruncatedSimplicialSet, X: TruncatedBisimplicialSet,
                 shape_marking: Marking | None = None, marking: Marking | None = None,
                 fixed: Callable | None = None):
        self.side = side
        self.shape = shape
        self.X = X
        self.shape_marking = shape_marking
        self.target_marking = marking
        if side == "under":
            if shape.bound > X.M:
                raise BoundError("shape bound exceeds the horizontal bound")
            bound = X.V
        elif side == "over":
            if shape.bound > X.V:
                raise BoundError("shape bound exceeds the vertical bound")
            bound = X.M
        else:
            raise ValueError(side)
        self.bound = bound
        self.boxes = []
        levels = []
        for k in range(bound + 1):
            D = standard_simplex(k, bound)
            bx = box(shape, D) if side == "under" else box(D, shape)
            self.boxes.append(bx)
            allowed = None
            if side == "under" and shape_marking is not None and marking is not None:
                bm = marked_box(shape_marking, D, bx)
                allowed = _allowed_for(bm, marking)
            pins = fixed(k, bx) if fixed is not None else None
            search = MapSearch(bx, X, fixed=pins, allowed=allowed)
            tabs = []
            for a in search:
                full = complete(bx, X, a)
                tabs.append(tuple(full[g] for g in bx.grades()))
            tabs.sort()
            levels.append(tabs)
        self.sset = TruncatedSimplicialSet.build(bound, levels, self._face, self._degen,
                                                 name=f"{'A' if side == 'under' else 'B'}-division")
        self.marking = None
        if side == "over" and marking is not None and bound >= 1:
            bx = self.boxes[1]
            edge = bx.labels[(1, 0)]
            d01 = standard_simplex(1, bound).index[1][(0, 1)]
            pos = [i for i, (a, b) in enumerate(edge) if a == d01]
            gi = bx.grades().index((1, 0))
            self.marking = Marking(self.sset, [x for x, tab in enumerate(self.sset.labels[1])
                                               if all(tab[gi][i] in marking.marked for i in pos)])

    def value(self, k: int, x: int, g, element) -> int:
        """Value of the ``x``-th map at level ``k`` on a box element label."""
        bx = self.boxes[k]
        tab = self.sset.labels[k][x]
        return tab[bx.grades().index(g)][bx.index[g][element]]

    def _reindex(self, k_from, k_to, op, tab):
        """Precompose a level ``k_from`` table with the simplex operator ``op: [k_to] -> [k_from]``."""
        src = self.boxes[k_from]
        dst = self.boxes[k_to]
        D_from = standard_simplex(k_from, self.bound)
        out = []
        for g in dst.grades():
            row = []
            gi = src.grades().index(g)
            for a, b in dst.labels[g]:
                if self.side == "under":
                    lab = tuple(op[v] for v in standard_simplex(k_to, self.bound).labels[g[1]][b])
                    el = (a, D_from.index[g[1]][lab])
                else:
                    lab = tuple(op[v] for v in standard_simplex(k_to, self.bound).labels[g[0]][a])
                    el = (D_from.index[g[0]][lab], b)
                row.append(tab[gi][src.index[g][el]])
            out.append(tuple(row))
        return tuple(out)

    def _face(self, k, i, tab):
        return self._reindex(k, k - 1, coface(k, i), tab)

    def _degen(self, k, i, tab):
        return self._reindex(k, k + 1, codegeneracy(k, i), tab)


def under(A: TruncatedSimplicialSet, X: TruncatedBisimplicialSet, A_marking: Marking | None = None,
          X_marking: Marking | None = None) -> TruncatedSimplicialSet:
    return Division("under", A, X, A_marking, X_marking).sset


def over(X: TruncatedBisimplicialSet, B: TruncatedSimplicialSet, X_marking: Marking | None = None):
    """Returns ``(simplicial set, marking or None)``."""
    d = Division("over", B, X, None, X_marking)
    return d.sset, d.marking


def adjunction_counts(A: TruncatedSimplicialSet, B: TruncatedSimplicialSet, X: TruncatedBisimplicialSet,
                      A_marking: Marking | None = None, X_marking: Marking | None = None) -> tuple[int, int, int]:
    """``|Hom(A box B, X)|``, ``|Hom(B, A\\X)|``, ``|Hom(A, X/B)|`` (marked when markings are given)."""
    marked = A_marking is not None and X_marking is not None
    bx = box(A, B)
    allowed = _allowed_for(marked_box(A_marking, B, bx), X_marking) if marked else None
    n_box = MapSearch(bx, X, allowed=allowed).count()
    left = Division("under", A, X, A_marking, X_marking)
    n_under = MapSearch(B, left.sset).count()
    right = Division("over", B, X, None, X_marking)
    allowed_r = _allowed_for(A_marking, right.marking) if marked else None
    n_over = MapSearch(A, right.sset, allowed=allowed_r).count()
    return n_box, n_under, n_over


def adjunction_witness(A, B, X, A_marking=None, X_marking=None) -> dict:
    """Build both transposes explicitly and check that they are mutually inverse.

    ``Phi`` sends ``h: A box B -> X`` to ``b -> h(-, b)`` in ``A\\X``; ``Psi``
    evaluates back.  Raises ``AssertionError`` with a witness on failure.
    """
    marked = A_marking is not None and X_marking is not None
    bx = box(A, B)
    allowed = _allowed_for(marked_box(A_marking, B, bx), X_marking) if marked else None
    homs = [complete(bx, X, a) for a in MapSearch(bx, X, allowed=allowed)]
    left = Division("under", A, X, A_marking, X_marking)
    D = left.sset
    transposes = []
    for h in homs:
        comps = []
        for n in B.grades():
            row = []
            for b in range(B.size(n)):
                # the map A box Delta^n -> X given by (a, tau) -> h(a, B.act(n, b, tau))
                # vertical degrees above B's bound are degenerate and get completed
                box_n = left.boxes[n]
                Dn = standard_simplex(n, left.bound)
                assign = {}
                for g in box_n.grades():
                    for s in box_n.nondegenerate(g):
                        a, tau = box_n.labels[g][s]
                        bb = B.act(n, b, Dn.labels[g[1]][tau])
                        assign[(g, s)] = h[g][bx.index[g][(a, bb)]]
                full = complete(box_n, X, assign)
                idx = D.index[n].get(tuple(full[g] for g in box_n.grades()))
                if idx is None:
                    raise AssertionError(f"transpose of a map is not a simplex of the division at level {n}")
                row.append(idx)
            comps.append(row)
        g_map = SimplicialMap(B, D, comps)
        if g_map.violations():
            raise AssertionError("transpose is not simplicial")
        transposes.append(g_map.components)
    # Psi: evaluate at the top simplex of Delta^n
    back = []
    for comps in transposes:
        h = {}
        for g in bx.grades():
            m, n = g
            top = left.boxes[n]
            full = tuple(range(n + 1))
            vals = []
            for a, b in bx.labels[g]:
                x = comps[n][b]
                tau = standard_simplex(n, left.bound).index[n][full]
                vals.append(left.value(n, x, (m, n), (a, tau)))
            h[g] = tuple(vals)
        back.append(h)
    if sorted(tuple(h[g] for g in bx.grades()) for h in homs) != sorted(
            tuple(h[g] for g in bx.grades()) for h in back):
        raise AssertionError("the two transposes are not mutually inverse")
    if len(set(transposes)) != len(transposes):
        raise AssertionError("the transpose is not injective")
    return {"maps": len(homs), "marked": marked}


# ---------------------------------------------------------------------------
# comparison maps


def _push(f: BisimplicialMap, DX: Division, DY: Division) -> SimplicialMap:
    """Post-composition ``A\\X -> A\\Y`` (or ``X/B -> Y/B``)."""
    comps = []
    for k in DX.sset.grades():
        bx = DX.boxes[k]
        row = []
        for tab in DX.sset.labels[k]:
            new = tuple(tuple(f(g, v) for v in vals) for g, vals in zip(bx.grades(), tab))
            row.append(DY.sset.index[k][new])
        comps.append(row)
    return SimplicialMap(DX.sset, DY.sset, comps)


def _restrict(u: SimplicialMap, big: Division, small: Division) -> SimplicialMap:
    """Precomposition with ``u box id``: ``A'\\X -> A\\X`` for ``u: A -> A'``."""
    comps = []
    for k in big.sset.grades():
        sb, bb = small.boxes[k], big.boxes[k]
        row = []
        for tab in big.sset.labels[k]:
            new = []
            for g in sb.grades():
                gi = bb.grades().index(g)
                coord = g[0] if big.side == "under" else g[1]
                vals = []
                for a, b in sb.labels[g]:
                    el = (u(coord, a), b) if big.side == "under" else (a, u(coord, b))
                    vals.append(tab[gi][bb.index[g][el]])
                new.append(tuple(vals))
            row.append(small.sset.index[k][tuple(new)])
        comps.append(row)
    return SimplicialMap(big.sset, small.sset, comps)


def pair_map(u: SimplicialMap, f: BisimplicialMap, u_markings=(None, None), f_markings=(None, None)):
    """``<u\\f>: A'\\X -> A\\X x_{A\\Y} A'\\Y`` for a monomorphism ``u: A -> A'``.

    Returns ``(map, pieces)`` where ``pieces`` holds the divisions used.
    """
    if not u.is_injective():
        raise ValueError("u must be a monomorphism")
    mA, mA2 = u_markings
    mX, mY = f_markings
    A, A2 = u.source, u.target
    X, Y = f.source, f.target
    dA2X = Division("under", A2, X, mA2, mX)
    dAX = Division("under", A, X, mA, mX)
    dAY = Division("under", A, Y, mA, mY)
    dA2Y = Division("under", A2, Y, mA2, mY)
    res_x = _restrict(u, dA2X, dAX)
    push_a = _push(f, dAX, dAY)
    res_y = _restrict(u, dA2Y, dAY)
    push_a2 = _push(f, dA2X, dA2Y)
    P, p1, p2 = fiber_product(push_a, res_y)
    comps = []
    for k in dA2X.sset.grades():
        comps.append([P.index[k][(res_x(k, x), push_a2(k, x))] for x in range(dA2X.sset.size(k))])
    return SimplicialMap(dA2X.sset, P, comps), {"A'\\X": dA2X, "A\\X": dAX, "A\\Y": dAY, "A'\\Y": dA2Y}


def pair_map_over(f: BisimplicialMap, v: SimplicialMap):
    """``<f/v>: X/B' -> X/B x_{Y/B} Y/B'`` for a monomorphism ``v: B -> B'``."""
    if not v.is_injective():
        raise ValueError("v must be a monomorphism")
    X, Y = f.source, f.target
    B, B2 = v.source, v.target
    dXB2 = Division("over", B2, X)
    dXB = Division("over", B, X)
    dYB = Division("over", B, Y)
    dYB2 = Division("over", B2, Y)
    res_x = _restrict(v, dXB2, dXB)
    push_b = _push(f, dXB, dYB)
    res_y = _restrict(v, dYB2, dYB)
    push_b2 = _push(f, dXB2, dYB2)
    P, _, _ = fiber_product(push_b, res_y)
    comps = [[P.index[k][(res_x(k, x), push_b2(k, x))] for x in range(dXB2.sset.size(k))]
             for k in dXB2.sset.grades()]
    return SimplicialMap(dXB2.sset, P, comps)


def pushout_product_box(u: Subcomplex, v: Subcomplex):
    """``u (.)' v``: the union ``A box B' cup A' box B`` inside ``A' box B'``.

    ``u`` and ``v`` are subcomplexes of standard simplices (or any ambients).
    Returns ``(union as bisimplicial set, its inclusion into A' box B')``.
    """
    big = box(u.ambient, v.ambient)
    keep = {}
    for g in big.grades():
        m, n = g
        keep[g] = [x for x, (a, b) in enumerate(big.labels[g])
                   if a in u.members[m] or b in v.members[n]]
    labels = {g: [big.labels[g][x] for x in keep[g]] for g in big.grades()}
    pos = {g: {x: i for i, x in enumerate(keep[g])} for g in big.grades()}
    tables = {}
    for key, tab in big.tables.items():
        kind, d, m, n, i = key
        g = (m, n)
        if kind == "d":
            tgt = (m - 1, n) if d == H else (m, n - 1)
        else:
            tgt = (m + 1, n) if d == H else (m, n + 1)
        tables[key] = tuple(pos[tgt][tab[x]] for x in keep[g])
    U = TruncatedBisimplicialSet(big.M, big.V, labels, tables, name="pushout-product")
    inc = BisimplicialMap(U, big, {g: keep[g] for g in big.grades()})
    return U, inc


def solve_bilifting(i: BisimplicialMap, f: BisimplicialMap, top: BisimplicialMap,
                    bottom: BisimplicialMap) -> int:
    """Number of fillers of a square of bisimplicial sets against an inclusion ``i``."""
    S, T = i.source, i.target
    fixed = {(g, i(g, a)): top(g, a) for g in S.grades() for a in S.nondegenerate(g)}
    return MapSearch(T, f.source, fixed=fixed, over=(f.image, bottom.image)).count()


# ---------------------------------------------------------------------------
# Reedy fibrations and fixed-edge spaces


def reedy_failure(f: BisimplicialMap, up_to: int | None = None):
    """Witness that some ``<boundary(m) ⊆ Delta^m \\ f>`` lacks horn fillers, or ``None``."""
    M = f.source.M if up_to is None else min(up_to, f.source.M)
    for m in range(M + 1):
        D = standard_simplex(m, m)
        bd = named_subcomplex("boundary", m, bound=m)
        u = bd.inclusion()
        u = SimplicialMap(u.source, D, u.components)
        g, _ = pair_map(u, f)
        w = find_rlp_failure(g, "horns", min(g.source.bound, f.source.V))
        if w is not None:
            return {"m": m, **w}
    return None


def is_reedy_fibration(f: BisimplicialMap, up_to: int | None = None) -> bool:
    return reedy_failure(f, up_to) is None


def _edge_pins(X: TruncatedBisimplicialSet, e: int, A: TruncatedSimplicialSet):
    """Pins making the restriction to ``01 box Delta^k`` constant at ``e``."""
    e01 = A.index[1].get((0, 1))
    if e01 is None:
        raise ValueError("the edge 01 is not in the shape")

    def pins(k, bx):
        out = {}
        x = e
        for l in range(k + 1):
            D = standard_simplex(k, bx.V)
            for tau in range(D.size(l)):
                out[((1, l), bx.index[(1, l)][(e01, tau)])] = x
            if l < k:
                x = X.vdegen(1, l, 0, x)
        return out

    return pins


def fixed_edge_space(A: Subcomplex, X: TruncatedBisimplicialSet, e: int) -> TruncatedSimplicialSet:
    """Maps ``A box Delta^m -> X`` restricting to the constant ``e`` on ``01 box Delta^m``."""
    S = A.as_sset()
    return Division("under", S, X, fixed=_edge_pins(X, e, S)).sset


def fixed_edge_division(A: Subcomplex, X: TruncatedBisimplicialSet, e: int) -> Division:
    S = A.as_sset()
    return Division("under", S, X, fixed=_edge_pins(X, e, S))


def strict_pullback_check(A: Subcomplex, f: BisimplicialMap, e: int) -> bool:
    """Replay: the fixed-edge square over ``A ⊆ Delta^n`` is a strict pullback.

    The horizontal maps are inclusions, so the square is a pullback exactly
    when a simplex of ``Delta^n\\X`` has the 01 edge fixed at ``e`` iff its
    image in ``Delta^n\\Y x_{A\\Y} A\\X`` lies in the fixed-edge corner.
    """
    n = max(max(lab) for lab in A.ambient.labels[0])
    full = named_subcomplex("full", n, bound=A.ambient.bound)
    X, Y = f.source, f.target
    fe = f((1, 0), e)
    u = _subcomplex_map(A, full)
    top = fixed_edge_division(full, X, e).sset
    corner_x = fixed_edge_division(A, X, e).sset
    corner_y = fixed_edge_division(full, Y, fe).sset
    big_x = Division("under", full.as_sset(), X)
    big_a = Division("under", A.as_sset(), X)
    big_y = Division("under", full.as_sset(), Y)
    r = _restrict(u, big_x, big_a)
    p = _push(f, big_x, big_y)
    for k in big_x.sset.grades():
        for x in range(big_x.sset.size(k)):
            in_top = big_x.sset.labels[k][x] in top.index[k]
            in_corner = (big_a.sset.labels[k][r(k, x)] in corner_x.index[k]
                         and big_y.sset.labels[k][p(k, x)] in corner_y.index[k])
            if in_top != in_corner:
                return False
    return True


def _subcomplex_map(A: Subcomplex, B: Subcomplex) -> SimplicialMap:
    SA, SB = A.as_sset(), B.as_sset()
    return SimplicialMap(SA, SB, [[SB.index[k][lab] for lab in SA.labels[k]] for k in SA.grades()])


# ---------------------------------------------------------------------------
# the pointwise criterion


def _trivial_fibration_failure(g: SimplicialMap):
    return find_rlp_failure(g, "boundaries", g.source.bound)


def pointwise_crosscheck(f: BisimplicialMap, A: Subcomplex, X_marking: Marking,
                         Y_marking: Marking | None = None) -> dict:
    """Evaluate both sides of the pointwise trivial-fibration criterion.

    Side one: ``<i^L \\ f>`` (marked divisions) is a trivial fibration.
    Side two: for every marked ``e``, the fixed-edge comparison ``p_e`` is
    a trivial fibration.  Trivial fibrations are decided against
    boundaries up to the vertical bound.
    """
    X, Y = f.source, f.target
    Y_marking = Y_marking or sharp(Y)
    n = max(max(lab) for lab in A.ambient.labels[0])
    full = named_subcomplex("full", n, bound=A.ambient.bound)
    SA, SF = A.as_sset(), full.as_sset()
    u = _subcomplex_map(A, full)
    g, _ = pair_map(u, f, (l_marking(SA), l_marking(SF)), (X_marking, Y_marking))
    side1 = _trivial_fibration_failure(g)
    side2 = {}
    for e in sorted(X_marking.marked):
        pe = fixed_edge_comparison(A, f, e)
        w = _trivial_fibration_failure(pe)
        side2[e] = w
    ok1 = side1 is None
    ok2 = all(w is None for w in side2.values())
    return {"side1": ok1, "side2": ok2, "agree": ok1 == ok2,
            "witness1": side1, "failing_edges": [e for e, w in side2.items() if w is not None]}


def fixed_edge_comparison(A: Subcomplex, f: BisimplicialMap, e: int) -> SimplicialMap:
    """``p_e: (Delta^n\\X)^e -> (Delta^n\\Y)^{f e} x_{(A\\Y)^{f e}} (A\\X)^e``."""
    X, Y = f.source, f.target
    fe = f((1, 0), e)
    n = max(max(lab) for lab in A.ambient.labels[0])
    full = named_subcomplex("full", n, bound=A.ambient.bound)
    u = _subcomplex_map(A, full)
    top = fixed_edge_division(full, X, e)
    ax = fixed_edge_division(A, X, e)
    ay = fixed_edge_division(A, Y, fe)
    fy = fixed_edge_division(full, Y, fe)
    to_fy = _push(f, top, fy)
    to_ax = _restrict(u, top, ax)
    P, _, _ = fiber_product(_restrict(u, fy, ay), _push(f, ax, ay))
    comps = [[P.index[k][(to_fy(k, x), to_ax(k, x))] for x in range(top.sset.size(k))]
             for k in top.sset.grades()]
    return SimplicialMap(top.sset, P, comps)


# ---------------------------------------------------------------------------
# left spines


def left_spine_factorization_check(n: int, targets: Sequence = ()) -> dict:
    """Subcomplex identities behind the left-spine reduction, for ``3 <= n``.

    (a) ``horn(n, 0) = L_n ∪ d_1 Delta^n ∪ Q`` with ``Q = d_2 ∪ ... ∪ d_n``;
    (b) ``L_n ∪ d_1 Delta^n`` is the pushout of ``L_n`` and ``d_1 Delta^n``
        over the spine of ``d_1 Delta^n``: they meet exactly in that spine,
        and maps of the union into each target are exactly compatible pairs;
    (c) ``Q`` is ``Delta^{0,1} * boundary(Delta^{2..n})`` and its meet with
        ``L_n ∪ d_1 Delta^n`` is ``Delta^{0,1} ∪ Delta^0 * boundary(Delta^{2..n})``,
        compared as sets of vertex sets.

    ``targets`` are simplicial sets of bound ``>= n`` (nerves, say).
    """
    check_cap(n)
    if n < 3:
        raise ValueError("needs n >= 3")
    L = named_subcomplex("left_spine", n, bound=n)
    amb = L.ambient
    d1 = face_of_simplex(n, 1, bound=n, ambient=amb)
    Q = face_of_simplex(n, 2, bound=n, ambient=amb)
    for j in range(3, n + 1):
        Q = Q | face_of_simplex(n, j, bound=n, ambient=amb)
    union_ok = (L | d1 | Q) == named_subcomplex("horn", n, 0, bound=n, ambient=amb)

    spine = simplex_subcomplex(n, [(0, 2)] + [(i, i + 1) for i in range(2, n)], ambient=amb)
    meet_ok = (L & d1) == spine
    LU = L | d1
    SL, Sd = L.as_sset(), d1.as_sset()
    homs_ok = True
    for T in targets:
        whole = MapSearch(LU.as_sset(), T).count()
        pairs = 0
        for a in MapSearch(SL, T):
            pins = {(k, s): a[(k, SL.index[k][Sd.labels[k][s]])]
                    for k in Sd.grades() for s in Sd.nondegenerate(k)
                    if Sd.labels[k][s] in SL.index[k]}
            pairs += MapSearch(Sd, T, fixed=pins).count()
        homs_ok = homs_ok and whole == pairs

    def vertex_sets(sub):
        return {frozenset(lab) for k in amb.grades() for lab in sub.nondegenerate_labels(k)}

    rest = frozenset(range(2, n + 1))
    proper = [frozenset(c) for r in range(len(rest)) for c in combinations(sorted(rest), r)]
    join = {h | s for h in map(frozenset, ((), (0,), (1,), (0, 1))) for s in proper} - {frozenset()}
    cone = {frozenset(h) | s for h in ((), (0,)) for s in proper} - {frozenset()}
    join_ok = vertex_sets(Q) == join and vertex_sets(LU & Q) == cone | {frozenset((0, 1)), frozenset((1,))}
    return {"n": n, "union": union_ok, "pushout": meet_ok and homs_ok, "join": join_ok,
            "ok": union_ok and meet_ok and homs_ok and join_ok}
