"""Finite, dimension-truncated simplicial sets and the lifting deciders built on them.

Simplices are opaque integer indices per level; each level also carries a
list of hashable labels so that construction and debugging stay readable.
Structure lives in integer tables:

* ``faces[k][i][x]`` is ``d_i`` applied to the ``x``-th ``k``-simplex,
* ``degens[k][i][x]`` is ``s_i`` applied to the ``x``-th ``k``-simplex.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from ._search import MapSearch, complete

CAP = 6
DEFAULT_BOUND = 4

FAMILIES = ("boundaries", "horns", "inner_horns", "left_horns")


class BoundError(ValueError):
    """A dimension exceeds the global cap or the bound of an object."""


def check_cap(n: int, what: str = "dimension") -> None:
    if n < 0:
        raise BoundError(f"{what} must be non-negative, got {n}")
    if n > CAP:
        raise BoundError(f"{what} {n} exceeds the global cap {CAP}")


class TruncatedSimplicialSet:
    """Simplicial set with levels ``0..bound``."""

    __slots__ = ("bound", "labels", "faces", "degens", "index", "_witness",
                 "_nondeg", "name", "_act_cache")

    def __init__(self, bound: int, labels, faces, degens, name: str = ""):
        self.bound = bound
        self.labels = tuple(tuple(level) for level in labels)
        self.faces = faces
        self.degens = degens
        self.name = name
        self.index = tuple({lab: i for i, lab in enumerate(level)} for level in self.labels)
        self._witness = self._compute_witnesses()
        self._nondeg = tuple(
            tuple(x for x in range(len(self.labels[k])) if self._witness[k][x] is None)
            for k in range(bound + 1)
        )
        self._act_cache = {}

    @classmethod
    def build(cls, bound: int, levels: Sequence[Sequence[Hashable]],
              face: Callable[[int, int, Hashable], Hashable],
              degen: Callable[[int, int, Hashable], Hashable], name: str = ""):
        """Build from labelled levels and label-level face/degeneracy functions.

        ``face(k, i, label)`` returns the label of ``d_i`` of a ``k``-simplex and
        ``degen(k, i, label)`` the label of ``s_i``.
        """
        levels = [list(lv) for lv in levels]
        index = [{lab: i for i, lab in enumerate(lv)} for lv in levels]
        faces = [()]
        for k in range(1, bound + 1):
            faces.append(tuple(
                tuple(index[k - 1][face(k, i, lab)] for lab in levels[k])
                for i in range(k + 1)))
        degens = []
        for k in range(bound):
            degens.append(tuple(
                tuple(index[k + 1][degen(k, i, lab)] for lab in levels[k])
                for i in range(k + 1)))
        return cls(bound, levels, tuple(faces), tuple(degens), name)

    def _compute_witnesses(self):
        wit = [[None] * len(self.labels[0])]
        for k in range(1, self.bound + 1):
            row = [None] * len(self.labels[k])
            for i in range(k):
                table = self.degens[k - 1][i]
                for y, x in enumerate(table):
                    if row[x] is None:
                        row[x] = (i, y)
            wit.append(row)
        return tuple(tuple(r) for r in wit)

    # -- graded-set protocol -------------------------------------------
    def grades(self):
        return range(self.bound + 1)

    def size(self, k: int) -> int:
        return len(self.labels[k])

    def face_specs(self, k: int):
        if k == 0:
            return ()
        return tuple((i, k - 1) for i in range(k + 1))

    def face(self, k: int, i: int, x: int) -> int:
        return self.faces[k][i][x]

    def degen(self, k: int, i: int, x: int) -> int:
        return self.degens[k][i][x]

    def witness(self, k: int, x: int):
        w = self._witness[k][x]
        if w is None:
            return None
        return (w[0], k - 1, w[1])

    def nondegenerate(self, k: int) -> tuple[int, ...]:
        return self._nondeg[k]

    # -- conveniences ----------------------------------------------------
    def is_degenerate(self, k: int, x: int) -> bool:
        return self._witness[k][x] is not None

    def counts(self) -> list[int]:
        return [len(level) for level in self.labels]

    def nondegenerate_counts(self) -> list[int]:
        return [len(level) for level in self._nondeg]

    def vertices(self, k: int, x: int) -> tuple[int, ...]:
        """Vertices of a simplex in order (as 0-simplex indices)."""
        out = []
        for v in range(k + 1):
            out.append(self.act(k, x, (v,)))
        return tuple(out)

    def act(self, n: int, x: int, op: Sequence[int]) -> int:
        """Apply the simplicial operator of a monotone map ``[m] -> [n]``."""
        op = tuple(op)
        key = (n, x, op)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        image = sorted(set(op))
        level, z = n, x
        for j in reversed(range(n + 1)):
            if j not in image:
                z = self.faces[level][j][z]
                level -= 1
        for p in range(len(op) - 1):
            if op[p] == op[p + 1]:
                z = self.degens[level][p][z]
                level += 1
        self._act_cache[key] = z
        return z

    def check_identities(self) -> list[str]:
        """Return every violated simplicial identity (empty when valid)."""
        bad = []
        N = self.bound
        for k in range(2, N + 1):
            for j in range(k + 1):
                for i in range(j):
                    for x in range(self.size(k)):
                        if self.face(k - 1, i, self.face(k, j, x)) != self.face(k - 1, j - 1, self.face(k, i, x)):
                            bad.append(f"d{i}d{j} != d{j - 1}d{i} at level {k} simplex {x}")
        for k in range(N - 1):
            for j in range(k + 1):
                for i in range(j + 1):
                    for x in range(self.size(k)):
                        if self.degen(k + 1, i, self.degen(k, j, x)) != self.degen(k + 1, j + 1, self.degen(k, i, x)):
                            bad.append(f"s{i}s{j} != s{j + 1}s{i} at level {k} simplex {x}")
        for k in range(N):
            for j in range(k + 1):
                for i in range(k + 2):
                    for x in range(self.size(k)):
                        lhs = self.face(k + 1, i, self.degen(k, j, x))
                        if i < j:
                            rhs = self.degen(k - 1, j - 1, self.face(k, i, x))
                        elif i in (j, j + 1):
                            rhs = x
                        else:
                            rhs = self.degen(k - 1, j, self.face(k, i - 1, x))
                        if lhs != rhs:
                            bad.append(f"d{i}s{j} identity fails at level {k} simplex {x}")
        return bad

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<TruncatedSimplicialSet{nm} bound={self.bound} counts={self.counts()}>"


class SimplicialMap:
    """Level-wise map ``source -> target`` given by index tables.

    The source bound may be smaller than the target bound; the map then
    lives on the levels of the source.
    """

    __slots__ = ("source", "target", "components")

    def __init__(self, source: TruncatedSimplicialSet, target: TruncatedSimplicialSet, components):
        if source.bound > target.bound:
            raise BoundError("source bound exceeds target bound")
        self.source = source
        self.target = target
        self.components = tuple(tuple(c) for c in components)

    def __call__(self, k: int, x: int) -> int:
        return self.components[k][x]

    def image(self, k: int, x: int) -> int:
        return self.components[k][x]

    def violations(self) -> list[str]:
        S, T = self.source, self.target
        bad = []
        for k in range(1, S.bound + 1):
            for i in range(k + 1):
                for x in range(S.size(k)):
                    if self(k - 1, S.face(k, i, x)) != T.face(k, i, self(k, x)):
                        bad.append(f"face d{i} at level {k} simplex {x}")
        for k in range(S.bound):
            for i in range(k + 1):
                for x in range(S.size(k)):
                    if self(k + 1, S.degen(k, i, x)) != T.degen(k, i, self(k, x)):
                        bad.append(f"degeneracy s{i} at level {k} simplex {x}")
        return bad

    def is_injective(self) -> bool:
        return all(len(set(c)) == len(c) for c in self.components)

    def is_iso(self) -> bool:
        return self.source.bound == self.target.bound and all(
            len(set(c)) == len(c) == self.target.size(k) for k, c in enumerate(self.components))

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ other``."""
        comps = [tuple(self.components[k][y] for y in other.components[k])
                 for k in range(other.source.bound + 1)]
        return SimplicialMap(other.source, self.target, comps)

    def key(self):
        return self.components

    def __eq__(self, other):
        return (isinstance(other, SimplicialMap) and self.source is other.source
                and self.target is other.target and self.components == other.components)

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"<SimplicialMap {self.source.name or '?'} -> {self.target.name or '?'}>"


def identity_map(X: TruncatedSimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, [range(X.size(k)) for k in X.grades()])


def map_from_assignment(A, X, assign) -> SimplicialMap:
    full = complete(A, X, assign)
    return SimplicialMap(A, X, [full[k] for k in A.grades()])


# ---------------------------------------------------------------------------
# standard complexes


def monotone_maps(k: int, n: int) -> list[tuple[int, ...]]:
    """All weakly monotone maps ``[k] -> [n]`` as tuples, lexicographic."""
    return list(combinations_with_replacement(range(n + 1), k + 1))


def _delete(k, i, lab):
    return lab[:i] + lab[i + 1:]


def _repeat(k, i, lab):
    return lab[:i + 1] + lab[i:]


def standard_simplex(n: int, bound: int | None = None) -> TruncatedSimplicialSet:
    """The nerve of ``[n]`` truncated at ``bound`` (default ``max(n, 4)``).

    Results are cached, so equal arguments give the identical object.
    """
    check_cap(n)
    if bound is None:
        bound = max(n, DEFAULT_BOUND)
    check_cap(bound, "bound")
    return _standard_simplex(n, bound)


@lru_cache(maxsize=None)
def _standard_simplex(n: int, bound: int) -> TruncatedSimplicialSet:
    levels = [monotone_maps(k, n) for k in range(bound + 1)]
    return TruncatedSimplicialSet.build(bound, levels, _delete, _repeat, name=f"Delta{n}")


def point(bound: int = DEFAULT_BOUND) -> TruncatedSimplicialSet:
    return standard_simplex(0, bound)


def empty_set(bound: int = DEFAULT_BOUND) -> TruncatedSimplicialSet:
    return TruncatedSimplicialSet(bound, [[] for _ in range(bound + 1)],
                                  tuple([()] + [tuple(() for _ in range(k + 1)) for k in range(1, bound + 1)]),
                                  tuple(tuple(() for _ in range(k + 1)) for k in range(bound)),
                                  name="empty")


def map_to_point(X: TruncatedSimplicialSet) -> SimplicialMap:
    P = point(X.bound)
    return SimplicialMap(X, P, [(0,) * X.size(k) for k in X.grades()])


# ---------------------------------------------------------------------------
# subcomplexes


def _same_ambient(a: TruncatedSimplicialSet, b: TruncatedSimplicialSet) -> bool:
    return a is b or (a.labels == b.labels and a.faces == b.faces and a.degens == b.degens)


class Subcomplex:
    """A simplicial subset of ``ambient``, stored as member indices per level."""

    __slots__ = ("ambient", "members", "_sset")

    def __init__(self, ambient: TruncatedSimplicialSet, members: Iterable[Iterable[int]]):
        self.ambient = ambient
        self.members = tuple(frozenset(m) for m in members)
        if len(self.members) != ambient.bound + 1:
            raise ValueError("need one member set per level")
        self._sset = None

    @classmethod
    def generated(cls, ambient: TruncatedSimplicialSet, simplices: Iterable[tuple[int, int]]):
        """Smallest subcomplex containing the given ``(level, index)`` simplices."""
        mem = [set() for _ in ambient.grades()]
        stack = list(simplices)
        while stack:
            k, x = stack.pop()
            if x in mem[k]:
                continue
            mem[k].add(x)
            for i in range(k + 1 if k else 0):
                stack.append((k - 1, ambient.face(k, i, x)))
        for k in range(ambient.bound):
            for x in list(mem[k]):
                for i in range(k + 1):
                    mem[k + 1].add(ambient.degen(k, i, x))
        # degeneracies of degeneracies were added level by level above
        return cls(ambient, mem)

    def _check_same(self, other: "Subcomplex"):
        if not _same_ambient(self.ambient, other.ambient):
            raise ValueError("subcomplexes live in different ambient simplicial sets")

    def union(self, other: "Subcomplex") -> "Subcomplex":
        self._check_same(other)
        return Subcomplex(self.ambient, [a | b for a, b in zip(self.members, other.members)])

    def intersect(self, other: "Subcomplex") -> "Subcomplex":
        self._check_same(other)
        return Subcomplex(self.ambient, [a & b for a, b in zip(self.members, other.members)])

    __or__ = union
    __and__ = intersect

    def __le__(self, other: "Subcomplex") -> bool:
        self._check_same(other)
        return all(a <= b for a, b in zip(self.members, other.members))

    def __eq__(self, other):
        return (isinstance(other, Subcomplex) and _same_ambient(self.ambient, other.ambient)
                and self.members == other.members)

    def __hash__(self):
        return hash(self.members)

    def is_closed(self) -> bool:
        A = self.ambient
        for k in range(1, A.bound + 1):
            for x in self.members[k]:
                if any(A.face(k, i, x) not in self.members[k - 1] for i in range(k + 1)):
                    return False
        for k in range(A.bound):
            for x in self.members[k]:
                if any(A.degen(k, i, x) not in self.members[k + 1] for i in range(k + 1)):
                    return False
        return True

    def nondegenerate_labels(self, k: int) -> list:
        A = self.ambient
        return sorted(A.labels[k][x] for x in self.members[k] if not A.is_degenerate(k, x))

    def labels(self, k: int) -> list:
        return sorted(self.ambient.labels[k][x] for x in self.members[k])

    def as_sset(self) -> TruncatedSimplicialSet:
        """The subcomplex as a simplicial set in its own right (labels kept)."""
        if self._sset is None:
            A = self.ambient
            order = [sorted(m) for m in self.members]
            pos = [{x: i for i, x in enumerate(o)} for o in order]
            faces = [()]
            for k in range(1, A.bound + 1):
                faces.append(tuple(tuple(pos[k - 1][A.face(k, i, x)] for x in order[k])
                                   for i in range(k + 1)))
            degens = tuple(tuple(tuple(pos[k + 1][A.degen(k, i, x)] for x in order[k])
                                 for i in range(k + 1)) for k in range(A.bound))
            labels = [[A.labels[k][x] for x in order[k]] for k in A.grades()]
            self._sset = TruncatedSimplicialSet(A.bound, labels, tuple(faces), degens, name="sub")
        return self._sset

    def inclusion(self) -> SimplicialMap:
        S = self.as_sset()
        A = self.ambient
        return SimplicialMap(S, A, [[A.index[k][lab] for lab in S.labels[k]] for k in S.grades()])


def simplex_subcomplex(n: int, faces: Iterable[Iterable[int]], bound: int | None = None,
                       ambient: TruncatedSimplicialSet | None = None) -> Subcomplex:
    """Subcomplex of ``Delta^n`` generated by faces given as vertex sets."""
    D = ambient if ambient is not None else standard_simplex(n, n if bound is None else bound)
    gens = []
    for f in faces:
        lab = tuple(sorted(set(f)))
        if not lab:
            continue
        gens.append((len(lab) - 1, D.index[len(lab) - 1][lab]))
    return Subcomplex.generated(D, gens)


def named_subcomplex(kind: str, n: int, k: int | None = None, bound: int | None = None,
                     ambient: TruncatedSimplicialSet | None = None) -> Subcomplex:
    """``boundary``, ``horn`` (missing face ``k``), ``spine`` or ``left_spine`` of Delta^n.

    Besides those, ``full`` gives all of Delta^n and ``edge01`` the edge 01.
    """
    check_cap(n)
    verts = range(n + 1)
    if kind == "boundary":
        if n < 0:
            raise ValueError("boundary needs n >= 0")
        faces = [tuple(v for v in verts if v != j) for j in verts] if n >= 1 else []
    elif kind == "horn":
        if n < 1 or k is None or not 0 <= k <= n:
            raise ValueError(f"horn needs n >= 1 and 0 <= k <= n, got n={n}, k={k}")
        faces = [tuple(v for v in verts if v != j) for j in verts if j != k]
    elif kind == "spine":
        if n < 1:
            raise ValueError("spine needs n >= 1")
        faces = [(i, i + 1) for i in range(n)]
    elif kind == "left_spine":
        if n < 2:
            raise ValueError("left spine needs n >= 2")
        faces = [(0, 1), (0, 2)] + [(i, i + 1) for i in range(2, n)]
    elif kind == "full":
        faces = [tuple(verts)]
    elif kind == "edge01":
        faces = [(0, 1)]
    else:
        raise ValueError(f"unknown subcomplex kind {kind!r}")
    sub = simplex_subcomplex(n, faces, bound=bound, ambient=ambient)
    if kind == "boundary" and n == 0:
        return Subcomplex(sub.ambient, [() for _ in sub.ambient.grades()])
    return sub


def face_of_simplex(n: int, j: int, bound: int | None = None, ambient=None) -> Subcomplex:
    """The face ``d_j Delta^n`` as a subcomplex."""
    return simplex_subcomplex(n, [tuple(v for v in range(n + 1) if v != j)], bound=bound, ambient=ambient)


def union(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    return a.union(b)


def intersect(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    return a.intersect(b)


# ---------------------------------------------------------------------------
# hom-sets and lifting


def enumerate_maps(A: TruncatedSimplicialSet, X: TruncatedSimplicialSet) -> list[SimplicialMap]:
    """All simplicial maps ``A -> X`` in a deterministic order."""
    maps = [map_from_assignment(A, X, a) for a in MapSearch(A, X)]
    maps.sort(key=lambda m: m.components)
    return maps


def count_maps(A: TruncatedSimplicialSet, X: TruncatedSimplicialSet) -> int:
    return MapSearch(A, X).count()


class LiftingError(ValueError):
    pass


def solve_lifting(i: SimplicialMap, f: SimplicialMap, top: SimplicialMap,
                  bottom: SimplicialMap) -> list[SimplicialMap]:
    """All ``h: B -> X`` with ``h∘i = top`` and ``f∘h = bottom``."""
    A, B = i.source, i.target
    X, Y = f.source, f.target
    if top.source is not A or top.target is not X or bottom.source is not B or bottom.target is not Y:
        raise LiftingError("square objects do not match")
    if not i.is_injective():
        raise LiftingError("the left map must be injective")
    for k in A.grades():
        for a in range(A.size(k)):
            if f(k, top(k, a)) != bottom(k, i(k, a)):
                raise LiftingError(f"square does not commute at level {k} simplex {a}")
    fixed = {(k, i(k, a)): top(k, a) for k in A.grades() for a in A.nondegenerate(k)}
    search = MapSearch(B, X, fixed=fixed, over=(f.image, bottom.image))
    out = [map_from_assignment(B, X, a) for a in search]
    out.sort(key=lambda m: m.components)
    return out


def generators(family: str, up_to: int):
    """Yield ``(name, n, k, subcomplex)`` for the generating inclusions of a family."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family == "boundaries":
        for n in range(0, up_to + 1):
            yield f"boundary({n})", n, None, named_subcomplex("boundary", n, bound=n)
        return
    for n in range(1, up_to + 1):
        for k in range(n + 1):
            if family == "inner_horns" and not 0 < k < n:
                continue
            if family == "left_horns" and not k < n:
                continue
            yield f"horn({n},{k})", n, k, named_subcomplex("horn", n, k, bound=n)


def lifting_failures(f: SimplicialMap, subs, fixed_labels=None) -> Iterator[dict]:
    """Yield every unsolvable square ``A -> X, Delta^n -> Y`` for ``A`` in ``subs``.

    ``subs`` yields ``(name, n, subcomplex of Delta^n)``.  ``fixed_labels``
    optionally pins simplices of ``A`` (given by their vertex tuples) to
    simplices of ``X`` as ``{label: (level, index)}``.
    """
    X, Y = f.source, f.target
    cache: dict = {}
    for name, n, A in subs:
        if n > X.bound:
            raise BoundError(f"dimension {n} exceeds bound {X.bound}")
        S = A.as_sset()
        full = tuple(range(n + 1))
        known = []
        for j in range(n + 1):
            face = full[:j] + full[j + 1:]
            if n >= 1 and face in S.index[n - 1]:
                known.append((j, S.index[n - 1][face]))
        fixed = {}
        if fixed_labels:
            for lab, (k, x) in fixed_labels.items():
                if lab in S.index[k]:
                    fixed[(k, S.index[k][lab])] = x
        for y in range(Y.size(n)):
            def required(k, s, y=y):
                return Y.act(n, y, S.labels[k][s])
            search = MapSearch(S, X, fixed=fixed, over=(f.image, required), index_cache=cache)
            for top in search:
                keys = tuple(j for j, _ in known)
                vals = tuple(top[(n - 1, s)] for _, s in known)
                if not search._candidates(n, keys, vals, y):
                    yield {
                        "generator": name,
                        "bottom": Y.labels[n][y],
                        "top": {S.labels[k][s]: X.labels[k][x] for (k, s), x in sorted(top.items())},
                    }


def find_rlp_failure(f: SimplicialMap, family: str, up_to: int, fixed_labels=None):
    subs = ((name, n, A) for name, n, _k, A in generators(family, up_to))
    for w in lifting_failures(f, subs, fixed_labels):
        return w
    return None


def has_rlp(f: SimplicialMap, family: str, up_to: int) -> bool:
    """Does ``f`` lift against every generator of ``family`` in dimensions ``<= up_to``?"""
    return find_rlp_failure(f, family, up_to) is None


def count_fillers(f: SimplicialMap, n: int, A: Subcomplex, top: dict, y: int) -> int:
    """Number of fillers of one square against ``A ⊆ Delta^n`` (top as assignment)."""
    X = f.source
    S = A.as_sset()
    full = tuple(range(n + 1))
    total = 0
    for x in range(X.size(n)):
        if f(n, x) != y:
            continue
        ok = True
        for j in range(n + 1):
            face = full[:j] + full[j + 1:]
            if n >= 1 and face in S.index[n - 1]:
                if X.face(n, j, x) != top[(n - 1, S.index[n - 1][face])]:
                    ok = False
                    break
        total += ok
    return total


# ---------------------------------------------------------------------------
# limits


def fiber_product(f: SimplicialMap, g: SimplicialMap):
    """Strict pullback ``P = X ×_Z Y`` of ``f: X -> Z`` and ``g: Y -> Z``.

    Returns ``(P, proj_X, proj_Y)``; simplices of ``P`` are labelled by pairs
    of indices.
    """
    X, Y = f.source, g.source
    if f.target is not g.target:
        raise ValueError("cospan legs have different targets")
    bound = min(X.bound, Y.bound)
    levels = []
    for k in range(bound + 1):
        by_z: dict = {}
        for y in range(Y.size(k)):
            by_z.setdefault(g(k, y), []).append(y)
        levels.append([(x, y) for x in range(X.size(k)) for y in by_z.get(f(k, x), ())])
    P = TruncatedSimplicialSet.build(
        bound, levels,
        lambda k, i, p: (X.face(k, i, p[0]), Y.face(k, i, p[1])),
        lambda k, i, p: (X.degen(k, i, p[0]), Y.degen(k, i, p[1])),
        name="pullback")
    px = SimplicialMap(P, X, [[p[0] for p in P.labels[k]] for k in P.grades()])
    py = SimplicialMap(P, Y, [[p[1] for p in P.labels[k]] for k in P.grades()])
    return P, px, py


def truncate(X: TruncatedSimplicialSet, bound: int) -> TruncatedSimplicialSet:
    if bound > X.bound:
        raise BoundError("cannot raise a truncation bound")
    return TruncatedSimplicialSet(bound, X.labels[:bound + 1], X.faces[:bound + 1],
                                  X.degens[:bound], name=X.name)
