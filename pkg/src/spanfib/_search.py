"""Backtracking search for structure-preserving maps between graded sets.

Both truncated simplicial sets and truncated bisimplicial sets expose the
same small protocol, so one engine serves hom-set enumeration, lifting
problems and horn filling for both:

``grades()``
    every grade, low to high
``size(g)``
    number of elements in grade ``g``
``face_specs(g)``
    list of ``(key, lower_grade)`` naming every face operator out of ``g``
``face(g, key, x)``
    apply a face operator
``degen(g, key, x)``
    apply the degeneracy with the same key, from grade ``g`` one step up
``witness(g, x)``
    ``None`` for nondegenerate ``x``, else ``(key, lower_grade, y)`` with
    ``x = degen(lower_grade, key, y)``
``nondegenerate(g)``
    indices of nondegenerate elements

A map is only chosen on nondegenerate elements of the source; degenerate
ones follow from their witnesses.
"""

from __future__ import annotations

from typing import Hashable, Iterator

Grade = Hashable
Assignment = dict


class MapSearch:
    """Enumerate maps ``source -> target``.

    ``fixed`` pre-assigns elements as ``{(grade, idx): target_idx}``.
    ``over`` is a pair ``(image, required)``: ``image(g, x)`` maps target
    elements to some base and ``required(g, s)`` says where the image of
    source element ``s`` has to land.  This is how "lift over a bottom map"
    constraints are expressed.  ``allowed`` maps some source elements
    ``(grade, idx)`` to the set of target indices they may take (markings).
    """

    def __init__(self, source, target, fixed=None, over=None, index_cache=None, allowed=None):
        self.source = source
        self.target = target
        self.fixed = dict(fixed or {})
        self.over = over
        self.allowed = allowed or {}
        # index_cache may be shared between searches against the same target
        # and the same ``image`` function.
        self._index = {} if index_cache is None else index_cache
        self._todo = [(g, s) for g in source.grades() for s in source.nondegenerate(g)]

    # -- candidate lookup ------------------------------------------------
    def _candidates(self, g, keys, values, req):
        cache_key = (g, keys, req is not None)
        table = self._index.get(cache_key)
        if table is None:
            table = {}
            tgt = self.target
            image = self.over[0] if self.over is not None else None
            for x in range(tgt.size(g)):
                k = tuple(tgt.face(g, key, x) for key in keys)
                if req is not None:
                    k = k + (image(g, x),)
                table.setdefault(k, []).append(x)
            self._index[cache_key] = table
        k = values if req is None else values + (req,)
        return table.get(k, ())

    # -- assignment with propagation ------------------------------------
    def _put(self, assign, trail, g, s, x) -> bool:
        key = (g, s)
        cur = assign.get(key)
        if cur is not None:
            return cur == x
        ok = self.allowed.get(key)
        if ok is not None and x not in ok:
            return False
        if self.over is not None:
            image, required = self.over
            if image(g, x) != required(g, s):
                return False
        src, tgt = self.source, self.target
        w = src.witness(g, s)
        assign[key] = x
        trail.append(key)
        if w is not None:
            dkey, gl, t = w
            y = tgt.face(g, dkey, x)
            if tgt.degen(gl, dkey, y) != x:
                return False
            return self._put(assign, trail, gl, t, y)
        for fkey, gf in src.face_specs(g):
            if not self._put(assign, trail, gf, src.face(g, fkey, s), tgt.face(g, fkey, x)):
                return False
        return True

    def _undo(self, assign, trail, mark):
        while len(trail) > mark:
            del assign[trail.pop()]

    def _pick(self, assign):
        best = None
        best_score = None
        src = self.source
        for g, s in self._todo:
            if (g, s) in assign:
                continue
            known = 0
            for fkey, gf in src.face_specs(g):
                if (gf, src.face(g, fkey, s)) in assign:
                    known += 1
            score = (known, _weight(g))
            if best_score is None or score > best_score:
                best, best_score = (g, s), score
        return best

    def __iter__(self) -> Iterator[Assignment]:
        assign: dict = {}
        trail: list = []
        for (g, s), x in self.fixed.items():
            if not self._put(assign, trail, g, s, x):
                return
        yield from self._search(assign, trail)

    def _search(self, assign, trail):
        nxt = self._pick(assign)
        if nxt is None:
            yield dict(assign)
            return
        g, s = nxt
        src = self.source
        keys = []
        values = []
        for fkey, gf in src.face_specs(g):
            fs = (gf, src.face(g, fkey, s))
            if fs in assign:
                keys.append(fkey)
                values.append(assign[fs])
        req = self.over[1](g, s) if self.over is not None else None
        for x in self._candidates(g, tuple(keys), tuple(values), req):
            mark = len(trail)
            if self._put(assign, trail, g, s, x):
                yield from self._search(assign, trail)
            self._undo(assign, trail, mark)

    def first(self):
        for a in self:
            return a
        return None

    def count(self) -> int:
        return sum(1 for _ in self)


def _weight(g) -> int:
    return sum(g) if isinstance(g, tuple) else g


def complete(source, target, assign: Assignment) -> dict:
    """Extend an assignment on nondegenerate elements to every element."""
    out = {}
    for g in source.grades():
        row = []
        for s in range(source.size(g)):
            x = assign.get((g, s))
            if x is None:
                dkey, gl, t = source.witness(g, s)
                x = target.degen(gl, dkey, out[gl][t])
            row.append(x)
        out[g] = tuple(row)
    return out


def filler_exists(target, g, keys, values, image=None, req=None, cache=None) -> bool:
    """Is there an element of grade ``g`` with prescribed faces (and image)?"""
    search = MapSearch(_Empty(), target, over=(image, None) if image else None,
                       index_cache=cache)
    return bool(search._candidates(g, tuple(keys), tuple(values), req if image else None))


class _Empty:
    def grades(self):
        return ()

    def nondegenerate(self, g):
        return ()

