"""The posets of intervals used to index spans, and subdivision of simplices.

An element ``(i, j)`` with ``i <= j`` stands for the interval from ``i`` to
``j``.  The order is reversed inclusion: ``(i, j) <= (i2, j2)`` iff
``i <= i2 <= j2 <= j``.  Arrows in a diagram point from a wider interval to
a narrower one, so ``(i, j) -> (i, j-1)`` is the backward leg and
``(i, j) -> (i+1, j)`` the forward leg.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .groupoid import Shape
from .simpset import (SimplicialMap, Subcomplex, TruncatedSimplicialSet, check_cap,
                      standard_simplex)

Element = tuple[int, int]


def leq(x: Element, y: Element) -> bool:
    return x[0] <= y[0] <= y[1] <= x[1]


class SigmaPoset:
    """The interval poset on ``[n]`` with its order table and covering relations."""

    __slots__ = ("n", "elements", "index", "relations", "relation_index", "hasse", "hasse_index",
                 "_shape")

    def __init__(self, n: int):
        check_cap(n)
        self.n = n
        self.elements = tuple((i, j) for i in range(n + 1) for j in range(i, n + 1))
        self.index = {x: k for k, x in enumerate(self.elements)}
        self.relations = tuple((x, y) for x in self.elements for y in self.elements if leq(x, y))
        self.relation_index = {r: k for k, r in enumerate(self.relations)}
        self.hasse = tuple(sorted(
            [((i, j), (i, j - 1)) for i, j in self.elements if j > i]
            + [((i, j), (i + 1, j)) for i, j in self.elements if j > i]))
        self.hasse_index = {h: k for k, h in enumerate(self.hasse)}
        self._shape = None

    def __len__(self):
        return len(self.elements)

    def leq(self, x: Element, y: Element) -> bool:
        return leq(x, y)

    def is_backward(self, edge) -> bool:
        (i, j), (i2, j2) = edge
        return i == i2

    def shape(self) -> Shape:
        """Shape on the covering relations; commutation is checked on squares instead."""
        if self._shape is None:
            self._shape = Shape(self.elements, self.hasse, ())
        return self._shape

    def squares(self):
        """Elementary squares ``(top, back, front, bottom)`` of the Hasse diagram."""
        out = []
        for i, j in self.elements:
            if j - i >= 2:
                out.append(((i, j), (i, j - 1), (i + 1, j), (i + 1, j - 1)))
        return out

    def rectangles(self):
        """Every square ``(i,j), (i,j-l), (i+k,j), (i+k,j-l)``, degenerate ones included."""
        out = []
        for i, j in self.elements:
            for k in range(0, j - i + 1):
                for l in range(0, j - i - k + 1):
                    out.append(((i, j), (i, j - l), (i + k, j), (i + k, j - l)))
        return out


@lru_cache(maxsize=None)
def sigma_poset(n: int) -> SigmaPoset:
    return SigmaPoset(n)


def _check_monotone(alpha: Sequence[int], n: int | None = None) -> tuple[int, ...]:
    alpha = tuple(alpha)
    if any(a > b for a, b in zip(alpha, alpha[1:])):
        raise ValueError(f"{alpha} is not monotone")
    if n is not None and alpha and (alpha[0] < 0 or alpha[-1] > n):
        raise ValueError(f"{alpha} does not land in [{n}]")
    return alpha


def sigma_map(alpha: Sequence[int]):
    """The map ``(i, j) -> (alpha(i), alpha(j))`` for monotone ``alpha: [m] -> [n]``."""
    alpha = _check_monotone(alpha)

    def apply(x: Element) -> Element:
        return (alpha[x[0]], alpha[x[1]])

    return apply


def coface(n: int, i: int) -> tuple[int, ...]:
    """``[n-1] -> [n]`` skipping ``i``."""
    return tuple(k if k < i else k + 1 for k in range(n))


def codegeneracy(n: int, i: int) -> tuple[int, ...]:
    """``[n+1] -> [n]`` hitting ``i`` twice."""
    return tuple(k if k <= i else k - 1 for k in range(n + 2))


def compose_monotone(beta: Sequence[int], alpha: Sequence[int]) -> tuple[int, ...]:
    """``beta ∘ alpha``."""
    return tuple(beta[a] for a in alpha)


# ---------------------------------------------------------------------------
# subdivision


def _endpoints(chain) -> frozenset:
    return frozenset(v for x in chain for v in x)


def sd(A: Subcomplex, bound: int | None = None) -> TruncatedSimplicialSet:
    """Chains ``x0 <= ... <= xk`` in the interval poset whose endpoints span a simplex of ``A``.

    ``A`` must be a subcomplex of a standard simplex (labels are vertex
    tuples).  The bound defaults to the ambient bound.
    """
    amb = A.ambient
    n = max(max(lab) for lab in amb.labels[0]) if amb.labels[0] else 0
    faces = {frozenset(lab) for k in amb.grades() for lab in A.labels(k)}
    N = amb.bound if bound is None else bound
    els = [x for x in sigma_poset(n).elements if frozenset(x) in faces]
    levels = [_all_chains(els, k, faces) for k in range(N + 1)]
    return TruncatedSimplicialSet.build(
        N, levels,
        lambda k, i, ch: ch[:i] + ch[i + 1:],
        lambda k, i, ch: ch[:i + 1] + ch[i:],
        name="sd")


def _all_chains(els, k, faces) -> list:
    """Weakly increasing chains of length ``k + 1``; ``faces`` is closed under subsets."""
    out = []

    def grow(ch):
        if len(ch) == k + 1:
            out.append(tuple(ch))
            return
        for y in els:
            if not ch or leq(ch[-1], y):
                ch.append(y)
                if _endpoints(ch) in faces:
                    grow(ch)
                ch.pop()

    grow([])
    return out


def sd_shape(A: Subcomplex) -> Shape:
    """Non-identity arrows and 3-chains of ``sd(A)``: a functor on this shape is a map ``sd(A) -> N(C)``."""
    amb = A.ambient
    faces = {frozenset(lab) for k in amb.grades() for lab in A.labels(k)}
    n = max(max(lab) for lab in amb.labels[0])
    els = tuple(x for x in sigma_poset(n).elements if frozenset(x) in faces)
    arrows = tuple((x, y) for x in els for y in els
                   if x != y and leq(x, y) and _endpoints((x, y)) in faces)
    aset = set(arrows)
    tris = tuple((x, y, z) for x, y in arrows for z in els
                 if (y, z) in aset and (x, z) in aset and _endpoints((x, y, z)) in faces)
    return Shape(els, arrows, tris)


def retraction_pair(n: int):
    """``i: Delta^n -> sd(Delta^n)``, ``k -> (k, n)`` and ``r: sd(Delta^n) -> Delta^n``, ``(i, j) -> i``."""
    check_cap(n)
    D = standard_simplex(n, n)
    full = Subcomplex(D, [range(D.size(k)) for k in D.grades()])
    S = sd(full)
    i_comp = [[S.index[k][tuple((v, n) for v in lab)] for lab in D.labels[k]] for k in D.grades()]
    r_comp = [[D.index[k][tuple(x[0] for x in ch)] for ch in S.labels[k]] for k in S.grades()]
    return SimplicialMap(D, S, i_comp), SimplicialMap(S, D, r_comp)
