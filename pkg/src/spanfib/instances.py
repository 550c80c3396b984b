"""Named example instances and the shipped ``suite/*.cat`` files built from them."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import catfile
from .fincat import (FinCategory, FinFunctor, Triple, divisor_lattice, finset_skeleton, grothendieck,
                     identity_functor, interval, is_cartesian_1cat, terminal, walking_arrow, walking_iso)


def span_shape() -> FinCategory:
    """``a <- c -> b``."""
    return FinCategory(["a", "b", "c"], [("l", "c", "a"), ("r", "c", "b")], {}, name="span")


def _renamed(C: FinCategory, name: str) -> FinCategory:
    C.name = name
    return C


def _cartesian_triple(p: FinFunctor, name: str) -> Triple:
    C = p.source
    return Triple(C, range(C.n_morphisms), [m for m in range(C.n_morphisms) if is_cartesian_1cat(p, m)], name=name)


def _over_arrow(A: FinCategory, B: FinCategory, phi: FinFunctor, name: str, egressive: str) -> catfile.Description:
    E, p = grothendieck(A, B, phi, name=name)
    p.name = "p"
    base = _renamed(p.target, "base")
    if egressive == "cartesian":
        s = _cartesian_triple(p, name)
    else:
        s = Triple.from_kinds(E, "all", egressive, name=name)
    d = catfile.Description()
    d.categories = {name: E, "base": base}
    d.triples = {name: s, "base": Triple.from_kinds(base, name="base")}
    d.functors = {"p": p}
    return d


def groth_satisfying() -> catfile.Description:
    """Total category of the constant functor ``iso -> [2]`` at ``0``; egressives are the cartesian maps."""
    A, B = walking_iso(), interval(2)
    phi = FinFunctor(A, B, [0, 0], [0, 0, 0, 0])
    return _over_arrow(A, B, phi, "E", "cartesian")


def groth_small() -> catfile.Description:
    """Total category of ``[1] -> [2]``, ``0 -> 0, 1 -> 1``; egressives are the cartesian maps."""
    A, B = walking_arrow(), interval(2)
    phi = FinFunctor(A, B, [0, 1], [0, 1, B.mor_index["0_1"]])
    return _over_arrow(A, B, phi, "E", "cartesian")


def groth_violating() -> catfile.Description:
    """The cone over ``a <- c -> b``: a square of cocartesian maps that is not a pullback."""
    A, B = span_shape(), terminal()
    phi = FinFunctor(A, B, [0, 0, 0], [0, 0, 0, 0, 0])
    return _over_arrow(A, B, phi, "E", "all")


def groth_variant_violating() -> catfile.Description:
    """As :func:`groth_satisfying` but egressives are only the isomorphisms."""
    A, B = walking_iso(), interval(2)
    phi = FinFunctor(A, B, [0, 0], [0, 0, 0, 0])
    return _over_arrow(A, B, phi, "E", "isos")


def _single(C: FinCategory, name: str, ingressive="all", egressive="all") -> catfile.Description:
    C = _renamed(C, name)
    d = catfile.Description()
    d.categories = {name: C}
    d.triples = {name: Triple.from_kinds(C, ingressive, egressive, name=name)}
    return d


def _with_identity(d: catfile.Description) -> catfile.Description:
    C = d.category()
    p = identity_functor(C)
    p.name = "id"
    d.functors = {"id": p}
    return d


BUILDERS = {
    "point": lambda: _with_identity(_single(terminal(), "pt")),
    "walking_arrow": lambda: _with_identity(_single(walking_arrow(), "arrow")),
    "walking_iso": lambda: _with_identity(_single(walking_iso(), "iso")),
    "div12": lambda: _with_identity(_single(divisor_lattice(12), "div12")),
    "finset2": lambda: _single(finset_skeleton(2), "FinSet2", "all", "isos"),
    "finset3": lambda: _single(finset_skeleton(3), "FinSet3", "all", "isos"),
    "groth_satisfying": groth_satisfying,
    "groth_small": groth_small,
    "groth_violating": groth_violating,
    "groth_variant_violating": groth_variant_violating,
}

# instances carrying a functor, i.e. usable as SPAN(p)
FUNCTOR_INSTANCES = ("point", "walking_arrow", "walking_iso", "groth_small", "groth_satisfying",
                     "groth_violating", "groth_variant_violating")


def suite_dir() -> Path:
    return Path(str(resources.files("spanfib") / "suite"))


def suite_path(name: str) -> Path:
    return suite_dir() / f"{name}.cat"


def load_suite(name: str) -> catfile.Description:
    return catfile.load(suite_path(name))


def write_suite(directory: Path | None = None) -> list[Path]:
    out = []
    directory = Path(directory or suite_dir())
    directory.mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        path = directory / f"{name}.cat"
        header = f"# {build.__doc__.strip().splitlines()[0]}\n" if build.__doc__ else ""
        path.write_text(header + catfile.dump(build()))
        out.append(path)
    return out
