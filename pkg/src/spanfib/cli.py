"""Command-line entry point.

Every command builds a report; the exit status depends only on it:
0 when every record passes, 1 when some record fails, 2 for invalid input.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import catfile
from .fibcheck import (InvalidInstance, SpanInstance, VerificationReport,
                       factorization_pipeline_check, inner_fibration_failure, verify_thm_main,
                       verify_thm_variant)
from .fincat import CategoryError, functor_of_triples_violations, is_adequate
from .simpset import BoundError, check_cap
from .spancat import SigmaDiagram, compose_spans, span_simplicial_set
from .subdiv import sigma_poset

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InvalidInput(click.ClickException):
    exit_code = EXIT_INVALID


def _load(path: str) -> catfile.Description:
    try:
        return catfile.load(path)
    except catfile.ParseError as e:
        raise InvalidInput(str(e))
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e.strerror}")


def _triple(desc: catfile.Description, name: str | None):
    try:
        return desc.triple(name)
    except (KeyError, StopIteration):
        raise InvalidInput(f"no category named {name!r}")


def _instance(desc: catfile.Description, functor: str | None, bound: int) -> SpanInstance:
    try:
        p, s, t = desc.functor_triples(functor)
        return SpanInstance(p, s, t, bound=bound)
    except KeyError as e:
        raise InvalidInput(f"missing functor or category: {e.args[0]}")
    except (InvalidInstance, CategoryError) as e:
        raise InvalidInput(str(e))


def _emit(rep: VerificationReport, fmt: str, report_path: str | None):
    text = rep.to_json() if fmt == "machine" else rep.to_text()
    click.echo(text)
    if report_path:
        Path(report_path).write_text(rep.to_json() + "\n")
    sys.exit(EXIT_PASS if rep.ok else EXIT_FAIL)


def _bound(max_dim: int, default: int) -> int:
    n = default if max_dim is None else max_dim
    try:
        check_cap(n, "--max-dim")
    except BoundError as e:
        raise InvalidInput(str(e))
    return n


def _common(f):
    f = click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text",
                     help="Human-readable text or JSON.")(f)
    f = click.option("--report", "report_path", type=click.Path(dir_okay=False),
                     help="Also write the JSON report here.")(f)
    f = click.option("--max-dim", type=int, default=None, help="Truncation bound.")(f)
    return f


@click.group()
def main():
    """Spans of finite categories: construction and fibration checks."""


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@_common
def validate(path, max_dim, report_path, fmt):
    """Category laws, class closure and functoriality."""
    desc = _load(path)
    rep = VerificationReport(f"validate {path}")
    for name, C in desc.categories.items():
        rep.info(f"category {name}", "laws", None,
                 lambda C=C: {"objects": C.n_objects, "morphisms": C.n_morphisms})
        rep.run(f"category {name} laws", "laws", None, lambda C=C: C.law_violations() or None)
        rep.run(f"triple {name} classes", "classes", None,
                lambda n=name: desc.triples[n].violations() or None)
    for name, p in desc.functors.items():
        rep.run(f"functor {name}", "functor", None, lambda p=p: p.violations() or None)
        rep.run(f"functor {name} preserves the triples", "functor-of-triples", None,
                lambda p=p: functor_of_triples_violations(
                    p, desc.triples[p.source.name], desc.triples[p.target.name]) or None)
    _emit(rep, fmt, report_path)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--category", default=None)
@_common
def adequacy(path, category, max_dim, report_path, fmt):
    """Pullbacks of ingressives along egressives exist and stay in the classes."""
    t = _triple(_load(path), category)
    rep = VerificationReport(f"adequacy of {t.name}")
    rep.run("adequate", "adequacy", None, lambda: is_adequate(t).witnesses or None)
    _emit(rep, fmt, report_path)


@main.command("build-span")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--category", default=None)
@_common
def build_span(path, category, max_dim, report_path, fmt):
    """Levels of the span simplicial set with their sizes."""
    t = _triple(_load(path), category)
    n = _bound(max_dim, 3)
    rep = VerificationReport(f"span levels of {t.name}")
    try:
        X = span_simplicial_set(t, n)
    except (CategoryError, ValueError) as e:
        raise InvalidInput(str(e))
    rep.info("levels", "span-levels", n, lambda: {"counts": X.counts(),
                                                  "nondegenerate": X.nondegenerate_counts()})
    rep.run("simplicial identities", "span-levels", n, lambda: X.check_identities() or None)
    _emit(rep, fmt, report_path)


def _parse_span(C, text: str):
    try:
        back, fwd = text.split("/")
        return C.mor_index[back], C.mor_index[fwd]
    except (ValueError, KeyError):
        raise InvalidInput(f"span {text!r} must be BACK/FORWARD with known morphism names")


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.argument("first")
@click.argument("second")
@click.option("--category", default=None)
@_common
def compose(path, first, second, category, max_dim, report_path, fmt):
    """Compose two spans written BACK/FORWARD by pulling back the middle cospan."""
    t = _triple(_load(path), category)
    C = t.cat
    (b1, f1), (b2, f2) = _parse_span(C, first), _parse_span(C, second)
    for b, f, text in ((b1, f1, first), (b2, f2, second)):
        if C.src[b] != C.src[f] or b not in t.egressive or f not in t.ingressive:
            raise InvalidInput(f"{text} is not a span with egressive back and ingressive forward leg")
    s1 = SigmaDiagram([C.tgt[b1], C.src[b1], C.tgt[f1]], [b1, f1])
    s2 = SigmaDiagram([C.tgt[b2], C.src[b2], C.tgt[f2]], [b2, f2])
    try:
        F = compose_spans(t, s1, s2)
    except ValueError as e:
        raise InvalidInput(str(e))
    back = C.compose(F.gen((0, 1), (0, 0)), F.gen((0, 2), (0, 1)))
    fwd = C.compose(F.gen((1, 2), (2, 2)), F.gen((0, 2), (1, 2)))
    rep = VerificationReport(f"composite of {first} and {second}")
    rep.info("composite", "composition", None,
             lambda: {"apex": C.objects[F.obj((0, 2))], "back": C.mor_names[back],
                      "forward": C.mor_names[fwd]})
    _emit(rep, fmt, report_path)


@main.command("check-inner")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--functor", default=None)
@_common
def check_inner(path, functor, max_dim, report_path, fmt):
    """Is the induced map of span simplicial sets an inner fibration?"""
    inst = _instance(_load(path), functor, _bound(max_dim, 3))
    rep = VerificationReport("inner fibration")
    rep.run("span functor is an inner fibration", "conclusion-inner", inst.bound,
            lambda: inner_fibration_failure(inst.span_map, inst.bound))
    _emit(rep, fmt, report_path)


@main.command("check-cocart")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.argument("span")
@click.option("--functor", default=None)
@_common
def check_cocart(path, span, functor, max_dim, report_path, fmt):
    """Cocartesianness of the span BACK/FORWARD in both models."""
    from .fibcheck import cocartesian_qcat_failure

    inst = _instance(_load(path), functor, _bound(max_dim, 3))
    try:
        back, fwd = span.split("/")
        F = inst.find_span(back, fwd)
    except ValueError as e:
        raise InvalidInput(str(e) if isinstance(e, InvalidInstance) else f"span {span!r} must be BACK/FORWARD")

    def qcat():
        w = cocartesian_qcat_failure(inst.span_map, inst.span_index(F), inst.bound)
        return None if w is None else inst.name_horn_witness(w)

    def segal():
        v = inst.segal.verdict(F)
        return None if v.ok else {"comparison": v.witness}

    rep = VerificationReport(f"cocartesianness of {span}")
    rep.run("quasicategory model", "cocartesian-qcat", inst.bound, qcat)
    rep.run("Segal model", "cocartesian-segal", inst.M, segal)
    _emit(rep, fmt, report_path)


def _theorem_command(name, fn, doc):
    @main.command(name, help=doc)
    @click.argument("path", type=click.Path(exists=True, dir_okay=False))
    @click.option("--functor", default=None)
    @_common
    def cmd(path, functor, max_dim, report_path, fmt):
        inst = _instance(_load(path), functor, _bound(max_dim, 3))
        _emit(fn(inst), fmt, report_path)

    return cmd


_theorem_command("verify-main", lambda inst: verify_thm_main(inst, None, None),
                 "Hypotheses and conclusions of the main theorem.")
_theorem_command("verify-variant", lambda inst: verify_thm_variant(inst, None, None),
                 "Hypotheses and conclusions of the cartesian-egressive variant.")
_theorem_command("pipeline", factorization_pipeline_check,
                 "The five comparison functors of the horn-filling factorization.")


@main.command()
@click.argument("n", type=int)
@_common
def sigma(n, max_dim, report_path, fmt):
    """Element count and covering relations of the interval poset on [n]."""
    try:
        P = sigma_poset(n)
    except BoundError as e:
        raise InvalidInput(str(e))
    rep = VerificationReport(f"interval poset on [{n}]")
    rep.info("elements", "sigma", n, lambda: {"count": len(P), "elements": [f"{i}{j}" for i, j in P.elements]})
    rep.info("covering relations", "sigma", n,
             lambda: [f"{a[0]}{a[1]}>{b[0]}{b[1]}" for a, b in P.hasse])
    rep.run("element count is (n+1)(n+2)/2", "sigma", n,
            lambda: None if len(P) == (n + 1) * (n + 2) // 2 else {"count": len(P)})
    _emit(rep, fmt, report_path)


@main.command()
@_common
def selftest(max_dim, report_path, fmt):
    """Run the built-in invariant suite on the shipped instances."""
    from .selftest import run_selftest

    _emit(run_selftest(), fmt, report_path)


if __name__ == "__main__":
    main()
