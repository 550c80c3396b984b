"""A quick invariant suite over the shipped instances, used by ``spanfib selftest``."""

from __future__ import annotations

import random

from . import catfile
from .bisimp import adjunction_counts, box, left_spine_factorization_check
from .fibcheck import (SpanInstance, VerificationReport, coherence_failures, factorization_pipeline_check,
                       verify_thm_main)
from .fincat import interval, nerve, walking_arrow, walking_iso
from .instances import BUILDERS, FUNCTOR_INSTANCES, load_suite, suite_path
from .simpset import Subcomplex, find_rlp_failure, identity_map, map_to_point, standard_simplex
from .spancat import equivalence_embedding
from .subdiv import retraction_pair, sigma_poset


def _sigma_failure():
    for n in range(7):
        if len(sigma_poset(n)) != (n + 1) * (n + 2) // 2:
            return {"n": n, "count": len(sigma_poset(n))}
    for n in range(5):
        i, r = retraction_pair(n)
        if not r.compose(i).is_iso() or r.compose(i).key() != identity_map(i.source).key():
            return {"retraction": n}
    return None


def _suite_failure():
    for name in BUILDERS:
        text = suite_path(name).read_text()
        a = catfile.parse(text, default_name=name)
        if not catfile.equivalent(a, catfile.parse(catfile.dump(a))):
            return {"round_trip": name}
        if not catfile.equivalent(a, BUILDERS[name]()):
            return {"stale_file": name}
    return None


def _nerve_failure():
    for C in (walking_arrow(), walking_iso(), interval(2)):
        w = find_rlp_failure(map_to_point(nerve(C, 3)), "inner_horns", 3)
        if w is not None:
            return {"category": C.name, "horn": w["generator"]}
    return None


def _spine_failure():
    for n in (3, 4):
        r = left_spine_factorization_check(n)
        if not r["ok"]:
            return r
    return None


def _adjunction_failure(trials: int = 8, seed: int = 0):
    rng = random.Random(seed)
    for _ in range(trials):
        D = standard_simplex(2, 2)
        picks = rng.sample([(k, x) for k in D.grades() for x in range(D.size(k))], 2)
        A = Subcomplex.generated(D, picks[:1]).as_sset()
        B = Subcomplex.generated(D, picks[1:]).as_sset()
        X = box(Subcomplex.generated(D, [(1, rng.randrange(D.size(1)))]).as_sset(), standard_simplex(1, 2))
        c = adjunction_counts(A, B, X)
        if len(set(c)) != 1:
            return {"counts": c}
    return None


def _embedding_failure():
    for C in (walking_arrow(), walking_iso()):
        for variant in ("backward_iso", "forward_iso"):
            r = equivalence_embedding(C, variant)
            if not r["ok"]:
                return {"category": C.name, "variant": variant}
    return None


def run_selftest() -> VerificationReport:
    rep = VerificationReport("selftest")
    rep.run("interval posets and retractions", "sigma", 6, _sigma_failure)
    rep.run("suite files round-trip", "format", None, _suite_failure)
    rep.run("nerves have inner fillers", "nerve", 3, _nerve_failure)
    rep.run("left-spine decomposition", "left-spine", 4, _spine_failure)
    rep.run("box/division adjunction counts", "adjunction", 2, _adjunction_failure)
    rep.run("invertible-leg spans embed chains", "embedding", 2, _embedding_failure)
    small = load_suite("groth_small")
    inst = SpanInstance(*small.functor_triples())
    rep.run("main theorem on the small instance", "theorem", 3, lambda: None if verify_thm_main(
        inst, None, None).ok else "report failed")
    rep.run("factorization pipeline on the small instance", "pipeline", None,
            lambda: None if factorization_pipeline_check(inst).ok else "report failed")
    for name in ("groth_small", "groth_violating"):
        i2 = SpanInstance(*load_suite(name).functor_triples()) if name != "groth_small" else inst

        def coh(i2=i2):
            bad = coherence_failures(i2)
            return bad if any(bad.values()) else None

        rep.run(f"cross-model coherence on {name}", "coherence", 3, coh)
    viol = SpanInstance(*load_suite("groth_violating").functor_triples())
    rep.run("violating instance is rejected", "theorem", 3,
            lambda: None if not verify_thm_main(viol, None, None)["H2 cocartesian squares are exactly "
                                                                   "ambigressive pullbacks"].passed
            else "H2 unexpectedly passed")
    assert set(FUNCTOR_INSTANCES) <= set(BUILDERS)
    return rep
