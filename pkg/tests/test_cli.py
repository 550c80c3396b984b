import json

import pytest
from click.testing import CliRunner

from spanfib.cli import main
from spanfib.instances import suite_path

from test_subdiv import SIGMA4_HASSE


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def machine(*args):
    r = run(*args, "--format", "machine")
    return r.exit_code, json.loads(r.output)


def data(report, name):
    return next(r for r in report["records"] if r["name"] == name)["data"]


def test_sigma_four():
    code, rep = machine("sigma", 4)
    assert code == 0 and rep["ok"]
    assert data(rep, "elements")["count"] == 15
    assert set(data(rep, "covering relations")) == SIGMA4_HASSE


def test_sigma_over_the_cap():
    assert run("sigma", 99).exit_code == 2


def test_build_span_of_a_point():
    code, rep = machine("build-span", suite_path("point"))
    assert code == 0
    assert data(rep, "levels")["counts"] == [1, 1, 1, 1]


def test_build_span_levels_of_the_lattice():
    code, rep = machine("build-span", suite_path("div12"), "--max-dim", 2)
    assert code == 0
    assert data(rep, "levels")["counts"] == [6, 70, 910]


@pytest.mark.parametrize("name, first, second, expected", [
    ("div12", "2_4/2_12", "6_12/6_12", {"apex": "2", "back": "2_4", "forward": "2_12"}),
    ("finset2", "id_1/s1_2_0", "id_2/s2_1_00", {"apex": "1", "back": "id_1", "forward": "id_1"}),
])
def test_compose(name, first, second, expected):
    code, rep = machine("compose", suite_path(name), first, second)
    assert code == 0
    assert data(rep, "composite") == expected


def test_compose_rejects_a_non_span():
    r = run("compose", suite_path("finset2"), "s1_2_0/id_1", "id_2/id_2")
    assert r.exit_code == 2


def test_validate_and_adequacy():
    assert run("validate", suite_path("groth_small")).exit_code == 0
    assert run("adequacy", suite_path("div12")).exit_code == 0
    assert run("adequacy", suite_path("finset3")).exit_code == 0


def test_parse_error_exits_two(tmp_path):
    p = tmp_path / "broken.cat"
    p.write_text("OBJECTS\na\nMORPHISMS\nf a b\n")
    r = run("validate", p)
    assert r.exit_code == 2
    assert "broken.cat:4" in r.output


def test_missing_functor_exits_two():
    assert run("check-inner", suite_path("finset2")).exit_code == 2


def test_check_inner():
    assert run("check-inner", suite_path("groth_small")).exit_code == 0


def test_check_cocart():
    path = suite_path("groth_violating")
    code, rep = machine("check-cocart", path, "id_0:a/u:a:id_pt")
    assert code == 1
    assert [r["verdict"] for r in rep["records"]] == ["fail", "fail"]
    assert rep["records"][0]["witness"]["generator"] == "horn(2,0)"
    assert run("check-cocart", path, "nope/u:a:id_pt").exit_code == 2
    assert run("check-cocart", path, "no-slash").exit_code == 2


def test_verify_main_on_the_small_instance(tmp_path):
    out = tmp_path / "report.json"
    r = run("verify-main", suite_path("groth_small"), "--report", out)
    assert r.exit_code == 0
    assert json.loads(out.read_text())["ok"] is True
    assert "overall: pass" in r.output


def test_verify_main_rejects_the_violating_instance():
    code, rep = machine("verify-main", suite_path("groth_violating"))
    assert code == 1 and not rep["ok"]


def test_variant_and_pipeline():
    assert run("verify-variant", suite_path("groth_small")).exit_code == 0
    assert run("verify-variant", suite_path("groth_variant_violating")).exit_code == 1
    assert run("pipeline", suite_path("groth_small")).exit_code == 0


@pytest.mark.slow
def test_verify_main_on_the_satisfying_instance():
    assert run("verify-main", suite_path("groth_satisfying")).exit_code == 0


def test_selftest():
    assert run("selftest").exit_code == 0
