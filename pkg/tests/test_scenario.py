from __future__ import annotations

from pathlib import Path

import pytest

from crosslayer.errors import ModelError, ScenarioError
from crosslayer.fixtures import fixture_a, fixture_b, ring4_on_k4, staged_reroute
from crosslayer.scenario import format_scenario, parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

HEADER = """\
pnode a
pnode b
pnode c
plink a b
plink b c
lnode a
lnode c
llink a c
"""


def error(text: str) -> ScenarioError:
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    return exc.value


@pytest.mark.parametrize("build", [fixture_a, fixture_b, ring4_on_k4, staged_reroute])
def test_round_trip(build):
    r = build()
    assert parse_scenario(format_scenario(r)).routing == r


def test_fixture_b_file():
    sc = parse_scenario((SCENARIOS / "fixtureB.txt").read_text())
    assert sc.routing.m == 3
    assert len(sc.routing.logical.links) == 3
    assert sc.routing == fixture_b()


def test_comments_blank_lines_and_colon_forms():
    text = HEADER.replace("plink a b", "plink a b   # first fiber") + "\n\nroute 0 : a b c\n"
    assert parse_scenario(text).routing.routes[0].nodes == ("a", "b", "c")
    assert parse_scenario(HEADER + "route 0 :a b c\n").routing.routes[0].nodes == ("a", "b", "c")


def test_params():
    sc = parse_scenario(HEADER + "param grid 0.1,0.5\nparam k 4\nparam p 0.25\n")
    assert sc.params == {"grid": (0.1, 0.5), "k": 4, "p": 0.25}
    again = parse_scenario(format_scenario(sc.network, sc.params))
    assert again.params == sc.params


def test_routing_optional():
    sc = parse_scenario(HEADER)
    assert sc.routing is None
    with pytest.raises(ModelError) as exc:
        sc.require_routing()
    assert exc.value.code == "routing-required"
    assert "routing required" in str(exc.value)


def test_unknown_node_in_route():
    e = error(HEADER + "route 0: a b z\n")
    assert (e.code, e.line, e.column, e.token) == ("unknown-node", 9, 14, "z")


def test_non_adjacent_step():
    e = error(HEADER + "route 0: a c\n")
    assert (e.code, e.line, e.token) == ("non-adjacent-step", 9, "c")


def test_disconnected_logical():
    e = error("pnode a\npnode b\nlnode a\nlnode b\n")
    assert e.code == "disconnected-logical"


def test_syntax_errors():
    assert error("frob a\n").code == "unknown-directive"
    assert error("pnode\n").code == "syntax"
    assert error(HEADER + "route 0 a b c\n").code == "syntax"
    assert error(HEADER + "route x: a b c\n").code == "bad-index"
    assert error(HEADER + "route 3: a b c\n").code == "route-index-range"
    assert error(HEADER + "route 0: a b c\nroute 0: a b c\n").code == "duplicate-route"
    assert error(HEADER + "route 0: a b a\n").code == "non-simple-path"


def test_partial_routing():
    text = HEADER + "llink c a\nroute 0: a b c\n"
    assert error(text).code == "missing-route"


def test_param_errors():
    assert error("param k many\n").code == "bad-param"
    assert error("param grid 2.0\n").code == "bad-param"
    assert error("param colour blue\n").code == "unknown-param"


def test_physical_errors_anchor():
    e = error("pnode a\npnode a\n")
    assert (e.code, e.line) == ("duplicate-node", 2)
    e = error("pnode a\nplink a q\n")
    assert (e.code, e.line, e.column) == ("unknown-node", 2, 9)
