"""Line-oriented scenario files describing a layered network.

Grammar (one directive per line, ``#`` starts a comment, blank lines ignored)::

    pnode <id>
    plink <u> <v>
    lnode <id>
    llink <s> <t>
    route <index>: <v0> <v1> ... <vk>
    param <name> <value>

``route`` indices refer to ``llink`` declaration order (0-based). A scenario
either routes every logical link or none of them. Recognized parameters are
``grid`` (comma-separated probabilities), ``k``, ``n``, ``seed``, ``trials``,
``p`` and ``max-size``; command-line flags take precedence over them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import ModelError, ScenarioError
from .model import LayeredNetwork, LightpathRouting, LogicalTopology, PhysicalPath, PhysicalTopology

_ARITY = {"pnode": 1, "plink": 2, "lnode": 1, "llink": 2, "param": 2}
_INT_PARAMS = ("k", "n", "seed", "trials", "max-size")
_FLOAT_PARAMS = ("p",)


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: the validated network plus typed parameters."""

    network: LayeredNetwork
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def routing(self) -> LightpathRouting | None:
        return self.network.routing

    def require_routing(self) -> LightpathRouting:
        return self.network.require_routing()


def _tokens(line: str, number: int) -> list[Token]:
    body = line.split("#", 1)[0]
    out, i = [], 0
    while i < len(body):
        if body[i].isspace():
            i += 1
            continue
        j = i
        while j < len(body) and not body[j].isspace():
            j += 1
        out.append(Token(body[i:j], number, i + 1))
        i = j
    return out


def _parse_param(name: Token, value: Token) -> Any:
    try:
        if name.text == "grid":
            ps = tuple(float(x) for x in value.text.split(",") if x)
            if not ps or any(not 0 <= p <= 1 for p in ps):
                raise ValueError
            return ps
        if name.text in _INT_PARAMS:
            return int(value.text)
        if name.text in _FLOAT_PARAMS:
            return float(value.text)
    except ValueError:
        raise ScenarioError(
            "bad-param", f"invalid value {value.text!r} for parameter {name.text!r}",
            value.line, value.column, value.text,
        ) from None
    raise ScenarioError("unknown-param", f"unknown parameter {name.text!r}", name.line, name.column, name.text)


def _route_line(toks: list[Token]) -> tuple[Token, list[Token]]:
    """Split ``route <i>: v0 ...`` (the colon may stand alone) into index and nodes."""
    if len(toks) < 2:
        t = toks[0]
        raise ScenarioError("syntax", "route needs an index and a node list", t.line, t.column, t.text)
    head = toks[1]
    rest = toks[2:]
    if head.text.endswith(":"):
        index = Token(head.text[:-1], head.line, head.column)
    elif rest and rest[0].text == ":":
        index, rest = head, rest[1:]
    elif rest and rest[0].text.startswith(":"):
        first = rest[0]
        index = head
        rest = ([Token(first.text[1:], first.line, first.column + 1)] if len(first.text) > 1 else []) + rest[1:]
    else:
        raise ScenarioError("syntax", "expected ':' after the route index", head.line, head.column, head.text)
    if len(rest) < 2:
        raise ScenarioError("syntax", "a route needs at least two nodes", head.line, head.column, head.text)
    return index, rest


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text.

    Raises:
        ScenarioError: syntax or semantic problem, anchored at a line and
            column where one can be identified. ``code`` distinguishes
            e.g. ``"unknown-node"``, ``"non-adjacent-step"`` and
            ``"disconnected-logical"``.
    """
    pnodes: list[Token] = []
    plinks: list[tuple[Token, Token]] = []
    lnodes: list[Token] = []
    llinks: list[tuple[Token, Token]] = []
    routes: dict[int, tuple[Token, list[Token]]] = {}
    params: dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line, number)
        if not toks:
            continue
        kw = toks[0]
        if kw.text == "route":
            index, nodes = _route_line(toks)
            try:
                i = int(index.text)
            except ValueError:
                raise ScenarioError("bad-index", f"route index {index.text!r} is not an integer",
                                    index.line, index.column, index.text) from None
            if i in routes:
                raise ScenarioError("duplicate-route", f"route {i} given twice", index.line, index.column, index.text)
            routes[i] = (index, nodes)
            continue
        if kw.text not in _ARITY:
            raise ScenarioError("unknown-directive", f"unknown directive {kw.text!r}", kw.line, kw.column, kw.text)
        args = toks[1:]
        if len(args) != _ARITY[kw.text]:
            raise ScenarioError(
                "syntax", f"{kw.text} takes {_ARITY[kw.text]} argument(s), got {len(args)}",
                kw.line, kw.column, kw.text,
            )
        if kw.text == "pnode":
            pnodes.append(args[0])
        elif kw.text == "plink":
            plinks.append((args[0], args[1]))
        elif kw.text == "lnode":
            lnodes.append(args[0])
        elif kw.text == "llink":
            llinks.append((args[0], args[1]))
        else:
            params[args[0].text] = _parse_param(args[0], args[1])
    return Scenario(_build(pnodes, plinks, lnodes, llinks, routes), params)


def _fail(exc: ModelError, tok: Token | None) -> ScenarioError:
    if tok is None:
        return ScenarioError(exc.code, str(exc), token=exc.token)
    return ScenarioError(exc.code, str(exc), tok.line, tok.column, tok.text)


def _check_known(tok: Token, known: set[str], what: str) -> None:
    if tok.text not in known:
        raise ScenarioError("unknown-node", f"unknown {what} node {tok.text!r}", tok.line, tok.column, tok.text)


def _check_unique(toks: list[Token], what: str) -> None:
    seen: set[str] = set()
    for t in toks:
        if t.text in seen:
            raise ScenarioError("duplicate-node", f"{what} node {t.text!r} declared twice", t.line, t.column, t.text)
        seen.add(t.text)


def _build(pnodes, plinks, lnodes, llinks, routes) -> LayeredNetwork:
    _check_unique(pnodes, "physical")
    _check_unique(lnodes, "logical")
    pknown = {t.text for t in pnodes}
    lknown = {t.text for t in lnodes}
    for u, v in plinks:
        _check_known(u, pknown, "physical")
        _check_known(v, pknown, "physical")
    for t in lnodes:
        _check_known(t, pknown, "physical")
    for s, t in llinks:
        _check_known(s, lknown, "logical")
        _check_known(t, lknown, "logical")
    try:
        physical = PhysicalTopology(tuple(t.text for t in pnodes), tuple((u.text, v.text) for u, v in plinks))
    except ModelError as exc:
        raise _fail(exc, next((u for u, v in plinks if exc.token in (u.text, v.text)), None)) from None
    try:
        logical = LogicalTopology(tuple(t.text for t in lnodes), tuple((s.text, t.text) for s, t in llinks))
    except ModelError as exc:
        raise _fail(exc, next((s for s, t in llinks if exc.token in (s.text, t.text)), None)) from None
    if not routes:
        return LayeredNetwork(physical, logical)
    for i, (index, _) in routes.items():
        if not 0 <= i < len(llinks):
            raise ScenarioError("route-index-range", f"route {i} has no matching llink",
                                index.line, index.column, index.text)
    missing = [i for i in range(len(llinks)) if i not in routes]
    if missing:
        raise ScenarioError("missing-route", f"logical link(s) {missing} have no route; route all or none")
    paths = []
    for i in range(len(llinks)):
        index, nodes = routes[i]
        paths.append(_path(physical, index, nodes))
    try:
        routing = LightpathRouting(physical, logical, tuple(paths))
    except ModelError as exc:
        raise ScenarioError(exc.code, str(exc), token=exc.token) from None
    return LayeredNetwork(physical, logical, routing)


def _path(physical: PhysicalTopology, index: Token, nodes: list[Token]) -> PhysicalPath:
    known = set(physical.nodes)
    for t in nodes:
        _check_known(t, known, "physical")
    seen: set[str] = set()
    for t in nodes:
        if t.text in seen:
            raise ScenarioError("non-simple-path", f"route revisits node {t.text!r}", t.line, t.column, t.text)
        seen.add(t.text)
    for a, b in zip(nodes, nodes[1:]):
        if not physical.has_link(a.text, b.text):
            raise ScenarioError("non-adjacent-step", f"no physical link {a.text}-{b.text}", b.line, b.column, b.text)
    return PhysicalPath.from_nodes(physical, [t.text for t in nodes])


def _format_param(value: Any) -> str:
    if isinstance(value, tuple):
        return ",".join(repr(float(p)) for p in value)
    return str(value)


def format_scenario(network: LayeredNetwork | LightpathRouting, params: dict[str, Any] | None = None) -> str:
    """Serialize a network (and optional parameters) in scenario syntax."""
    if isinstance(network, LightpathRouting):
        network = LayeredNetwork(network.physical, network.logical, network)
    lines = [f"pnode {n}" for n in network.physical.nodes]
    lines += [f"plink {u} {v}" for u, v in network.physical.links]
    lines += [f"lnode {n}" for n in network.logical.nodes]
    lines += [f"llink {s} {t}" for s, t in network.logical.links]
    if network.routing is not None:
        lines += [f"route {j}: " + " ".join(map(str, q.nodes)) for j, q in enumerate(network.routing.routes)]
    for name, value in (params or {}).items():
        lines.append(f"param {name} {_format_param(value)}")
    return "\n".join(lines) + "\n"


__all__ = ["Scenario", "parse_scenario", "format_scenario"]
