"""Command line interface.

Every command reads scenario files and prints one JSON report to stdout (or
``--output``). Reports carry a schema tag, keep a fixed key order, and
contain no timestamps, so identical invocations give identical bytes.

Exit codes: 0 success, 1 an ``oracle`` cross-check failed, 2 parse or model
error, 3 enumeration budget exceeded, 4 infeasible (no path).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import augmentation, mclst_design, ordering, reliability, rerouting
from .errors import EnumerationLimitError, InfeasibleError, ModelError
from .model import LightpathRouting, PhysicalPath
from .scenario import Scenario, format_scenario, parse_scenario

SCHEMA = "crosslayer.report/1"
EXIT_OK, EXIT_CHECK, EXIT_MODEL, EXIT_BUDGET, EXIT_INFEASIBLE = 0, 1, 2, 3, 4


def default_grid() -> tuple[float, ...]:
    """``0.001 * 2**i`` for ``i = 0..9`` together with ``0.1 .. 0.9``."""
    return tuple(sorted({0.001 * 2**i for i in range(10)} | {i / 10 for i in range(1, 10)}))


def _fraction(x: Fraction | None) -> Any:
    if x is None:
        return None
    return {"exact": f"{x.numerator}/{x.denominator}", "value": float(x)}


def _path(q: PhysicalPath | None) -> Any:
    if q is None:
        return None
    return {"nodes": list(map(str, q.nodes)), "links": list(q.links), "hops": q.hops}


def _vector(v: reliability.CutVector) -> list[int | None]:
    return list(v.counts)


def _mclc(found: tuple[int, int] | None) -> Any:
    return None if found is None else {"d": found[0], "N_d": found[1]}


def _samples(v: reliability.CutVector, grid: Sequence[float]) -> list[list[float]] | None:
    if not v.complete:
        return None
    return [[p, reliability.failure_probability(v, p)] for p in grid]


class Context:
    """Resolved options: command-line flags first, then scenario params, then defaults."""

    def __init__(self, args: argparse.Namespace, scenario: Scenario | None = None):
        self.args = args
        self.params = scenario.params if scenario else {}

    def get(self, name: str, default: Any) -> Any:
        value = getattr(self.args, name.replace("-", "_"), None)
        if value is not None:
            return value
        return self.params.get(name, default)


def _load(path: str) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def _grid_arg(text: str) -> tuple[float, ...]:
    try:
        ps = tuple(float(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None
    if not ps or any(not 0 <= p <= 1 for p in ps):
        raise argparse.ArgumentTypeError("grid probabilities must lie in [0, 1]")
    return ps


def cmd_analyze(args: argparse.Namespace) -> tuple[dict, int]:
    sc = _load(args.scenario)
    ctx = Context(args, sc)
    routing = sc.require_routing()
    vector = reliability.cut_vector(routing, ctx.get("max-size", None))
    found = reliability.mclc(routing)
    stats = reliability.mclst(routing, vector)
    return {
        "m": routing.m,
        "logical_nodes": len(routing.logical.nodes),
        "logical_links": len(routing.logical.links),
        "cut_vector": _vector(vector),
        "complete": vector.complete,
        "mclc": _mclc(found),
        "mclst": {"size": stats.mclst_size, "count": stats.mclst_count},
        "colex_c": vector.colex_c,
        "failure": _samples(vector, ctx.get("grid", default_grid())),
    }, EXIT_OK


def _comparison(c: ordering.LexComparison) -> dict:
    return {
        "direction": c.direction.value,
        "first_diff": c.first_diff,
        "degree": c.degree,
        "promoted": c.promoted,
        "bounds": [[j, _fraction(b)] for j, b in c.bounds],
        "p0": _fraction(c.p0),
    }


def cmd_compare(args: argparse.Namespace) -> tuple[dict, int]:
    first, second = _load(args.first), _load(args.second)
    va = reliability.cut_vector(first.require_routing())
    vb = reliability.cut_vector(second.require_routing())
    report = ordering.dominance_check(va, vb)
    simple = None
    if report.lex.strict:
        small, large = (va, vb) if report.lex.direction is ordering.Direction.FIRST_SMALLER else (vb, va)
        simple = ordering.low_regime_bound_simple(small, large)
    winner = {0: "first", 1: "second", None: None}[report.winner]
    return {
        "cut_vectors": [_vector(va), _vector(vb)],
        "dominance": {"kind": report.kind.value, "winner": winner},
        "lex": {**_comparison(report.lex), "p0_simple": _fraction(simple)},
        "colex": _comparison(report.colex),
        "crossovers": ordering.crossover_points(va, vb) if va.m == vb.m else [],
    }, EXIT_OK


def _plan(plan: rerouting.ReroutePlan) -> dict:
    d_after, nd_after = plan.mclc_after
    return {
        "logical_link": plan.lp,
        "old_path": _path(plan.old_path),
        "new_path": _path(plan.new_path),
        "changed": plan.changed,
        "d": plan.d,
        "N_d_before": plan.nd_before,
        "N_d_after": plan.nd_after,
        "mclc_after": {"d": d_after, "N_d": nd_after},
        "cut_vector_after": _vector(plan.cut_vector),
    }


def cmd_reroute(args: argparse.Namespace) -> tuple[dict, int]:
    sc = _load(args.scenario)
    ctx = Context(args, sc)
    routing = sc.require_routing()
    k = ctx.get("k", 1)
    if args.iterate:
        trace = rerouting.iterative_reroute(routing, k, args.method)
        return {
            "k": k,
            "method": args.method,
            "trace": [
                {"logical_link": s.lp, "path": _path(s.path), "d": s.d, "N_d": s.nd} for s in trace.steps
            ],
            "cut_vector": _vector(reliability.cut_vector(trace.routing)),
            "scenario": format_scenario(trace.routing),
        }, EXIT_OK
    plan = rerouting.best_reroute(routing, k, args.method)
    if plan is None:
        return {"k": k, "method": args.method, "plan": None}, EXIT_INFEASIBLE
    return {"k": k, "method": args.method, "plan": _plan(plan)}, EXIT_OK


def cmd_augment(args: argparse.Namespace) -> tuple[dict, int]:
    sc = _load(args.scenario)
    ctx = Context(args, sc)
    routing = sc.require_routing()
    k, n = ctx.get("k", 1), ctx.get("n", 1)
    grid = ctx.get("grid", default_grid())
    trace = augmentation.iterative_augment(routing, n, k, grid, args.method)
    return {
        "k": k,
        "n": n,
        "method": args.method,
        "probabilities": list(trace.probabilities),
        "trace": [
            {
                "link": None if s.link is None else list(map(str, s.link)),
                "path": _path(s.path),
                "d": s.d,
                "N_d": s.nd,
                "failure": list(s.failure),
            }
            for s in trace.steps
        ],
        "cut_vectors": [_vector(v) for v in trace.vectors],
        "scenario": format_scenario(trace.routing),
    }, EXIT_OK


def cmd_design(args: argparse.Namespace) -> tuple[dict, int]:
    sc = _load(args.scenario)
    ctx = Context(args, sc)
    k = ctx.get("k", 8)
    result = mclst_design.design_min_mclst_routing(sc.network.physical, sc.network.logical, k, args.exact)
    return {
        "k": k,
        "mode": result.mode,
        "assignments_evaluated": result.evaluated,
        "mclst": {"size": result.mclst_size, "count": result.mclst_count},
        "routes": [_path(q) for q in result.routing.routes],
        "scenario": format_scenario(result.routing),
    }, EXIT_OK


def cmd_montecarlo(args: argparse.Namespace) -> tuple[dict, int]:
    sc = _load(args.scenario)
    ctx = Context(args, sc)
    routing = sc.require_routing()
    p = ctx.get("p", None)
    if p is None:
        raise ModelError("missing-param", "montecarlo needs --p or a 'param p' line")
    est = reliability.monte_carlo_failure(routing, p, ctx.get("trials", 100_000), ctx.get("seed", 0))
    return {
        "p": p,
        "trials": est.trials,
        "seed": est.seed,
        "generator": est.generator,
        "estimate": est.estimate,
        "stderr": est.stderr,
    }, EXIT_OK


def _oracle_checks(routing: LightpathRouting, k: int) -> list[dict]:
    checks = []

    def record(name: str, ok: bool, **detail: Any) -> None:
        checks.append({"name": name, "ok": bool(ok), **detail})

    fast = reliability.cut_vector(routing, method="bitscan")
    slow = reliability.cut_vector(routing, method="stratified")
    record("engines-agree", fast == slow, cut_vector=_vector(fast))
    stats = reliability.mclst(routing)
    trees = mclst_design.cross_layer_spanning_trees(routing)
    record(
        "mclst-consistent",
        stats.mclst_size == trees.size == routing.m - fast.colex_c and stats.mclst_count == trees.count,
        size=stats.mclst_size,
    )
    for lp in range(len(routing.routes)):
        sp = rerouting.reroute_sp(routing, lp, k)
        exact = rerouting.exact_reroute_oracle(routing, lp)
        if sp is None or exact is None:
            record(f"reroute-{lp}", sp is None and exact is None)
            continue
        actual = reliability.count_cuts_of_size(sp.routing, sp.d)
        record(
            f"reroute-{lp}",
            actual == sp.nd_after and actual <= sp.d * exact.nd_after and sp.mclc_after[0] >= sp.d,
            sp=actual,
            exact=exact.nd_after,
        )
    return checks


def cmd_oracle(args: argparse.Namespace) -> tuple[dict, int]:
    sc = _load(args.scenario)
    ctx = Context(args, sc)
    checks = _oracle_checks(sc.require_routing(), ctx.get("k", 1))
    ok = all(c["ok"] for c in checks)
    return {"ok": ok, "checks": checks}, EXIT_OK if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crosslayer", description="Cross-layer reliability analysis of layered networks.")
    parser.add_argument("--output", "-o", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func, help_text: str, scenarios: Sequence[str] = ("scenario",)):
        p = sub.add_parser(name, help=help_text)
        for s in scenarios:
            p.add_argument(s)
        p.add_argument("--grid", type=_grid_arg, help="comma-separated failure probabilities")
        p.add_argument("--max-size", type=int, help="enumerate cuts only up to this size")
        p.set_defaults(func=func)
        return p

    command("analyze", cmd_analyze, "cut vector, MCLC, MCLST and failure samples")
    command("compare", cmd_compare, "ordering verdicts and regime bounds", ("first", "second"))
    p = command("reroute", cmd_reroute, "best single reroute or iterative rerouting")
    p.add_argument("--k", type=int)
    p.add_argument("--iterate", action="store_true")
    p.add_argument("--method", choices=("sp", "exact"), default="sp")
    p = command("augment", cmd_augment, "add logical links to reduce min cuts")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--method", choices=("sp", "exact"), default="sp")
    p = command("design-mclst", cmd_design, "route logical links to minimize the MCLST")
    p.add_argument("--k", type=int)
    p.add_argument("--exact", action="store_true", help="exhaustive assignment search instead of greedy")
    p = command("montecarlo", cmd_montecarlo, "Monte Carlo estimate of the failure probability")
    p.add_argument("--p", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p = command("oracle", cmd_oracle, "exhaustive cross-checks of the fast algorithms")
    p.add_argument("--k", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        body, code = args.func(args)
    except (ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except EnumerationLimitError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    text = json.dumps({"schema": SCHEMA, "command": args.command, **body}, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
