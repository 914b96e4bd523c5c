"""Logical-topology augmentation.

Adding a logical link ``(s, t)`` routed over physical path ``Q`` never turns a
non-cut into a cut. It turns a size-``d`` cut ``S`` into a non-cut exactly
when ``S`` is a 2-way cut separating ``s`` and ``t`` and ``Q`` avoids ``S``.
Choosing ``Q`` therefore amounts to minimizing the number of candidate cuts
it touches, which :func:`augment_sp` approximates by a weighted shortest path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

import networkx as nx

from .errors import EnumerationLimitError, ModelError
from .model import LightpathRouting, Node, PhysicalPath
from .reliability import CutVector, count_cuts_of_size, cut_vector, failure_probability, mclc
from .rerouting import DEFAULT_PATH_BUDGET, StateClassification, classify_states, k_shortest_paths


@dataclass(frozen=True)
class AugmentPlan:
    """A new logical link, its physical route, and the size-``d`` cuts it repairs.

    ``candidates`` are the 2-way size-``d`` cuts separating ``s`` and ``t``;
    ``converted`` is how many of them the path avoids.
    """

    s: Node
    t: Node
    path: PhysicalPath
    candidates: tuple[int, ...]
    converted: int
    d: int
    nd_before: int
    routing: LightpathRouting

    @property
    def predicted_nd(self) -> int:
        return self.nd_before - self.converted

    @cached_property
    def cut_vector(self) -> CutVector:
        return cut_vector(self.routing)

    @cached_property
    def mclc_after(self) -> tuple[int, int] | None:
        return mclc(self.routing)


def _check_pair(routing: LightpathRouting, s: Node, t: Node) -> None:
    pos = routing.logical.position
    for end in (s, t):
        if end not in pos:
            raise ModelError("unknown-node", f"{end!r} is not a logical node", str(end))
    if s == t:
        raise ModelError("self-loop", f"cannot add a logical self-loop at {s!r}", str(s))


def augment_candidates(
    routing: LightpathRouting, s: Node, t: Node, classification: StateClassification | None = None
) -> tuple[int, ...]:
    """2-way cuts of size ``d`` that separate logical nodes ``s`` and ``t``."""
    _check_pair(routing, s, t)
    cls = classification or classify_states(routing)
    pos = routing.logical.position
    a, b = pos[s], pos[t]
    return tuple(S for S in cls.cuts_d if cls.labels[S][a] != cls.labels[S][b])


def augment_sp(
    routing: LightpathRouting,
    s: Node,
    t: Node,
    k: int = 1,
    classification: StateClassification | None = None,
) -> AugmentPlan | None:
    """Approximate best route for a new logical link ``(s, t)``.

    Each physical link is weighted by the number of candidate cuts containing
    it; among the ``k`` lightest paths the one touching the fewest candidate
    cuts wins. Returns None when ``s`` and ``t`` are physically disconnected.
    """
    cls = classification or classify_states(routing)
    candidates = augment_candidates(routing, s, t, cls)
    weights = [0] * routing.m
    for S in candidates:
        for i in range(routing.m):
            if S >> i & 1:
                weights[i] += 1
    paths = k_shortest_paths(routing.physical, s, t, k, tuple(weights))
    if not paths:
        return None

    def touched(q: PhysicalPath) -> int:
        return sum(1 for S in candidates if S & q.mask)

    best = min(paths, key=lambda q: (touched(q), q.hops, q.links))
    return AugmentPlan(
        s,
        t,
        best,
        candidates,
        len(candidates) - touched(best),
        cls.d,
        cls.n_d,
        routing.with_added_link(s, t, best),
    )


def exact_augment_oracle(
    routing: LightpathRouting, s: Node, t: Node, path_budget: int = DEFAULT_PATH_BUDGET
) -> AugmentPlan | None:
    """Best route for a new logical link ``(s, t)`` by exhaustive recount."""
    _check_pair(routing, s, t)
    found = mclc(routing)
    if found is None:
        raise ModelError("no-cut", "the logical topology has a single node; nothing to augment")
    d, nd = found
    best_key, best = None, None
    for n, nodes in enumerate(nx.all_simple_paths(routing.physical.graph(), s, t)):
        if n >= path_budget:
            raise EnumerationLimitError(f"more than {path_budget} simple paths between {s!r} and {t!r}")
        path = PhysicalPath.from_nodes(routing.physical, nodes)
        candidate = routing.with_added_link(s, t, path)
        key = (count_cuts_of_size(candidate, d), path.hops, path.links)
        if best_key is None or key < best_key:
            best_key, best = key, (path, candidate)
    if best is None:
        return None
    return AugmentPlan(s, t, best[0], (), nd - best_key[0], d, nd, best[1])


def best_augmentation(routing: LightpathRouting, k: int = 1, method: str = "sp") -> AugmentPlan | None:
    """Best single augmentation over all unordered pairs of logical nodes.

    Pairs already joined by a logical link are allowed (the new link runs in
    parallel). Plans are ranked by converted cuts, then fewer hops, then
    pair order in the logical node declaration.
    """
    if method not in ("sp", "exact"):
        raise ValueError(f"unknown method {method!r}")
    cls = classify_states(routing) if method == "sp" else None
    ranked = []
    for order, (s, t) in enumerate(combinations(routing.logical.nodes, 2)):
        plan = augment_sp(routing, s, t, k, cls) if cls else exact_augment_oracle(routing, s, t)
        if plan is not None:
            ranked.append(((-plan.converted, plan.path.hops, order), plan))
    if not ranked:
        return None
    return min(ranked, key=lambda item: item[0])[1]


@dataclass(frozen=True)
class AugmentStep:
    """One row of an augmentation trace; the first row has no new link."""

    link: tuple[Node, Node] | None
    path: PhysicalPath | None
    d: int | None
    nd: int
    failure: tuple[float, ...]


@dataclass(frozen=True)
class AugmentTrace:
    routing: LightpathRouting
    probabilities: tuple[float, ...]
    steps: tuple[AugmentStep, ...]
    vectors: tuple[CutVector, ...]


def _row(routing: LightpathRouting, link, path, vector: CutVector, ps: Sequence[float]) -> AugmentStep:
    d = vector.mclc_d
    nd = vector[d] if d is not None else 0
    return AugmentStep(link, path, d, nd, tuple(failure_probability(vector, p) for p in ps))


def iterative_augment(
    routing: LightpathRouting,
    n: int,
    k: int = 1,
    probabilities: Sequence[float] = (0.01, 0.1, 0.5),
    method: str = "sp",
) -> AugmentTrace:
    """Apply :func:`best_augmentation` ``n`` times and record ``(d, N_d, F(p))``.

    Steps that repair no cut are still applied and reported. Every step is
    checked to leave no cut count larger than before.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    ps = tuple(float(p) for p in probabilities)
    vector = cut_vector(routing)
    steps = [_row(routing, None, None, vector, ps)]
    vectors = [vector]
    current = routing
    for _ in range(n):
        if vector.mclc_d is None:
            break
        plan = best_augmentation(current, k, method)
        if plan is None:
            break
        current = plan.routing
        new = cut_vector(current)
        if any(x > y for x, y in zip(new.counts, vector.counts)):
            raise RuntimeError(f"augmentation increased a cut count: {vector.counts} -> {new.counts}")
        vector = new
        vectors.append(vector)
        steps.append(_row(current, (plan.s, plan.t), plan.path, vector, ps))
    return AugmentTrace(current, ps, tuple(steps), tuple(vectors))


__all__ = [
    "AugmentPlan",
    "AugmentStep",
    "AugmentTrace",
    "augment_candidates",
    "augment_sp",
    "exact_augment_oracle",
    "best_augmentation",
    "iterative_augment",
]
