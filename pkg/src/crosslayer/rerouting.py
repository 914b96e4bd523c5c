"""Single-lightpath rerouting.

Rerouting one logical link ``(s, t)`` changes the cut status of a state only
in two ways:

* a cut ``S`` becomes a non-cut iff ``S`` is a 2-way cut separating ``s``
  and ``t`` and the new path avoids ``S``;
* a non-cut ``T`` becomes a cut iff ``(s, t)`` is a bridge of ``T``'s
  residual graph and the new path uses a link of ``T``.

Only non-cuts of size ``>= d - 1`` can be converted, so classifying states of
size ``d - 1`` and ``d`` is enough to predict the new ``N_d`` of any reroute
exactly. :func:`reroute_sp` turns this into a weighted shortest-path search;
:func:`exact_reroute_oracle` checks every simple path by direct recount.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import islice
import networkx as nx

from .errors import EnumerationLimitError, ModelError
from .model import (
    LightpathRouting,
    NetworkState,
    PhysicalPath,
    PhysicalTopology,
    critical_links,
    is_two_way_cut,
    separates,
)
from .reliability import CutVector, _states_of_size, count_cuts_of_size, cut_vector, mclc

DEFAULT_PATH_BUDGET = 100_000


@dataclass(frozen=True)
class StateClassification:
    """States of size ``d - 1`` and ``d`` sorted by how a reroute can affect them.

    States are integer bit-sets. ``labels`` holds the residual component label
    of every logical node (by position) for each cut in ``cuts_d``;
    ``critical`` holds the bridge set of every non-cut in ``noncuts_d`` and
    ``noncuts_dm1``.
    """

    routing: LightpathRouting
    d: int
    cuts_d: tuple[int, ...]
    multiway_cuts_d: tuple[int, ...]
    noncuts_d: tuple[int, ...]
    noncuts_dm1: tuple[int, ...]
    labels: dict[int, tuple[int, ...]]
    critical: dict[int, frozenset[int]]

    @property
    def n_d(self) -> int:
        return len(self.cuts_d) + len(self.multiway_cuts_d)

    def _ends(self, lp: int) -> tuple[int, int]:
        s, t = self.routing.logical.links[lp]
        pos = self.routing.logical.position
        return pos[s], pos[t]

    def fixable_cuts(self, lp: int) -> tuple[int, ...]:
        """2-way cuts of size ``d`` that separate the endpoints of ``lp``."""
        a, b = self._ends(lp)
        return tuple(S for S in self.cuts_d if self.labels[S][a] != self.labels[S][b])

    def persistent_cuts(self, lp: int) -> tuple[int, ...]:
        """Size-``d`` cuts that stay cuts whatever new path ``lp`` takes."""
        a, b = self._ends(lp)
        two_way = tuple(S for S in self.cuts_d if self.labels[S][a] == self.labels[S][b])
        return two_way + self.multiway_cuts_d

    def noncuts_d_for(self, lp: int) -> tuple[int, ...]:
        return tuple(T for T in self.noncuts_d if lp in self.critical[T])

    def noncuts_dm1_for(self, lp: int) -> tuple[int, ...]:
        return tuple(T for T in self.noncuts_dm1 if lp in self.critical[T])


def classify_states(routing: LightpathRouting) -> StateClassification:
    """Enumerate states of size ``d - 1`` and ``d`` and classify them."""
    found = mclc(routing)
    if found is None:
        raise ModelError("no-cut", "the logical topology has a single node; nothing to reroute")
    d = found[0]
    conn = routing.logical.connectivity
    cuts, multi, nc_d, nc_dm1 = [], [], [], []
    labels: dict[int, tuple[int, ...]] = {}
    critical: dict[int, frozenset[int]] = {}
    for size, bucket in ((d - 1, nc_dm1), (d, nc_d)):
        for S in _states_of_size(routing.m, size):
            alive = routing.alive_mask(S)
            count, labs = conn.components(alive)
            if count == 1:
                bucket.append(S)
                critical[S] = conn.bridges(alive)
            elif size == d:
                if count == 2:
                    cuts.append(S)
                    labels[S] = labs
                else:
                    multi.append(S)
    return StateClassification(
        routing, d, tuple(cuts), tuple(multi), tuple(nc_d), tuple(nc_dm1), labels, critical
    )


def cut_to_noncut(routing: LightpathRouting, state: NetworkState | int, lp: int, new_path: PhysicalPath) -> bool:
    """Predict whether rerouting ``lp`` onto ``new_path`` turns cut ``state`` into a non-cut."""
    bits = state.bits if isinstance(state, NetworkState) else state
    s, t = routing.logical.links[lp]
    return (
        is_two_way_cut(routing, bits)
        and separates(routing, bits, s, t)
        and not new_path.mask & bits
    )


def noncut_to_cut(routing: LightpathRouting, state: NetworkState | int, lp: int, new_path: PhysicalPath) -> bool:
    """Predict whether rerouting ``lp`` onto ``new_path`` turns non-cut ``state`` into a cut."""
    bits = state.bits if isinstance(state, NetworkState) else state
    return lp in critical_links(routing, bits) and bool(new_path.mask & bits)


@dataclass(frozen=True)
class RerouteWeighting:
    """Search graph data for rerouting one logical link.

    ``cover[i]`` is the set of size-``d`` states that remain or become cuts
    if the new path uses physical link ``i``; its size is the link weight.
    ``offset`` counts the size-``d`` cuts no reroute of this link can fix.
    """

    lp: int
    forbidden: int
    cover: tuple[frozenset[int], ...]
    offset: int

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cover)

    def covered(self, path: PhysicalPath) -> frozenset[int]:
        out: set[int] = set()
        for i in path.links:
            out |= self.cover[i]
        return frozenset(out)

    def predicted_nd(self, path: PhysicalPath) -> int:
        return self.offset + len(self.covered(path))


def reroute_weighting(classification: StateClassification, lp: int) -> RerouteWeighting:
    m = classification.routing.m
    forbidden = 0
    for T in classification.noncuts_dm1_for(lp):
        forbidden |= T
    cover: list[set[int]] = [set() for _ in range(m)]
    for S in classification.fixable_cuts(lp) + classification.noncuts_d_for(lp):
        for i in range(m):
            if S >> i & 1:
                cover[i].add(S)
    return RerouteWeighting(
        lp,
        forbidden,
        tuple(frozenset(c) for c in cover),
        len(classification.persistent_cuts(lp)),
    )


@dataclass(frozen=True)
class ReroutePlan:
    """A candidate reroute of logical link ``lp`` and its effect.

    ``nd_after`` is the number of cuts of the original MCLC size ``d`` after
    the reroute (predicted for :func:`reroute_sp`, counted for the oracle).
    """

    lp: int
    old_path: PhysicalPath
    new_path: PhysicalPath
    d: int
    nd_before: int
    nd_after: int
    routing: LightpathRouting
    candidates: int = 1

    @property
    def changed(self) -> bool:
        return self.new_path != self.old_path

    @property
    def delta_nd(self) -> int:
        return self.nd_before - self.nd_after

    @cached_property
    def cut_vector(self) -> CutVector:
        return cut_vector(self.routing)

    @cached_property
    def mclc_after(self) -> tuple[int, int]:
        found = mclc(self.routing)
        assert found is not None
        return found


def _path_key(path: PhysicalPath) -> tuple[int, tuple[int, ...]]:
    return path.hops, path.links


def k_shortest_paths(
    physical: PhysicalTopology,
    s,
    t,
    k: int,
    weights: tuple[int, ...] | None = None,
    exclude: int = 0,
) -> list[PhysicalPath]:
    """Up to ``k`` loopless ``s``-``t`` paths in order of additive weight (Yen)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = physical.graph(exclude)
    if weights is not None:
        for _, _, data in g.edges(data=True):
            data["weight"] = weights[data["index"]]
    try:
        gen = nx.shortest_simple_paths(g, s, t, weight="weight" if weights is not None else None)
        return [PhysicalPath.from_nodes(physical, p) for p in islice(gen, k)]
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        return []


def reroute_sp(
    routing: LightpathRouting,
    lp: int,
    k: int = 1,
    classification: StateClassification | None = None,
) -> ReroutePlan | None:
    """Approximate best reroute of logical link ``lp``.

    Weights each usable physical link by the number of size-``d`` states it
    would leave or make cut, drops links whose use would create a cut of size
    ``d - 1``, and scores the ``k`` lightest paths by the exact union count.
    Returns None if ``s`` and ``t`` are disconnected after dropping links.
    """
    if not 0 <= lp < len(routing.routes):
        raise ModelError("bad-route-index", f"no logical link {lp}")
    cls = classification or classify_states(routing)
    weighting = reroute_weighting(cls, lp)
    s, t = routing.logical.links[lp]
    paths = k_shortest_paths(routing.physical, s, t, k, weighting.weights, weighting.forbidden)
    if not paths:
        return None
    best = min(paths, key=lambda q: (weighting.predicted_nd(q), *_path_key(q)))
    return ReroutePlan(
        lp,
        routing.routes[lp],
        best,
        cls.d,
        cls.n_d,
        weighting.predicted_nd(best),
        routing.with_route(lp, best),
        len(paths),
    )


def exact_reroute_oracle(
    routing: LightpathRouting, lp: int, path_budget: int = DEFAULT_PATH_BUDGET
) -> ReroutePlan | None:
    """Best reroute of ``lp`` by exhaustive search over simple paths.

    Every candidate routing is recounted directly: paths creating any cut
    smaller than ``d`` are rejected, the rest are ranked by the number of
    size-``d`` cuts, then hop count, then link order.

    Raises:
        EnumerationLimitError: more than ``path_budget`` simple paths exist.
    """
    found = mclc(routing)
    if found is None:
        raise ModelError("no-cut", "the logical topology has a single node; nothing to reroute")
    d, nd = found
    s, t = routing.logical.links[lp]
    best_key, best = None, None
    for n, nodes in enumerate(nx.all_simple_paths(routing.physical.graph(), s, t)):
        if n >= path_budget:
            raise EnumerationLimitError(f"more than {path_budget} simple paths between {s!r} and {t!r}")
        path = PhysicalPath.from_nodes(routing.physical, nodes)
        candidate = routing.with_route(lp, path)
        if any(count_cuts_of_size(candidate, i, limit=1) for i in range(1, d)):
            continue
        key = (count_cuts_of_size(candidate, d), *_path_key(path))
        if best_key is None or key < best_key:
            best_key, best = key, (path, candidate)
    if best is None:
        return None
    return ReroutePlan(lp, routing.routes[lp], best[0], d, nd, best_key[0], best[1])


@dataclass(frozen=True)
class RerouteStep:
    lp: int | None
    path: PhysicalPath | None
    d: int
    nd: int


@dataclass(frozen=True)
class RerouteTrace:
    """Routing reached by iterative rerouting and the ``(d, N_d)`` history.

    ``steps[0]`` describes the starting routing (``lp`` is None).
    """

    routing: LightpathRouting
    steps: tuple[RerouteStep, ...]

    @property
    def iterations(self) -> int:
        return len(self.steps) - 1


def best_reroute(routing: LightpathRouting, k: int = 1, method: str = "sp") -> ReroutePlan | None:
    """Best single-lightpath reroute over all logical links.

    Plans are ranked by the resulting ``(-d, N_d)``, then hop count, then
    logical link index. ``method`` is ``"sp"`` or ``"exact"``.
    """
    if method not in ("sp", "exact"):
        raise ValueError(f"unknown method {method!r}")
    cls = classify_states(routing) if method == "sp" else None
    ranked = []
    for lp in range(len(routing.routes)):
        plan = reroute_sp(routing, lp, k, cls) if cls else exact_reroute_oracle(routing, lp)
        if plan is None:
            continue
        d_after, nd_after = plan.mclc_after
        ranked.append(((-d_after, nd_after, plan.new_path.hops, lp), plan))
    if not ranked:
        return None
    return min(ranked, key=lambda item: item[0])[1]


def iterative_reroute(
    routing: LightpathRouting,
    k: int = 1,
    method: str = "sp",
    max_iterations: int | None = None,
) -> RerouteTrace:
    """Apply best single reroutes until ``(-d, N_d)`` stops improving."""
    found = mclc(routing)
    if found is None:
        raise ModelError("no-cut", "the logical topology has a single node; nothing to reroute")
    steps = [RerouteStep(None, None, *found)]
    current = routing
    while max_iterations is None or len(steps) <= max_iterations:
        plan = best_reroute(current, k, method)
        if plan is None:
            break
        d_after, nd_after = plan.mclc_after
        last = steps[-1]
        if (-d_after, nd_after) >= (-last.d, last.nd):
            break
        current = plan.routing
        steps.append(RerouteStep(plan.lp, plan.new_path, d_after, nd_after))
    return RerouteTrace(current, tuple(steps))


def possible_paths(routing: LightpathRouting, lp: int, limit: int = DEFAULT_PATH_BUDGET) -> list[PhysicalPath]:
    """All simple physical paths between the endpoints of ``lp``."""
    s, t = routing.logical.links[lp]
    out = []
    for nodes in nx.all_simple_paths(routing.physical.graph(), s, t):
        if len(out) >= limit:
            raise EnumerationLimitError(f"more than {limit} simple paths between {s!r} and {t!r}")
        out.append(PhysicalPath.from_nodes(routing.physical, nodes))
    return out


__all__ = [
    "StateClassification",
    "RerouteWeighting",
    "ReroutePlan",
    "RerouteStep",
    "RerouteTrace",
    "classify_states",
    "cut_to_noncut",
    "noncut_to_cut",
    "reroute_weighting",
    "reroute_sp",
    "exact_reroute_oracle",
    "best_reroute",
    "iterative_reroute",
    "k_shortest_paths",
    "possible_paths",
]
