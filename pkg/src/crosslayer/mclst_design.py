"""Minimum cross-layer spanning trees and routings that minimize them.

A cross-layer spanning tree is a minimal set of physical links whose
survival keeps the logical network connected. Its minimum size governs the
failure probability as ``p -> 1``: a routing with a smaller MCLST has a
colexicographically smaller cut vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

from .errors import EnumerationLimitError, InfeasibleError
from .model import LightpathRouting, LogicalTopology, PhysicalPath, PhysicalTopology
from .rerouting import k_shortest_paths

DEFAULT_TREE_BUDGET = 1_000_000
DEFAULT_DESIGN_BUDGET = 100_000


@dataclass(frozen=True)
class SurvivalSet:
    """Physical links assumed to survive while every other link fails."""

    links: frozenset[int]
    connected: bool
    minimal: bool


def survival_set(routing: LightpathRouting, links) -> SurvivalSet:
    """Classify a set of surviving physical links.

    ``minimal`` is True when the set keeps the logical network connected and
    dropping any single member disconnects it.
    """
    links = frozenset(links)
    conn = routing.logical.connectivity

    def connected(keep: frozenset[int]) -> bool:
        failed = ((1 << routing.m) - 1) & ~sum(1 << i for i in keep)
        return conn.count(routing.alive_mask(failed)) == 1

    ok = connected(links)
    minimal = ok and all(not connected(links - {i}) for i in links)
    return SurvivalSet(links, ok, minimal)


@dataclass(frozen=True)
class SpanningTreeSummary:
    """Minimum union size over logical spanning trees.

    ``count`` is the number of distinct physical link sets achieving it;
    ``witness_tree`` and ``witness_links`` give one of them.
    """

    size: int
    count: int
    witness_tree: tuple[int, ...]
    witness_links: tuple[int, ...]


def logical_spanning_trees(logical: LogicalTopology, budget: int = DEFAULT_TREE_BUDGET) -> list[tuple[int, ...]]:
    """All spanning trees of the logical multigraph as tuples of link indices."""
    need = len(logical.nodes) - 1
    total = math.comb(len(logical.links), need)
    if total > budget:
        raise EnumerationLimitError(f"{total} logical link subsets exceed the budget {budget}")
    conn = logical.connectivity
    trees = []
    for combo in combinations(range(len(logical.links)), need):
        if conn.count(sum(1 << j for j in combo)) == 1:
            trees.append(combo)
    return trees


def _best_union(route_masks, trees) -> tuple[int, set[int], tuple[int, ...], int]:
    best, unions, witness, witness_mask = None, set(), (), 0
    for tree in trees:
        mask = 0
        for j in tree:
            mask |= route_masks[j]
        size = mask.bit_count()
        if best is None or size < best:
            best, unions, witness, witness_mask = size, {mask}, tree, mask
        elif size == best:
            unions.add(mask)
    assert best is not None
    return best, unions, witness, witness_mask


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def cross_layer_spanning_trees(
    routing: LightpathRouting, budget: int = DEFAULT_TREE_BUDGET
) -> SpanningTreeSummary:
    """Minimum cross-layer spanning tree via logical spanning-tree enumeration."""
    trees = logical_spanning_trees(routing.logical, budget)
    size, unions, tree, mask = _best_union(routing.route_masks, trees)
    return SpanningTreeSummary(size, len(unions), tree, _bits(mask))


@dataclass(frozen=True)
class DesignResult:
    """Routing chosen by :func:`design_min_mclst_routing`."""

    routing: LightpathRouting
    mclst_size: int
    mclst_count: int
    mode: str
    evaluated: int

    @cached_property
    def summary(self) -> SpanningTreeSummary:
        return cross_layer_spanning_trees(self.routing)


def candidate_paths(
    physical: PhysicalTopology, logical: LogicalTopology, k: int
) -> list[list[PhysicalPath]]:
    """Up to ``k`` hop-shortest physical paths per logical link."""
    out = []
    for j, (s, t) in enumerate(logical.links):
        paths = k_shortest_paths(physical, s, t, k)
        if not paths:
            raise InfeasibleError(f"logical link {j} ({s!r}, {t!r}) has no physical path")
        out.append(paths)
    return out


def design_min_mclst_routing(
    physical: PhysicalTopology,
    logical: LogicalTopology,
    k: int = 8,
    exact: bool = True,
    budget: int = DEFAULT_DESIGN_BUDGET,
) -> DesignResult:
    """Route every logical link so that the MCLST is as small as possible.

    Exact mode tries every assignment of logical links to one of their ``k``
    shortest paths and keeps the smallest MCLST, breaking ties by the larger
    number of MCLSTs, then fewer total hops, then the earliest assignment.
    Greedy mode routes one logical spanning tree over mutually overlapping
    paths and every other link over its shortest path.

    Raises:
        EnumerationLimitError: exact mode would evaluate more than ``budget``
            assignments.
        InfeasibleError: some logical link has no physical path.
    """
    cands = candidate_paths(physical, logical, k)
    trees = logical_spanning_trees(logical)
    if not exact:
        return _greedy(physical, logical, cands, trees)
    total = math.prod(len(c) for c in cands)
    if total > budget:
        raise EnumerationLimitError(f"{total} path assignments exceed the budget {budget}; use greedy mode")
    masks = [[q.mask for q in c] for c in cands]
    hops = [[q.hops for q in c] for c in cands]
    best_key, best_choice = None, None
    for choice in product(*(range(len(c)) for c in cands)):
        route_masks = [masks[j][i] for j, i in enumerate(choice)]
        size, unions, _, _ = _best_union(route_masks, trees)
        key = (size, -len(unions), sum(hops[j][i] for j, i in enumerate(choice)))
        if best_key is None or key < best_key:
            best_key, best_choice = key, choice
    assert best_key is not None and best_choice is not None
    routing = LightpathRouting(physical, logical, tuple(cands[j][i] for j, i in enumerate(best_choice)))
    return DesignResult(routing, best_key[0], -best_key[1], "exact", total)


def _greedy(physical, logical, cands, trees) -> DesignResult:
    tree = _bfs_tree(logical)
    chosen: list[PhysicalPath | None] = [None] * len(logical.links)
    used = 0
    for j in tree:
        q = min(cands[j], key=lambda q: ((q.mask & ~used).bit_count(), q.hops, q.links))
        chosen[j] = q
        used |= q.mask
    for j, q in enumerate(chosen):
        if q is None:
            chosen[j] = cands[j][0]
    routing = LightpathRouting(physical, logical, tuple(chosen))
    size, unions, _, _ = _best_union(routing.route_masks, trees)
    return DesignResult(routing, size, len(unions), "greedy", 1)


def _bfs_tree(logical: LogicalTopology) -> list[int]:
    """Logical links of a BFS spanning tree from the first declared node."""
    adjacency: dict = {node: [] for node in logical.nodes}
    for j, (s, t) in enumerate(logical.links):
        adjacency[s].append((j, t))
        adjacency[t].append((j, s))
    seen = {logical.nodes[0]}
    frontier = [logical.nodes[0]]
    tree = []
    while frontier:
        nxt = []
        for u in frontier:
            for j, v in adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    tree.append(j)
                    nxt.append(v)
        frontier = nxt
    return tree


__all__ = [
    "SurvivalSet",
    "SpanningTreeSummary",
    "DesignResult",
    "survival_set",
    "logical_spanning_trees",
    "cross_layer_spanning_trees",
    "candidate_paths",
    "design_min_mclst_routing",
]
