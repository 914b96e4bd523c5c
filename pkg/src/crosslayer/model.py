"""Layered network model: topologies, lightpath routings, and failure states.

Physical links and logical links are addressed by their position in the
declaring topology. A network state is an integer bit-set over physical link
indices, so that state spaces can be enumerated as ``range(2**m)``.

Logical nodes are identified with physical nodes by shared identifier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import networkx as nx

from .errors import ModelError

Node = Hashable


def _pair_key(u: Node, v: Node) -> frozenset:
    return frozenset((u, v))


@dataclass(frozen=True)
class PhysicalTopology:
    """Undirected simple graph of fibers. Link ``i`` is ``links[i]``."""

    nodes: tuple[Node, ...]
    links: tuple[tuple[Node, Node], ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(tuple(link) for link in self.links))
        if len(set(self.nodes)) != len(self.nodes):
            raise ModelError("duplicate-node", "physical node declared twice")
        known = set(self.nodes)
        index: dict[frozenset, int] = {}
        for i, (u, v) in enumerate(self.links):
            for end in (u, v):
                if end not in known:
                    raise ModelError("unknown-node", f"physical link {i} uses unknown node {end!r}", str(end))
            if u == v:
                raise ModelError("self-loop", f"physical link {i} is a self-loop at {u!r}", str(u))
            key = _pair_key(u, v)
            if key in index:
                raise ModelError(
                    "duplicate-link",
                    f"physical link {i} duplicates link {index[key]} ({u!r}, {v!r})",
                    f"{u} {v}",
                )
            index[key] = i
        object.__setattr__(self, "_index", index)

    @property
    def m(self) -> int:
        return len(self.links)

    def link_index(self, u: Node, v: Node) -> int:
        """Index of the link joining ``u`` and ``v``; raises if not adjacent."""
        try:
            return self._index[_pair_key(u, v)]
        except KeyError:
            raise ModelError("non-adjacent-step", f"no physical link between {u!r} and {v!r}", f"{u} {v}") from None

    def has_link(self, u: Node, v: Node) -> bool:
        return _pair_key(u, v) in self._index

    def graph(self, exclude: int = 0) -> nx.Graph:
        """networkx view; ``exclude`` is a bit-set of link indices to omit."""
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        for i, (u, v) in enumerate(self.links):
            if not exclude >> i & 1:
                g.add_edge(u, v, index=i)
        return g


class _Connectivity:
    """Memoized component labeling of a logical graph, keyed by alive-link mask."""

    _CACHE_LIMIT = 1 << 18

    def __init__(self, nodes: Sequence[Node], links: Sequence[tuple[Node, Node]]):
        self.n = len(nodes)
        pos = {node: i for i, node in enumerate(nodes)}
        self.ends = tuple((pos[s], pos[t]) for s, t in links)
        self.full = (1 << len(links)) - 1
        self._cache: dict[int, tuple[int, tuple[int, ...]]] = {}

    def components(self, alive: int) -> tuple[int, tuple[int, ...]]:
        """Return (component count, label per node position).

        A node's label is the smallest node position in its component.
        """
        hit = self._cache.get(alive)
        if hit is not None:
            return hit
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        bits = alive
        j = 0
        while bits:
            if bits & 1:
                a, b = find(self.ends[j][0]), find(self.ends[j][1])
                if a != b:
                    # keep the smaller position as root so roots are canonical labels
                    if a < b:
                        parent[b] = a
                    else:
                        parent[a] = b
            bits >>= 1
            j += 1
        labels = tuple(find(x) for x in range(self.n))
        result = (len(set(labels)), labels)
        if len(self._cache) >= self._CACHE_LIMIT:
            self._cache.clear()
        self._cache[alive] = result
        return result

    def count(self, alive: int) -> int:
        return self.components(alive)[0]

    def bridges(self, alive: int) -> frozenset[int]:
        """Indices of alive links whose removal increases the component count.

        Iterative lowlink search over edge ids, so parallel links are handled.
        """
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for j, (a, b) in enumerate(self.ends):
            if alive >> j & 1:
                adj[a].append((b, j))
                adj[b].append((a, j))
        disc = [-1] * self.n
        low = [0] * self.n
        found: set[int] = set()
        clock = 0
        for root in range(self.n):
            if disc[root] != -1:
                continue
            disc[root] = low[root] = clock
            clock += 1
            stack = [(root, -1, iter(adj[root]))]
            while stack:
                v, via, it = stack[-1]
                advanced = False
                for w, j in it:
                    if j == via:
                        continue
                    if disc[w] == -1:
                        disc[w] = low[w] = clock
                        clock += 1
                        stack.append((w, j, iter(adj[w])))
                        advanced = True
                        break
                    low[v] = min(low[v], disc[w])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        found.add(via)
        return frozenset(found)


@dataclass(frozen=True)
class LogicalTopology:
    """Undirected logical multigraph; parallel links are distinct by index."""

    nodes: tuple[Node, ...]
    links: tuple[tuple[Node, Node], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(tuple(link) for link in self.links))
        if not self.nodes:
            raise ModelError("empty-logical", "logical topology has no nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ModelError("duplicate-node", "logical node declared twice")
        known = set(self.nodes)
        for i, (s, t) in enumerate(self.links):
            for end in (s, t):
                if end not in known:
                    raise ModelError("unknown-node", f"logical link {i} uses unknown node {end!r}", str(end))
            if s == t:
                raise ModelError("self-loop", f"logical link {i} is a self-loop at {s!r}", str(s))
        if self.connectivity.count(self.connectivity.full) != 1:
            raise ModelError("disconnected-logical", "logical topology is not connected")

    @cached_property
    def connectivity(self) -> _Connectivity:
        return _Connectivity(self.nodes, self.links)

    @cached_property
    def position(self) -> dict[Node, int]:
        return {node: i for i, node in enumerate(self.nodes)}

    def with_link(self, s: Node, t: Node) -> LogicalTopology:
        return LogicalTopology(self.nodes, self.links + ((s, t),))


@dataclass(frozen=True)
class PhysicalPath:
    """Simple path in a physical topology; ``links`` holds link indices in order."""

    nodes: tuple[Node, ...]
    links: tuple[int, ...]

    @classmethod
    def from_nodes(cls, physical: PhysicalTopology, nodes: Iterable[Node]) -> PhysicalPath:
        nodes = tuple(nodes)
        if len(nodes) < 2:
            raise ModelError("short-path", "a path needs at least two nodes")
        known = set(physical.nodes)
        for node in nodes:
            if node not in known:
                raise ModelError("unknown-node", f"path visits unknown node {node!r}", str(node))
        if len(set(nodes)) != len(nodes):
            raise ModelError("non-simple-path", f"path {list(nodes)} revisits a node")
        links = tuple(physical.link_index(u, v) for u, v in zip(nodes, nodes[1:]))
        return cls(nodes, links)

    @cached_property
    def mask(self) -> int:
        bits = 0
        for i in self.links:
            bits |= 1 << i
        return bits

    @property
    def hops(self) -> int:
        return len(self.links)

    def __len__(self) -> int:
        return len(self.links)


@dataclass(frozen=True)
class NetworkState:
    """Set of failed physical links, stored as a bit-set of width ``m``."""

    bits: int
    m: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.m:
            raise ModelError("state-range", f"state {self.bits:#x} exceeds {self.m} physical links")

    @classmethod
    def of(cls, links: Iterable[int], m: int) -> NetworkState:
        bits = 0
        for i in links:
            if not 0 <= i < m:
                raise ModelError("state-range", f"physical link index {i} outside 0..{m - 1}")
            bits |= 1 << i
        return cls(bits, m)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    @property
    def links(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.m) if self.bits >> i & 1)

    def __contains__(self, link: int) -> bool:
        return bool(self.bits >> link & 1)


@dataclass(frozen=True)
class LightpathRouting:
    """Assignment of one physical path to each logical link.

    ``incidence[i]`` is the set of logical links whose route uses physical
    link ``i``; it is rebuilt from ``routes`` on construction.
    """

    physical: PhysicalTopology
    logical: LogicalTopology
    routes: tuple[PhysicalPath, ...]
    incidence: tuple[frozenset[int], ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "routes", tuple(self.routes))
        known = set(self.physical.nodes)
        for node in self.logical.nodes:
            if node not in known:
                raise ModelError("unknown-node", f"logical node {node!r} is not a physical node", str(node))
        if len(self.routes) != len(self.logical.links):
            raise ModelError(
                "missing-route",
                f"{len(self.logical.links)} logical links but {len(self.routes)} routes",
            )
        for j, ((s, t), path) in enumerate(zip(self.logical.links, self.routes)):
            ends = (path.nodes[0], path.nodes[-1])
            if ends not in ((s, t), (t, s)):
                raise ModelError(
                    "route-endpoints",
                    f"route {j} runs {ends[0]!r}..{ends[1]!r}, expected {s!r}..{t!r}",
                )
            if PhysicalPath.from_nodes(self.physical, path.nodes) != path:
                raise ModelError("route-links", f"route {j} link indices disagree with its nodes")
        object.__setattr__(self, "incidence", self.rebuild_incidence())

    @classmethod
    def from_node_paths(
        cls,
        physical: PhysicalTopology,
        logical: LogicalTopology,
        paths: Sequence[Sequence[Node]],
    ) -> LightpathRouting:
        return cls(physical, logical, tuple(PhysicalPath.from_nodes(physical, p) for p in paths))

    def rebuild_incidence(self) -> tuple[frozenset[int], ...]:
        users: list[set[int]] = [set() for _ in range(self.physical.m)]
        for j, path in enumerate(self.routes):
            for i in path.links:
                users[i].add(j)
        return tuple(frozenset(u) for u in users)

    @property
    def m(self) -> int:
        return self.physical.m

    @cached_property
    def route_masks(self) -> tuple[int, ...]:
        return tuple(path.mask for path in self.routes)

    @cached_property
    def kill_masks(self) -> tuple[int, ...]:
        """Per physical link, bit-set of the logical links it carries."""
        return tuple(sum(1 << j for j in users) for users in self.incidence)

    def alive_mask(self, state_bits: int) -> int:
        alive = 0
        for j, rm in enumerate(self.route_masks):
            if not rm & state_bits:
                alive |= 1 << j
        return alive

    def with_route(self, link: int, path: PhysicalPath) -> LightpathRouting:
        routes = list(self.routes)
        routes[link] = path
        return LightpathRouting(self.physical, self.logical, tuple(routes))

    def with_added_link(self, s: Node, t: Node, path: PhysicalPath) -> LightpathRouting:
        return LightpathRouting(self.physical, self.logical.with_link(s, t), self.routes + (path,))


@dataclass(frozen=True)
class LayeredNetwork:
    """Physical and logical topologies with an optional lightpath routing."""

    physical: PhysicalTopology
    logical: LogicalTopology
    routing: LightpathRouting | None = None

    def require_routing(self) -> LightpathRouting:
        if self.routing is None:
            raise ModelError("routing-required", "routing required: scenario has no route lines")
        return self.routing


@dataclass(frozen=True)
class ResidualGraph:
    """Logical links surviving a failure state, with canonical component labels.

    ``labels`` maps each logical node to the first-declared node of its component.
    """

    surviving: tuple[int, ...]
    labels: dict[Node, Node]
    component_count: int


def _state_bits(routing: LightpathRouting, state: NetworkState | int) -> int:
    if isinstance(state, NetworkState):
        if state.m != routing.m:
            raise ModelError("state-range", f"state width {state.m} != {routing.m} physical links")
        return state.bits
    if state < 0 or state >> routing.m:
        raise ModelError("state-range", f"state {state:#x} exceeds {routing.m} physical links")
    return state


def residual_graph(routing: LightpathRouting, state: NetworkState | int) -> ResidualGraph:
    alive = routing.alive_mask(_state_bits(routing, state))
    count, labels = routing.logical.connectivity.components(alive)
    nodes = routing.logical.nodes
    surviving = tuple(j for j in range(len(routing.routes)) if alive >> j & 1)
    return ResidualGraph(surviving, {nodes[i]: nodes[lab] for i, lab in enumerate(labels)}, count)


def component_count(routing: LightpathRouting, state: NetworkState | int) -> int:
    alive = routing.alive_mask(_state_bits(routing, state))
    return routing.logical.connectivity.count(alive)


def is_cross_layer_cut(routing: LightpathRouting, state: NetworkState | int) -> bool:
    return component_count(routing, state) > 1


def is_two_way_cut(routing: LightpathRouting, state: NetworkState | int) -> bool:
    return component_count(routing, state) == 2


def critical_links(routing: LightpathRouting, state: NetworkState | int) -> frozenset[int]:
    """Logical links that are bridges of the residual graph of a non-cut."""
    bits = _state_bits(routing, state)
    alive = routing.alive_mask(bits)
    conn = routing.logical.connectivity
    if conn.count(alive) > 1:
        raise ModelError("state-is-cut", "critical links are defined for non-cuts only")
    return conn.bridges(alive)


def separates(routing: LightpathRouting, state: NetworkState | int, s: Node, t: Node) -> bool:
    """True iff logical nodes ``s`` and ``t`` lie in different residual components."""
    if s == t:
        raise ModelError("same-endpoint", "separates() needs two distinct logical nodes")
    pos = routing.logical.position
    try:
        a, b = pos[s], pos[t]
    except KeyError as exc:
        raise ModelError("unknown-node", f"{exc.args[0]!r} is not a logical node", str(exc.args[0])) from None
    labels = routing.logical.connectivity.components(routing.alive_mask(_state_bits(routing, state)))[1]
    return labels[a] != labels[b]
