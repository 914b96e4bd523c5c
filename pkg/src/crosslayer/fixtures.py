"""Reference layered networks used by the tests, the CLI, and the README.

All of them are small enough for exhaustive enumeration.
"""

from __future__ import annotations

from .model import LightpathRouting, LogicalTopology, PhysicalTopology


def _hexagon_nodes() -> tuple[str, ...]:
    return tuple(f"v{i}" for i in range(6))


def fixture_a() -> LightpathRouting:
    """TRI-DISJOINT: logical triangle on a physical 6-cycle, one 2-hop arc per lightpath.

    Reliability ``3(1-p)^4 - 2(1-p)^6``.
    """
    nodes = _hexagon_nodes()
    physical = PhysicalTopology(nodes, tuple((nodes[i], nodes[(i + 1) % 6]) for i in range(6)))
    logical = LogicalTopology(("v0", "v2", "v4"), (("v0", "v2"), ("v2", "v4"), ("v4", "v0")))
    return LightpathRouting.from_node_paths(
        physical, logical, [("v0", "v1", "v2"), ("v2", "v3", "v4"), ("v4", "v5", "v0")]
    )


def _triangle() -> tuple[PhysicalTopology, LogicalTopology]:
    nodes = ("v0", "v1", "v2")
    # link order e01, e12, e02
    physical = PhysicalTopology(nodes, (("v0", "v1"), ("v1", "v2"), ("v0", "v2")))
    logical = LogicalTopology(nodes, (("v0", "v1"), ("v1", "v2"), ("v2", "v0")))
    return physical, logical


def fixture_b() -> LightpathRouting:
    """TRI-SHARED: logical triangle on a physical triangle, every lightpath the long way.

    Every pair of lightpaths shares a fiber; reliability ``(1-p)^3``.
    """
    physical, logical = _triangle()
    return LightpathRouting.from_node_paths(
        physical, logical, [("v0", "v2", "v1"), ("v1", "v0", "v2"), ("v2", "v1", "v0")]
    )


def fixture_b_direct() -> LightpathRouting:
    """Fixture B with ``L01`` moved onto the direct fiber ``e01``."""
    physical, logical = _triangle()
    return LightpathRouting.from_node_paths(
        physical, logical, [("v0", "v1"), ("v1", "v0", "v2"), ("v2", "v1", "v0")]
    )


def triangle_all_direct() -> LightpathRouting:
    physical, logical = _triangle()
    return LightpathRouting.from_node_paths(
        physical, logical, [("v0", "v1"), ("v1", "v2"), ("v2", "v0")]
    )


def hex_chords() -> tuple[PhysicalTopology, LogicalTopology]:
    """Physical 6-cycle plus the chord triangle ``v0-v2-v4`` (9 links)."""
    nodes = _hexagon_nodes()
    ring = tuple((nodes[i], nodes[(i + 1) % 6]) for i in range(6))
    chords = (("v0", "v2"), ("v2", "v4"), ("v4", "v0"))
    physical = PhysicalTopology(nodes, ring + chords)
    logical = LogicalTopology(("v0", "v2", "v4"), (("v0", "v2"), ("v2", "v4"), ("v4", "v0")))
    return physical, logical


def crossing_pair() -> tuple[LightpathRouting, LightpathRouting]:
    """Fixtures A and B realized on one 9-link physical topology.

    The first routing uses the disjoint ring arcs (reliability
    ``3(1-p)^4 - 2(1-p)^6``), the second sends every lightpath the long way
    around the chord triangle (reliability ``(1-p)^3``). Neither dominates.
    """
    physical, logical = hex_chords()
    disjoint = LightpathRouting.from_node_paths(
        physical, logical, [("v0", "v1", "v2"), ("v2", "v3", "v4"), ("v4", "v5", "v0")]
    )
    shared = LightpathRouting.from_node_paths(
        physical, logical, [("v0", "v4", "v2"), ("v2", "v0", "v4"), ("v4", "v2", "v0")]
    )
    return disjoint, shared


def ring4_on_k4() -> LightpathRouting:
    """Logical 4-cycle routed hop-by-hop on a physical K4; MCLC 2.

    Adding the two diagonals over the physical diagonals lifts the MCLC to 3.
    """
    nodes = ("a", "b", "c", "d")
    physical = PhysicalTopology(
        nodes, (("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c"), ("b", "d"))
    )
    logical = LogicalTopology(nodes, (("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")))
    return LightpathRouting.from_node_paths(
        physical, logical, [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
    )


def single_lightpath(hops: int) -> LightpathRouting:
    """One logical link carried over a physical path of ``hops`` links."""
    nodes = tuple(f"u{i}" for i in range(hops + 1))
    physical = PhysicalTopology(nodes, tuple(zip(nodes, nodes[1:])))
    logical = LogicalTopology((nodes[0], nodes[-1]), ((nodes[0], nodes[-1]),))
    return LightpathRouting.from_node_paths(physical, logical, [nodes])


def staged_reroute() -> LightpathRouting:
    """Logical triangle on a 9-link physical graph whose iterative reroute trace
    is ``(d, N_d) = (1, 3), (1, 1), (2, 5), (2, 3)``."""
    nodes = tuple(f"v{i}" for i in range(5))
    physical = PhysicalTopology(
        nodes,
        (
            ("v0", "v2"), ("v0", "v3"), ("v0", "v1"), ("v1", "v4"), ("v1", "v2"),
            ("v1", "v3"), ("v2", "v4"), ("v2", "v3"), ("v3", "v4"),
        ),
    )
    logical = LogicalTopology(("v0", "v2", "v3"), (("v0", "v2"), ("v0", "v3"), ("v2", "v3")))
    return LightpathRouting.from_node_paths(
        physical,
        logical,
        [("v0", "v3", "v1", "v4", "v2"), ("v0", "v1", "v3"), ("v2", "v0", "v1", "v4", "v3")],
    )
