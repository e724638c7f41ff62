"""Directed multigraph of unit-capacity edges with one source and two terminals.

Networks are immutable after construction; every mutating operation returns a
new value. Parallel edges are first-class: an edge of capacity c in external
formats becomes c unit-capacity edges with distinct ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import InputError, UnknownEdgeError, UnknownNodeError

NodeId = str
EdgeId = int


class Edge(NamedTuple):
    eid: EdgeId
    tail: NodeId
    head: NodeId


@dataclass(frozen=True)
class Demand:
    """Nonnegative integer message rates: h0 shared, h1 for T1 only, h2 for T2 only."""

    h0: int
    h1: int
    h2: int

    def __post_init__(self) -> None:
        for name in ("h0", "h1", "h2"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise InputError(f"{name} must be a nonnegative integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.h0 + self.h1 + self.h2


@dataclass(frozen=True)
class Network:
    """Finite directed multigraph; all edges have unit capacity (implicit)."""

    nodes: tuple[NodeId, ...]
    edges: tuple[Edge, ...]
    source: NodeId
    terminals: tuple[NodeId, NodeId]

    def __post_init__(self) -> None:
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise InputError("duplicate node labels")
        t1, t2 = self.terminals
        if self.source == t1 or self.source == t2:
            raise InputError("source must differ from both terminals")
        if t1 == t2:
            raise InputError("terminals must be distinct")
        for label in (self.source, t1, t2):
            if label not in node_set:
                raise UnknownNodeError(f"node {label!r} not in network")
        seen_ids: set[EdgeId] = set()
        for e in self.edges:
            if e.tail == e.head:
                raise InputError(f"self-loop at {e.tail!r}")
            if e.tail not in node_set or e.head not in node_set:
                raise UnknownNodeError(f"edge {e.eid} references unknown node")
            if e.eid in seen_ids:
                raise InputError(f"duplicate edge id {e.eid}")
            seen_ids.add(e.eid)

    @cached_property
    def _edge_index(self) -> dict[EdgeId, Edge]:
        return {e.eid: e for e in self.edges}

    @cached_property
    def _out(self) -> dict[NodeId, tuple[EdgeId, ...]]:
        out: dict[NodeId, list[EdgeId]] = {v: [] for v in self.nodes}
        for e in self.edges:
            out[e.tail].append(e.eid)
        return {v: tuple(ids) for v, ids in out.items()}

    @cached_property
    def _in(self) -> dict[NodeId, tuple[EdgeId, ...]]:
        inc: dict[NodeId, list[EdgeId]] = {v: [] for v in self.nodes}
        for e in self.edges:
            inc[e.head].append(e.eid)
        return {v: tuple(ids) for v, ids in inc.items()}

    def edge(self, eid: EdgeId) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise UnknownEdgeError(f"no edge with id {eid}") from None

    def has_node(self, v: NodeId) -> bool:
        return v in self._out

    def next_edge_id(self) -> EdgeId:
        return max((e.eid for e in self.edges), default=-1) + 1


def expand_capacities(
    weighted_edges: Iterable[tuple[NodeId, NodeId, int]], first_id: EdgeId = 0
) -> list[Edge]:
    """Split each weighted edge of capacity c into c parallel unit edges.

    Ids are assigned consecutively starting at first_id, in input order.
    """
    out: list[Edge] = []
    eid = first_id
    for tail, head, cap in weighted_edges:
        if not isinstance(cap, int) or cap <= 0:
            raise InputError(f"capacity must be a positive integer, got {cap!r} on {tail}->{head}")
        for _ in range(cap):
            out.append(Edge(eid, tail, head))
            eid += 1
    return out


def out_edges(net: Network, v: NodeId) -> list[EdgeId]:
    """Edge ids leaving v, in stable insertion order."""
    try:
        return list(net._out[v])
    except KeyError:
        raise UnknownNodeError(f"node {v!r} not in network") from None


def in_edges(net: Network, v: NodeId) -> list[EdgeId]:
    """Edge ids entering v, in stable insertion order."""
    try:
        return list(net._in[v])
    except KeyError:
        raise UnknownNodeError(f"node {v!r} not in network") from None


def remove_edges(net: Network, ids: Iterable[EdgeId]) -> Network:
    """New network without the given edges; node set and surviving ids unchanged."""
    drop = set(ids)
    unknown = drop - set(net._edge_index)
    if unknown:
        raise UnknownEdgeError(f"no edge with id {sorted(unknown)[0]}")
    return Network(
        nodes=net.nodes,
        edges=tuple(e for e in net.edges if e.eid not in drop),
        source=net.source,
        terminals=net.terminals,
    )


def add_virtual(
    net: Network, new_nodes: Iterable[NodeId], new_edges: Iterable[tuple[NodeId, NodeId]]
) -> tuple[Network, list[EdgeId]]:
    """Extend a network with extra nodes and unit edges; returns the new ids."""
    eid = net.next_edge_id()
    added: list[Edge] = []
    for tail, head in new_edges:
        added.append(Edge(eid, tail, head))
        eid += 1
    extended = Network(
        nodes=net.nodes + tuple(new_nodes),
        edges=net.edges + tuple(added),
        source=net.source,
        terminals=net.terminals,
    )
    return extended, [e.eid for e in added]


def structurally_equal(a: Network, b: Network) -> bool:
    """Same node labels and same tail/head multiset, ignoring edge ids."""
    if set(a.nodes) != set(b.nodes):
        return False
    if a.source != b.source or a.terminals != b.terminals:
        return False
    pairs_a = sorted((e.tail, e.head) for e in a.edges)
    pairs_b = sorted((e.tail, e.head) for e in b.edges)
    return pairs_a == pairs_b
