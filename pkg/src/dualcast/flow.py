"""Integral max-flow / min-cut on unit-capacity multigraphs, plus path decomposition.

Unit capacities keep everything combinatorial: a flow is a set of edges, and a
maximum flow decomposes into value-many edge-disjoint source-to-sink paths
(constructive Menger). All tie-breaking is by ascending edge id so identical
inputs always produce identical flows and paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, InvariantError, UnknownNodeError
from .netgraph import EdgeId, Network, NodeId


@dataclass(frozen=True)
class EdgePath:
    """A walk of distinct edges; consecutive edges share head -> tail."""

    edges: tuple[EdgeId, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __bool__(self) -> bool:
        return bool(self.edges)

    def nodes(self, net: Network) -> list[NodeId]:
        """Node sequence visited by the walk (length = len(self) + 1; empty path -> [])."""
        if not self.edges:
            return []
        seq = [net.edge(self.edges[0]).tail]
        for eid in self.edges:
            seq.append(net.edge(eid).head)
        return seq

    def visits(self, net: Network, v: NodeId) -> bool:
        return v in self.nodes(net)


def check_path(net: Network, path: EdgePath, src: NodeId, sink: NodeId) -> None:
    """Raise InvariantError unless path is a contiguous src -> sink walk of distinct edges."""
    if not path.edges:
        raise InvariantError("empty path")
    if len(set(path.edges)) != len(path.edges):
        raise InvariantError("repeated edge within path")
    if net.edge(path.edges[0]).tail != src:
        raise InvariantError(f"path does not start at {src!r}")
    if net.edge(path.edges[-1]).head != sink:
        raise InvariantError(f"path does not end at {sink!r}")
    for a, b in zip(path.edges, path.edges[1:]):
        if net.edge(a).head != net.edge(b).tail:
            raise InvariantError(f"edges {a} and {b} are not contiguous")


@dataclass(frozen=True)
class FlowResult:
    """An integral flow: value, a 0/1 assignment per edge, and the residual source side.

    source_side is the set of nodes reachable from the source in the final
    residual graph; edges crossing out of it form a minimum cut.
    """

    value: int
    edge_flow: dict[EdgeId, int]
    source_side: frozenset[NodeId]

    def saturated(self) -> set[EdgeId]:
        return {eid for eid, f in self.edge_flow.items() if f == 1}


def max_flow(net: Network, src: NodeId, sinks: Iterable[NodeId]) -> FlowResult:
    """Maximum integral flow from src to the sink set.

    Multiple sinks are handled through an internal super-sink joined to each
    sink by |E| parallel edges; the super-node never appears in the result.
    """
    sink_set = set(sinks)
    if not sink_set:
        raise InputError("sink set must be nonempty")
    if src in sink_set:
        raise InputError("source cannot be a sink")
    for v in [src, *sink_set]:
        if not net.has_node(v):
            raise UnknownNodeError(f"node {v!r} not in network")

    n_real = len(net.edges)
    tails: list[int] = []
    heads: list[int] = []
    eids: list[EdgeId] = []
    index = {v: i for i, v in enumerate(net.nodes)}
    for e in sorted(net.edges, key=lambda e: e.eid):
        tails.append(index[e.tail])
        heads.append(index[e.head])
        eids.append(e.eid)

    if len(sink_set) == 1:
        (t,) = sink_set
        t_idx = index[t]
    else:
        t_idx = len(net.nodes)
        for v in sorted(sink_set, key=lambda v: index[v]):
            for _ in range(max(n_real, 1)):
                tails.append(index[v])
                heads.append(t_idx)

    n_nodes = len(net.nodes) + (1 if len(sink_set) > 1 else 0)
    out_adj: list[list[int]] = [[] for _ in range(n_nodes)]
    in_adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for i in range(len(tails)):
        out_adj[tails[i]].append(i)
        in_adj[heads[i]].append(i)

    flow = bytearray(len(tails))
    s_idx = index[src]
    value = 0

    while True:
        parent: list[tuple[int, int] | None] = [None] * n_nodes
        seen = [False] * n_nodes
        seen[s_idx] = True
        queue = deque([s_idx])
        while queue:
            u = queue.popleft()
            if u == t_idx:
                break
            for i in out_adj[u]:
                v = heads[i]
                if not seen[v] and not flow[i]:
                    seen[v] = True
                    parent[v] = (i, 1)
                    queue.append(v)
            for i in in_adj[u]:
                v = tails[i]
                if not seen[v] and flow[i]:
                    seen[v] = True
                    parent[v] = (i, 0)
                    queue.append(v)
        if not seen[t_idx]:
            break
        v = t_idx
        while v != s_idx:
            i, f = parent[v]  # type: ignore[misc]
            flow[i] = f
            v = tails[i] if f else heads[i]
        value += 1

    # Residual reachability from the final (maximum) flow gives the min cut.
    reach = [False] * n_nodes
    reach[s_idx] = True
    queue = deque([s_idx])
    while queue:
        u = queue.popleft()
        for i in out_adj[u]:
            v = heads[i]
            if not reach[v] and not flow[i]:
                reach[v] = True
                queue.append(v)
        for i in in_adj[u]:
            v = tails[i]
            if not reach[v] and flow[i]:
                reach[v] = True
                queue.append(v)

    edge_flow = {eids[i]: int(flow[i]) for i in range(n_real)}
    source_side = frozenset(v for v, i in index.items() if reach[i])
    return FlowResult(value=value, edge_flow=edge_flow, source_side=source_side)


def min_cut_value(net: Network, src: NodeId, sinks: Iterable[NodeId]) -> int:
    """Capacity of a minimum cut separating src from the sinks (= max-flow value)."""
    return max_flow(net, src, sinks).value


def decompose_paths(
    net: Network, flow: FlowResult, src: NodeId, sinks: NodeId | Iterable[NodeId]
) -> list[EdgePath]:
    """Split an integral flow into flow.value edge-disjoint src -> sink paths.

    Flow on directed cycles carries no src -> sink data and is dropped. Paths
    are node-simple and returned in the deterministic order extraction finds
    them (smallest available edge id first at every step).
    """
    sink_set = {sinks} if isinstance(sinks, str) else set(sinks)
    carrying = flow.saturated()

    out_by_node: dict[NodeId, list[EdgeId]] = {}
    inflow: dict[NodeId, int] = {}
    outflow: dict[NodeId, int] = {}
    for eid in carrying:
        e = net.edge(eid)
        out_by_node.setdefault(e.tail, []).append(eid)
        outflow[e.tail] = outflow.get(e.tail, 0) + 1
        inflow[e.head] = inflow.get(e.head, 0) + 1
    for lst in out_by_node.values():
        lst.sort(reverse=True)  # consume by popping the smallest id from the end

    for v in net.nodes:
        balance = outflow.get(v, 0) - inflow.get(v, 0)
        if v == src:
            if balance != flow.value:
                raise InvariantError(f"source imbalance {balance} != value {flow.value}")
        elif v in sink_set:
            if balance > 0:
                raise InvariantError(f"sink {v!r} emits more flow than it receives")
        elif balance != 0:
            raise InvariantError(f"conservation violated at {v!r}")

    quota = {v: inflow.get(v, 0) - outflow.get(v, 0) for v in sink_set}
    if sum(quota.values()) != flow.value:
        raise InvariantError("sink absorption does not match flow value")

    paths: list[EdgePath] = []
    for _ in range(flow.value):
        order: list[NodeId] = [src]
        pos: dict[NodeId, int] = {src: 0}
        walk: list[EdgeId] = []
        u = src
        while True:
            avail = out_by_node.get(u)
            if not avail:
                raise InvariantError(f"walk stuck at {u!r} with no remaining flow edge")
            eid = avail.pop()
            v = net.edge(eid).head
            walk.append(eid)
            if v in pos:
                # Pinch off the cycle just closed and resume from its entry node.
                k = pos[v]
                walk = walk[:k]
                for dropped in order[k + 1 :]:
                    del pos[dropped]
                order = order[: k + 1]
                u = order[-1]
                continue
            if quota.get(v, 0) > 0:
                quota[v] -= 1
                paths.append(EdgePath(tuple(walk)))
                break
            pos[v] = len(order)
            order.append(v)
            u = v
    return paths
