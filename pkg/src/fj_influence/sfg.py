"""Signal-flow view of the steady state and its reduction to four residual nodes.

Nodes are the n opinion nodes (ints), one source per stubborn agent (tagged
``("src", agent)``), and one averaging sink (``"sink"``). A branch u -> v with
gain g means state(v) picks up g * state(u). Reduction keeps only the sources,
the sink, and one index node m, re-expressing everything between as summed
path gains; the source-to-sink gain of the reduced graph must reproduce the
matrix-route influence share of that source's agent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import (
    DivergentLoop,
    NotAnIndexNode,
    UnitSelfLoop,
    WrongStubbornCount,
)
from .graph import Network
from .tolerances import DEFAULT, Tolerances

NodeId = Union[int, tuple, str]

SINK = "sink"


def src(agent: int) -> tuple:
    return ("src", agent)


@dataclass(frozen=True)
class SignalFlowGraph:
    n: int
    stubborn_agents: tuple[int, int]
    gains: dict
    # Original self-loop gain per node, recorded when loops are folded away.
    absorbed_self_loops: dict = field(default_factory=dict)

    @property
    def sources(self) -> tuple:
        return tuple(src(a) for a in self.stubborn_agents)

    def opinion_nodes(self) -> list[int]:
        return list(range(self.n))

    def out_branches(self, u: NodeId) -> list[tuple[NodeId, float]]:
        return [(v, g) for (a, v), g in self.gains.items() if a == u]

    def in_branches(self, v: NodeId) -> list[tuple[NodeId, float]]:
        return [(u, g) for (u, b), g in self.gains.items() if b == v]

    def has_self_loops(self) -> bool:
        return any(u == v for (u, v) in self.gains)


@dataclass(frozen=True)
class ReducedSFG:
    """Residual-node graph: branches among the two sources, m, and the sink."""

    index_node: int
    stubborn_agents: tuple[int, int]
    gains: dict  # keys: (src_a, m), (src_a, sink), (m, m), (m, sink)

    def source_to_index(self, agent: int) -> float:
        return self.gains.get((src(agent), self.index_node), 0.0)

    def source_to_sink(self, agent: int) -> float:
        return self.gains.get((src(agent), SINK), 0.0)

    @property
    def loop_gain(self) -> float:
        return self.gains.get((self.index_node, self.index_node), 0.0)

    @property
    def index_to_sink(self) -> float:
        return self.gains.get((self.index_node, SINK), 0.0)


def build_sfg(net: Network, tol: Tolerances = DEFAULT) -> SignalFlowGraph:
    """Branch rules: u -> v carries (1 - beta_v) * w_vu, each source feeds its
    agent with gain beta, and every opinion node feeds the sink with gain 1/n,
    so incoming gains at every opinion node sum to 1."""
    agents = net.stubborn_agents
    if len(agents) != 2:
        raise WrongStubbornCount(f"need exactly two stubborn agents, got {len(agents)}")
    gains: dict = {}
    w = net.weights
    beta = net.stubbornness
    for v in range(net.n):
        coeff = 1.0 - beta[v]
        for u in np.flatnonzero(w[v] > 0.0):
            gains[(int(u), v)] = coeff * float(w[v, int(u)])
    for a in agents:
        gains[(src(a), a)] = float(beta[a])
    for v in range(net.n):
        gains[(v, SINK)] = 1.0 / net.n
    sfg = SignalFlowGraph(net.n, agents, gains)
    for v in range(net.n):
        total = sum(g for (u, b), g in gains.items() if b == v)
        if abs(total - 1.0) > tol.row_sum_internal:
            raise AssertionError(f"incoming gains at node {v} sum to {total}")
    return sfg


def fold_self_loops(sfg: SignalFlowGraph) -> SignalFlowGraph:
    """Remove each self-loop a at v by scaling every branch into v by 1/(1-a)."""
    loops = {u: g for (u, v), g in sfg.gains.items() if u == v}
    if not loops:
        return sfg
    for v, a in loops.items():
        if abs(a) >= 1.0:
            raise UnitSelfLoop(f"self-loop at {v} has gain {a}; cannot fold")
    gains = {}
    for (u, v), g in sfg.gains.items():
        if u == v:
            continue
        if v in loops:
            g = g / (1.0 - loops[v])
        gains[(u, v)] = g
    absorbed = dict(sfg.absorbed_self_loops)
    absorbed.update(loops)
    return SignalFlowGraph(sfg.n, sfg.stubborn_agents, gains, absorbed)


def split_node(sfg: SignalFlowGraph, r: int) -> SignalFlowGraph:
    """Split opinion node r: ("out", r) keeps its outgoing branches and
    ("in", r) its incoming ones, so no path may continue through r."""
    gains = {}
    for (u, v), g in sfg.gains.items():
        u2 = ("out", r) if u == r else u
        v2 = ("in", r) if v == r else v
        gains[(u2, v2)] = g
    return SignalFlowGraph(sfg.n, sfg.stubborn_agents, gains, dict(sfg.absorbed_self_loops))


def graph_cycle_free(sfg: SignalFlowGraph) -> bool:
    """True when the branch graph has no cycles apart from self-loops."""
    nodes = {u for branch in sfg.gains for u in branch}
    order = {node: i for i, node in enumerate(nodes)}
    adj: list[list[int]] = [[] for _ in nodes]
    indeg = [0] * len(nodes)
    for (u, v) in sfg.gains:
        if u == v:
            continue
        adj[order[u]].append(order[v])
        indeg[order[v]] += 1
    queue = [i for i in range(len(nodes)) if indeg[i] == 0]
    seen = 0
    while queue:
        x = queue.pop()
        seen += 1
        for y in adj[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return seen == len(nodes)


def residual_paths(
    sfg: SignalFlowGraph,
    frm: NodeId,
    to: NodeId,
    residual: set,
) -> tuple[list[tuple[NodeId, ...]], float]:
    """Every path frm -> to whose interior nodes are all non-residual, plus the
    sum of their gains. frm == to enumerates the closed returns through the
    interior (the reduced graph's self-loop). Exhaustive; meant for small
    graphs and test oracles, not the reduction itself."""
    if sfg.has_self_loops():
        sfg = fold_self_loops(sfg)
    out: dict[NodeId, list[tuple[NodeId, float]]] = {}
    for (u, v), g in sfg.gains.items():
        out.setdefault(u, []).append((v, g))
    paths: list[tuple[NodeId, ...]] = []
    total = 0.0

    def walk(node: NodeId, path: list[NodeId], gain: float, visited: set) -> None:
        nonlocal total
        for nxt, g in out.get(node, ()):
            if nxt == to:
                paths.append(tuple(path + [nxt]))
                total += gain * g
            if nxt in residual or nxt in visited or nxt == to:
                continue
            visited.add(nxt)
            walk(nxt, path + [nxt], gain * g, visited)
            visited.discard(nxt)

    walk(frm, [frm], 1.0, set())
    paths.sort(key=lambda p: (len(p), str(p)))
    return paths, total


def _interior_topo_order(sfg: SignalFlowGraph, m: int) -> list[int]:
    interior = [v for v in range(sfg.n) if v != m]
    indeg = {v: 0 for v in interior}
    succ: dict[int, list[int]] = {v: [] for v in interior}
    for (u, v) in sfg.gains:
        if u in indeg and v in indeg and u != v:
            succ[u].append(v)
            indeg[v] += 1
    queue = sorted(v for v in interior if indeg[v] == 0)
    order: list[int] = []
    while queue:
        x = queue.pop(0)
        order.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(order) != len(interior):
        raise NotAnIndexNode(
            f"node {m} misses a cycle: the remaining opinion nodes are not acyclic"
        )
    return order


def index_residue_reduce(sfg: SignalFlowGraph, m: int, tol: Tolerances = DEFAULT) -> ReducedSFG:
    """Collapse the graph onto {sources, m, sink} by summing residual-path gains.

    With m on every loop, the other opinion nodes form a DAG, so each gain sum
    comes from one pass in topological order instead of path enumeration.
    """
    if not isinstance(m, (int, np.integer)) or not 0 <= m < sfg.n:
        raise NotAnIndexNode(f"{m!r} is not an opinion node")
    m = int(m)
    folded = fold_self_loops(sfg)
    order = _interior_topo_order(folded, m)
    g = folded.gains

    # to_m[j]: gain sum over interior paths j -> m; to_sink[j]: same for the sink.
    to_m = {v: 0.0 for v in order}
    to_sink = {v: 0.0 for v in order}
    for j in reversed(order):
        acc_m = g.get((j, m), 0.0)
        acc_o = g.get((j, SINK), 0.0)
        for k, gain in folded.out_branches(j):
            if isinstance(k, int) and k != m and k != j:
                acc_m += gain * to_m[k]
                acc_o += gain * to_sink[k]
        to_m[j] = acc_m
        to_sink[j] = acc_o

    gains: dict = {}
    for a in folded.stubborn_agents:
        beta_branch = g[(src(a), a)]
        if a == m:
            gains[(src(a), m)] = beta_branch
            gains[(src(a), SINK)] = 0.0
        else:
            gains[(src(a), m)] = beta_branch * to_m[a]
            gains[(src(a), SINK)] = beta_branch * to_sink[a]
    loop = 0.0
    m_to_sink = g.get((m, SINK), 0.0)
    for k, gain in folded.out_branches(m):
        if isinstance(k, int) and k != m:
            loop += gain * to_m[k]
            m_to_sink += gain * to_sink[k]
    gains[(m, m)] = loop
    gains[(m, SINK)] = m_to_sink
    return ReducedSFG(m, folded.stubborn_agents, gains)


def reduced_gain(r: ReducedSFG, agent: int) -> float:
    """Source-to-sink gain: paths through m (geometric series over the
    self-loop) plus the direct source-to-sink term."""
    loop = r.loop_gain
    if abs(loop) >= 1.0:
        raise DivergentLoop(f"reduced self-loop gain {loop} has magnitude >= 1")
    return (r.source_to_index(agent) * r.index_to_sink) / (1.0 - loop) + r.source_to_sink(agent)
