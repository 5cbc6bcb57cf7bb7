"""Layering of the interior DAG around an index node, and direct-path queries.

Removing the index node m from the opinion subgraph leaves a DAG (that is what
makes m an index node), so every other opinion node gets a level: 1 + the
deepest non-residual in-neighbor, with level 1 for nodes fed only by m or a
source. The source attached to the shallower stubborn node is labeled first;
levels strictly before it form region 1, levels from it up to the second
source's entry form region 2, and the rest form region 3.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAnIndexNode
from .sfg import SignalFlowGraph, _interior_topo_order, fold_self_loops


@dataclass(frozen=True)
class LevelAssignment:
    index_node: int
    level: dict  # opinion node -> level in {1..q}; excludes the index node
    q: int
    s1: int
    s2: int
    source_order: tuple[int, int]  # (agent behind S1, agent behind S2)
    region: dict  # opinion node -> 1 | 2 | 3; the index node maps to 1


def _interior_levels(sfg: SignalFlowGraph, m: int) -> dict:
    interior = [v for v in range(sfg.n) if v != m]
    preds: dict[int, list[int]] = {v: [] for v in interior}
    indeg = {v: 0 for v in interior}
    succs: dict[int, list[int]] = {v: [] for v in interior}
    for (u, v) in sfg.gains:
        if u in indeg and v in indeg and u != v:
            preds[v].append(u)
            succs[u].append(v)
            indeg[v] += 1
    queue = sorted(v for v in interior if indeg[v] == 0)
    level: dict[int, int] = {}
    while queue:
        x = queue.pop(0)
        level[x] = 1 + max((level[p] for p in preds[x]), default=0)
        for y in succs[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(level) != len(interior):
        raise NotAnIndexNode(
            f"node {m} misses a cycle: level assignment needs an acyclic interior"
        )
    # Longest-path layering satisfies both defining conditions; check anyway.
    for v in interior:
        h = level[v]
        assert all(level[p] < h for p in preds[v])
        assert h == 1 or any(level[p] == h - 1 for p in preds[v])
    return level


def assign_levels(sfg: SignalFlowGraph, m: int) -> LevelAssignment:
    if not 0 <= m < sfg.n:
        raise NotAnIndexNode(f"{m!r} is not an opinion node")
    level = _interior_levels(sfg, m)
    q = max(level.values(), default=0)

    # A stubborn node that coincides with m sits before every level; treat its
    # source as entering at level 0 (region 1 is then empty).
    def entry(agent: int) -> int:
        return 0 if agent == m else level[agent]

    a_lo, a_hi = sfg.stubborn_agents
    first, second = sorted((a_lo, a_hi), key=lambda a: (entry(a), a))
    s1, s2 = entry(first), entry(second)

    region: dict[int, int] = {m: 1}
    for v, h in level.items():
        if h < s1:
            region[v] = 1
        elif h < s2:
            region[v] = 2
        else:
            region[v] = 3
    return LevelAssignment(m, level, q, s1, s2, (first, second), region)


def classify_region(la: LevelAssignment, j: int) -> int:
    return la.region[j]


def has_direct_path(sfg: SignalFlowGraph, u, j: int, m: int) -> bool:
    """True iff the graph holds a path u -> j avoiding m. For a source the
    path starts with its single branch; j == m is false by convention."""
    if j == m:
        return False
    if isinstance(u, tuple) and u[0] == "src":
        start = u[1]
        if start == m:
            return False
        if start == j:
            return True
    else:
        start = u
    succs: dict[int, list[int]] = {}
    for (a, b) in sfg.gains:
        if isinstance(a, int) and isinstance(b, int) and a != b:
            succs.setdefault(a, []).append(b)
    seen = {start, m}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in succs.get(x, ()):
            if y == j:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def direct_path_gain_sum(sfg: SignalFlowGraph, m: int, j: int) -> float:
    """Gain sum over all m -> j paths that do not revisit m, one topological
    pass over the interior DAG.

    Path gains follow the reduction's bookkeeping: each traversal out of a
    node v (including m itself) contributes a factor 1/(1 - a_v) for v's
    original self-loop gain a_v, while the terminal node j contributes none.
    For a node with no path from either source this sum telescopes to
    (1 - a_j) / (1 - a_m); a source-fed node leaks anchor weight and falls
    strictly below that.
    """
    if j == m or not 0 <= j < sfg.n:
        raise NotAnIndexNode(f"target {j} must be an opinion node distinct from m={m}")
    folded = fold_self_loops(sfg)
    absorbed = folded.absorbed_self_loops
    order = _interior_topo_order(folded, m)

    def raw_gain(a, b) -> float:
        # Folding scaled branches into b by 1/(1 - a_b); undo to recover the
        # original branch gain.
        return folded.gains.get((a, b), 0.0) * (1.0 - absorbed.get(b, 0.0))

    def out_factor(v) -> float:
        return 1.0 / (1.0 - absorbed.get(v, 0.0))

    in_branches: dict[int, list[int]] = {x: [] for x in order}
    for (a, b) in folded.gains:
        if b in in_branches and isinstance(a, int) and a != m and a != b:
            in_branches[b].append(a)

    total: dict[int, float] = {}
    for x in order:
        acc = raw_gain(m, x) * out_factor(m)
        for a in in_branches[x]:
            acc += total[a] * raw_gain(a, x) * out_factor(a)
        total[x] = acc
    return total[j]
