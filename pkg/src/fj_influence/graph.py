"""Validated weighted digraph with connectivity, cycle, and index-node analysis.

Conventions: ``weights[i][j]`` is the weight of edge ``(j, i)`` (influence of
``j`` on ``i``), every row sums to 1, and node ids are 0-based in memory and
1-based in files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CycleBudgetExceeded,
    DataError,
    DuplicateEdge,
    NegativeWeight,
    RowNotStochastic,
    StubbornnessOutOfRange,
)
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class Network:
    """Immutable row-stochastic network with per-node stubbornness."""

    n: int
    weights: np.ndarray
    stubbornness: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.weights, dtype=np.float64))
        b = np.ascontiguousarray(np.asarray(self.stubbornness, dtype=np.float64))
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "stubbornness", b)

    @property
    def stubborn_agents(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.stubbornness > 0.0))

    def edges(self) -> list[tuple[int, int, float]]:
        """All edges as (source, target, weight), ascending by (source, target)."""
        out = []
        for j in range(self.n):
            for i in range(self.n):
                if self.weights[i, j] > 0.0:
                    out.append((j, i, float(self.weights[i, j])))
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    def out_neighbors(self, u: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.weights[:, u] > 0.0)]

    def in_neighbors(self, v: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.weights[v, :] > 0.0)]

    def with_weights(self, weights: np.ndarray) -> "Network":
        return Network(self.n, weights, self.stubbornness, self.labels)


@dataclass(frozen=True)
class CycleReport:
    """Simple directed cycles (self-loops listed separately).

    Each cycle is a node tuple rotated so its smallest node comes first; the
    closing edge back to the first node is implicit.
    """

    cycles: tuple[tuple[int, ...], ...]
    self_loops: tuple[int, ...] = field(default=())


def validate_network(
    n: int,
    edges: list[tuple[int, int, float]],
    stubbornness: list[float] | np.ndarray,
    labels: list[str] | None = None,
    tol: Tolerances = DEFAULT,
) -> Network:
    """Build a Network from an edge list, rejecting anything malformed."""
    if n <= 0:
        raise DataError(f"node count must be positive, got {n}")
    beta = np.asarray(stubbornness, dtype=np.float64)
    if beta.shape != (n,):
        raise DataError(f"stubbornness must have length {n}, got {beta.shape}")
    for i, b in enumerate(beta):
        if not (0.0 <= b < 1.0) or not math.isfinite(b):
            raise StubbornnessOutOfRange(f"stubbornness[{i}] = {b} outside [0, 1)")
    if not np.any(beta > 0.0):
        raise StubbornnessOutOfRange("at least one agent must be stubborn")

    w = np.zeros((n, n), dtype=np.float64)
    seen: set[tuple[int, int]] = set()
    for u, v, weight in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise DataError(f"edge ({u}, {v}) out of range for n={n}")
        if not math.isfinite(weight):
            raise DataError(f"edge ({u}, {v}) has non-finite weight {weight}")
        if weight < 0.0:
            raise NegativeWeight(f"edge ({u}, {v}) has weight {weight} < 0")
        if (u, v) in seen:
            raise DuplicateEdge(f"edge ({u}, {v}) listed twice")
        seen.add((u, v))
        w[v, u] = weight

    sums = w.sum(axis=1)
    for i, s in enumerate(sums):
        if abs(s - 1.0) > tol.row_sum_input:
            raise RowNotStochastic(f"row {i} sums to {s!r}, expected 1")
    if labels is not None and len(labels) != n:
        raise DataError(f"expected {n} labels, got {len(labels)}")
    return Network(n, w, beta, tuple(labels) if labels else None)


def normalize_rows(w: np.ndarray) -> np.ndarray:
    """Explicitly rescale each row to sum to 1 (for generators; never implicit)."""
    w = np.asarray(w, dtype=np.float64).copy()
    sums = w.sum(axis=1)
    if np.any(sums <= 0.0):
        raise DataError("cannot normalize a row with no in-edges")
    return w / sums[:, None]


# -- file I/O ---------------------------------------------------------------------

def network_to_dict(net: Network) -> dict:
    doc = {
        "n": net.n,
        "edges": [
            {"from": u + 1, "to": v + 1, "weight": w} for u, v, w in net.edges()
        ],
        "stubbornness": [float(b) for b in net.stubbornness],
    }
    if net.labels:
        doc["labels"] = list(net.labels)
    return doc


def save_network(net: Network, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(network_to_dict(net), fh, indent=2)
        fh.write("\n")


def network_from_dict(doc: dict, tol: Tolerances = DEFAULT) -> Network:
    try:
        n = int(doc["n"])
        edges = [
            (int(e["from"]) - 1, int(e["to"]) - 1, float(e["weight"]))
            for e in doc["edges"]
        ]
        beta = [float(b) for b in doc["stubbornness"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed network document: {exc}") from exc
    labels = doc.get("labels")
    return validate_network(n, edges, beta, labels, tol)


def _parse_edge_list(text: str, tol: Tolerances) -> Network:
    # Plain text importer: "u v w" per line (1-based), "# stubborn: i beta"
    # headers, other "#" lines ignored.
    edges: list[tuple[int, int, float]] = []
    stubborn: dict[int, float] = {}
    max_node = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.lower().startswith("stubborn:"):
                parts = body.split(":", 1)[1].split()
                if len(parts) != 2:
                    raise DataError(f"line {lineno}: expected '# stubborn: i beta'")
                stubborn[int(parts[0]) - 1] = float(parts[1])
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise DataError(f"line {lineno}: expected 'u v w', got {stripped!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise DataError(f"line {lineno}: {exc}") from exc
        edges.append((u - 1, v - 1, w))
        max_node = max(max_node, u, v)
    beta = [0.0] * max_node
    for i, b in stubborn.items():
        if not 0 <= i < max_node:
            raise DataError(f"stubborn node {i + 1} out of range")
        beta[i] = b
    return validate_network(max_node, edges, beta, None, tol)


def load_network(path: str, tol: Tolerances = DEFAULT) -> Network:
    """Load a network from JSON (canonical) or 'u v w' edge-list text."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        return network_from_dict(doc, tol)
    return _parse_edge_list(text, tol)


# -- connectivity -------------------------------------------------------------------

def _reachable(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _adjacency(net: Network, *, reverse: bool = False, skip: int | None = None,
               self_loops: bool = False) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(net.n)]
    w = net.weights
    for i in range(net.n):
        if i == skip:
            continue
        for j in np.flatnonzero(w[i] > 0.0):
            j = int(j)
            if j == skip or (j == i and not self_loops):
                continue
            if reverse:
                adj[i].append(j)
            else:
                adj[j].append(i)
    return adj


def is_strongly_connected(net: Network) -> bool:
    """True iff every ordered node pair is joined by a directed path."""
    if net.n == 1:
        return True
    fwd = _reachable(_adjacency(net), 0)
    bwd = _reachable(_adjacency(net, reverse=True), 0)
    return len(fwd) == net.n and len(bwd) == net.n


# -- cycle enumeration (Johnson's algorithm) ------------------------------------------

def _johnson_cycles(adj: list[list[int]], budget: int) -> list[tuple[int, ...]]:
    n = len(adj)
    cycles: list[tuple[int, ...]] = []
    for start in range(n):
        # Search the subgraph induced by nodes >= start; 'start' is then the
        # smallest node of every cycle found, giving the canonical rotation.
        sub = [[v for v in adj[u] if v >= start] for u in range(n)]
        blocked = {start}
        blocked_by: dict[int, set[int]] = {}
        path = [start]
        stack = [iter(sub[start])]
        closed = [False]
        while stack:
            advanced = False
            for v in stack[-1]:
                if v == start:
                    cycles.append(tuple(path))
                    if len(cycles) > budget:
                        raise CycleBudgetExceeded(
                            f"more than {budget} cycles; raise the budget to proceed"
                        )
                    closed[-1] = True
                elif v not in blocked:
                    path.append(v)
                    closed.append(False)
                    blocked.add(v)
                    stack.append(iter(sub[v]))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            u = path.pop()
            if closed.pop():
                if closed:
                    closed[-1] = True
                queue = [u]
                while queue:
                    x = queue.pop()
                    if x in blocked:
                        blocked.discard(x)
                        queue.extend(blocked_by.pop(x, ()))
            else:
                for v in sub[u]:
                    blocked_by.setdefault(v, set()).add(u)
    cycles.sort()
    return cycles


def enumerate_cycles(net: Network, budget: int | None = None,
                     tol: Tolerances = DEFAULT) -> CycleReport:
    """All simple directed cycles, self-loops reported separately."""
    budget = tol.cycle_budget if budget is None else budget
    adj = _adjacency(net, self_loops=False)
    for a in adj:
        a.sort()
    cycles = _johnson_cycles(adj, budget)
    self_loops = tuple(i for i in range(net.n) if net.weights[i, i] > 0.0)
    return CycleReport(tuple(cycles), self_loops)


# -- index nodes --------------------------------------------------------------------

def _is_acyclic(adj: list[list[int]], active: list[bool]) -> bool:
    n = len(adj)
    indeg = [0] * n
    for u in range(n):
        if not active[u]:
            continue
        for v in adj[u]:
            if active[v]:
                indeg[v] += 1
    queue = [u for u in range(n) if active[u] and indeg[u] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in adj[u]:
            if active[v]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
    return seen == sum(active)


def eligible_index_nodes(net: Network) -> set[int]:
    """Nodes that lie on every simple cycle (self-loops excluded).

    A node qualifies exactly when deleting it leaves the graph acyclic apart
    from self-loops. An empty set means no single node covers every cycle.
    """
    adj = _adjacency(net, self_loops=False)
    active = [True] * net.n
    if _is_acyclic(adj, active):
        # No cycles at all: vacuously every node is on every cycle, but such
        # graphs are not strongly connected, so report no index nodes.
        return set()
    out = set()
    for v in range(net.n):
        active[v] = False
        if _is_acyclic(adj, active):
            out.add(v)
        active[v] = True
    return out
