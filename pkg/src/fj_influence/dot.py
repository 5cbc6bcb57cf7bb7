"""Graphviz DOT rendering for networks, flow graphs, and reduced graphs."""

from __future__ import annotations

from .graph import Network
from .sfg import SINK, ReducedSFG, SignalFlowGraph


def _fmt_gain(g: float) -> str:
    return f"{g:.6g}"


def _node_name(node, one_based: bool = True) -> str:
    if isinstance(node, (int,)) and not isinstance(node, bool):
        return str(node + 1 if one_based else node)
    if node == SINK:
        return "avg"
    if isinstance(node, tuple):
        if node[0] == "src":
            return f"src{node[1] + 1}"
        return f"{node[1] + 1}.{node[0]}"
    return str(node)


def network_to_dot(net: Network) -> str:
    lines = ["digraph network {", "  rankdir=LR;"]
    for i in range(net.n):
        label = net.labels[i] if net.labels else str(i + 1)
        shape = "doublecircle" if net.stubbornness[i] > 0 else "circle"
        lines.append(f'  n{i + 1} [label="{label}", shape={shape}];')
    for u, v, w in net.edges():
        lines.append(f'  n{u + 1} -> n{v + 1} [label="{_fmt_gain(w)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def sfg_to_dot(sfg: SignalFlowGraph, index_node: int | None = None) -> str:
    lines = ["digraph flowgraph {", "  rankdir=LR;"]
    seen = sorted({u for branch in sfg.gains for u in branch}, key=str)
    for node in seen:
        name = _node_name(node)
        if node == SINK:
            shape = "diamond"
        elif isinstance(node, tuple) and node[0] == "src":
            shape = "box"
        elif node == index_node:
            shape = "doublecircle"
        else:
            shape = "circle"
        lines.append(f'  "{name}" [shape={shape}];')
    for (u, v), g in sorted(sfg.gains.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        lines.append(
            f'  "{_node_name(u)}" -> "{_node_name(v)}" [label="{_fmt_gain(g)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def reduced_to_dot(r: ReducedSFG) -> str:
    lines = ["digraph reduced {", "  rankdir=LR;"]
    for agent in r.stubborn_agents:
        lines.append(f'  "src{agent + 1}" [shape=box];')
    lines.append(f'  "{r.index_node + 1}" [shape=doublecircle];')
    lines.append('  "avg" [shape=diamond];')
    for (u, v), g in sorted(r.gains.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        lines.append(
            f'  "{_node_name(u)}" -> "{_node_name(v)}" [label="{_fmt_gain(g)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
