"""Constant-in-degree edge rewiring: apply, screen, classify, verify, enumerate.

A rewiring (a, b, d) adds edge (a, b) and shrinks the existing edge (d, b) by
the same amount, so node b's in-weight total is untouched. Whether the two
influencers' shares move at all is decided from topology alone: the verdict
depends on which of a, d can be reached from the sources without crossing a
chosen index node, never on the transferred weight.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .dynamics import influence_centrality
from .errors import (
    EdgeAlreadyExists,
    EdgeMissing,
    InvalidModification,
    NotPermissible,
    PreconditionViolated,
    WeightOutOfRange,
)
from .graph import Network, eligible_index_nodes, is_strongly_connected
from .levels import assign_levels, has_direct_path
from .sfg import SignalFlowGraph, build_sfg, src
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class EdgeModification:
    a: int
    b: int
    d: int
    w_new: float

    def check_distinct(self) -> None:
        if len({self.a, self.b, self.d}) != 3:
            raise InvalidModification(
                f"nodes of ({self.a}, {self.b}, {self.d}) must be distinct"
            )


class Verdict(enum.Enum):
    REDUNDANT = "redundant"
    SHIFT = "shift"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    decreasing_agent: int | None
    witness_index_node: int | None
    rationale: str

    def __post_init__(self):
        if self.verdict is not Verdict.INDETERMINATE:
            assert self.witness_index_node is not None


@dataclass(frozen=True)
class VerificationReport:
    mod: EdgeModification
    grid: tuple[float, ...]
    max_abs_delta: float
    delta_by_agent: dict  # agent -> tuple of deltas over the grid
    verdict: Verdict | None
    consistent: bool | None  # None when no classification was available


@dataclass(frozen=True)
class Candidate:
    mod: EdgeModification
    permissible: bool
    classification: Classification | None
    delta_target: float
    delta_by_agent: dict


def _structural_check(net: Network, mod: EdgeModification) -> float:
    mod.check_distinct()
    for node in (mod.a, mod.b, mod.d):
        if not 0 <= node < net.n:
            raise InvalidModification(f"node {node} out of range for n={net.n}")
    w_bd = float(net.weights[mod.b, mod.d])
    if w_bd <= 0.0:
        raise EdgeMissing(f"edge ({mod.d}, {mod.b}) not present; nothing to shrink")
    if net.weights[mod.b, mod.a] > 0.0:
        raise EdgeAlreadyExists(f"edge ({mod.a}, {mod.b}) already present")
    return w_bd


def apply_modification(net: Network, mod: EdgeModification) -> Network:
    """New network with w[b,a] = w_new and w[b,d] shrunk by the same amount."""
    w_bd = _structural_check(net, mod)
    if not 0.0 < mod.w_new < w_bd:
        raise WeightOutOfRange(
            f"transfer weight must lie in (0, {w_bd}), got {mod.w_new}"
        )
    w = net.weights.copy()
    w[mod.b, mod.a] = mod.w_new
    w[mod.b, mod.d] = w_bd - mod.w_new
    return net.with_weights(w)


def is_permissible(net: Network, mod: EdgeModification) -> set[int]:
    """Index nodes of the rewired network; empty set means not permissible.

    Depends only on which edges exist, not on the transferred weight, because
    any admissible transfer keeps both (a, b) and (d, b) present.
    """
    w_bd = _structural_check(net, mod)
    probe = EdgeModification(mod.a, mod.b, mod.d, w_bd / 2.0)
    return eligible_index_nodes(apply_modification(net, probe))


def _direct_path_flags(sfg: SignalFlowGraph, node: int, m: int) -> tuple[bool, bool]:
    a_lo, a_hi = sfg.stubborn_agents
    return (
        has_direct_path(sfg, src(a_lo), node, m),
        has_direct_path(sfg, src(a_hi), node, m),
    )


def classify(
    net: Network,
    mod: EdgeModification,
    reading: str = "proof",
    tol: Tolerances = DEFAULT,
) -> Classification:
    """Topological verdict for a permissible rewiring.

    Candidate index nodes are those valid for both the original and the
    rewired network, tried in ascending order; direct paths are always read
    off the original graph. Rules per candidate m:

    - neither a nor d reachable from either source off-m: no share moves;
    - a unreachable and d reachable from exactly one source: that source's
      agent loses share (and the other gains);
    - the mirror case (d unreachable, a reachable from exactly one source):
      the other agent loses.

    ``reading="literal"`` relaxes the single-source condition on d to "the
    first-labeled source reaches d", which is not covered by the acceptance
    checks; the default sticks to the sound rule.
    """
    if reading not in ("proof", "literal"):
        raise ValueError(f"unknown reading {reading!r}")
    agents = net.stubborn_agents
    if len(agents) != 2:
        raise PreconditionViolated(f"need exactly two stubborn agents, got {len(agents)}")
    if not is_strongly_connected(net):
        raise PreconditionViolated("network must be strongly connected")
    original_eligible = eligible_index_nodes(net)
    if not original_eligible:
        raise PreconditionViolated("no node lies on every cycle of the original network")
    modified_eligible = is_permissible(net, mod)
    if not modified_eligible:
        raise NotPermissible(
            f"rewiring ({mod.a}, {mod.b}, {mod.d}) leaves no node on every cycle"
        )
    sfg = build_sfg(net, tol)
    for m in sorted(original_eligible & modified_eligible):
        a_flags = _direct_path_flags(sfg, mod.a, m)
        d_flags = _direct_path_flags(sfg, mod.d, m)
        facts = (
            f"m={m}: source paths avoiding m: a={mod.a} from "
            f"{_fmt(agents, a_flags)}, d={mod.d} from {_fmt(agents, d_flags)}"
        )
        if not any(a_flags) and not any(d_flags):
            return Classification(Verdict.REDUNDANT, None, m, facts)
        if not any(a_flags):
            loser = _single_source(agents, d_flags)
            if loser is not None:
                return Classification(Verdict.SHIFT, loser, m, facts)
            if reading == "literal" and any(d_flags):
                first = assign_levels(sfg, m).source_order[0]
                if d_flags[agents.index(first)]:
                    return Classification(Verdict.SHIFT, first, m, facts + " (literal)")
        if not any(d_flags):
            gainer = _single_source(agents, a_flags)
            if gainer is not None:
                other = agents[1 - agents.index(gainer)]
                return Classification(Verdict.SHIFT, other, m, facts)
            if reading == "literal" and any(a_flags):
                first = assign_levels(sfg, m).source_order[0]
                if a_flags[agents.index(first)]:
                    other = agents[1 - agents.index(first)]
                    return Classification(Verdict.SHIFT, other, m, facts + " (literal)")
    return Classification(
        Verdict.INDETERMINATE, None, None,
        "no candidate index node satisfies a sufficient condition",
    )


def _fmt(agents: tuple[int, ...], flags: tuple[bool, bool]) -> str:
    named = [str(a) for a, f in zip(agents, flags) if f]
    return "{" + ", ".join(named) + "}" if named else "no source"


def _single_source(agents: tuple[int, ...], flags: tuple[bool, bool]) -> int | None:
    if flags[0] != flags[1]:
        return agents[0] if flags[0] else agents[1]
    return None


def _deltas_on_grid(
    net: Network, mod: EdgeModification, grid_size: int, tol: Tolerances
) -> tuple[tuple[float, ...], dict]:
    w_bd = _structural_check(net, mod)
    base = influence_centrality(net, tol)
    agents = net.stubborn_agents
    grid = tuple(k * w_bd / (grid_size + 1) for k in range(1, grid_size + 1))
    deltas = {a: [] for a in agents}
    for w in grid:
        c = influence_centrality(apply_modification(net, EdgeModification(mod.a, mod.b, mod.d, w)), tol)
        for a in agents:
            deltas[a].append(float(c[a] - base[a]))
    return grid, {a: tuple(v) for a, v in deltas.items()}


def verify_empirically(
    net: Network,
    mod: EdgeModification,
    grid_size: int = 10,
    tol: Tolerances = DEFAULT,
) -> VerificationReport:
    """Sweep the transfer weight and compare observed share changes with the
    topological verdict: a no-change verdict must stay flat to tolerance, a
    shift verdict must move the loser down and the gainer up at every point."""
    classification = classify(net, mod, tol=tol)
    verdict = classification.verdict
    grid, deltas = _deltas_on_grid(net, mod, grid_size, tol)
    max_abs = max(abs(v) for vs in deltas.values() for v in vs)
    consistent: bool | None
    if verdict is Verdict.REDUNDANT:
        consistent = max_abs <= tol.check
    elif verdict is Verdict.SHIFT:
        loser = classification.decreasing_agent
        gainer = [a for a in net.stubborn_agents if a != loser][0]
        consistent = all(v < 0.0 for v in deltas[loser]) and all(
            v > 0.0 for v in deltas[gainer]
        )
    else:
        consistent = None
    return VerificationReport(mod, grid, max_abs, deltas, verdict, consistent)


def enumerate_modifications(
    net: Network,
    target: int | None = None,
    verdict: Verdict | None = None,
    tol: Tolerances = DEFAULT,
) -> list[Candidate]:
    """All structurally valid rewirings, ranked by how much they move the
    target agent's share at the midpoint transfer (descending; ties by
    ascending (a, b, d)). Non-permissible ones are kept, tagged, unclassified.
    """
    agents = net.stubborn_agents
    if len(agents) != 2:
        raise PreconditionViolated(f"need exactly two stubborn agents, got {len(agents)}")
    if not eligible_index_nodes(net):
        raise PreconditionViolated("no node lies on every cycle of the original network")
    if target is None:
        target = agents[0]
    if target not in agents:
        raise PreconditionViolated(f"target {target} is not a stubborn agent")

    out: list[Candidate] = []
    w = net.weights
    for b in range(net.n):
        for d in range(net.n):
            if d == b or w[b, d] <= 0.0:
                continue
            for a in range(net.n):
                if a in (b, d) or w[b, a] > 0.0:
                    continue
                mod = EdgeModification(a, b, d, float(w[b, d]) / 2.0)
                witnesses = is_permissible(net, mod)
                classification = None
                if witnesses:
                    classification = classify(net, mod, tol=tol)
                grid, deltas = _deltas_on_grid(net, mod, 1, tol)
                midpoint = {agent: vals[0] for agent, vals in deltas.items()}
                out.append(
                    Candidate(mod, bool(witnesses), classification,
                              midpoint[target], midpoint)
                )
    if verdict is not None:
        out = [c for c in out if c.classification and c.classification.verdict is verdict]
    out.sort(key=lambda c: (-c.delta_target, (c.mod.a, c.mod.b, c.mod.d)))
    return out
