"""Command-line interface.

Node ids are 1-based on the command line and in files, matching the JSON
format; exit codes: 0 ok, 2 rewiring not permissible, 64 usage, 65 bad data,
66 missing input file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import dynamics, dot, generators, graph, levels, modifications, sfg
from .errors import (
    DataError,
    FJInfluenceError,
    NotPermissible,
    UsageError,
)
from .tolerances import Tolerances, load_tolerances

EX_OK = 0
EX_NOT_PERMISSIBLE = 2
EX_USAGE = 64
EX_DATA = 65
EX_NOINPUT = 66


@dataclasses.dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None
    tolerances: Tolerances
    fmt: str
    seed: int
    options: argparse.Namespace

    def __post_init__(self):
        assert self.seed >= 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fj-influence",
                     description="Influence analysis of competing stubborn agents")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("network", help="network file (.json or edge-list text)")
        return p

    with_input(sub.add_parser("centrality", help="influence share per agent"))

    p = with_input(sub.add_parser("simulate", help="stream opinion iterates as CSV"))
    p.add_argument("--x0", required=True,
                   help="initial opinions: comma-separated values or a CSV file")
    p.add_argument("--steps", type=int, default=None,
                   help="iterate exactly N steps (default: run to convergence)")

    with_input(sub.add_parser("index-nodes", help="nodes lying on every cycle"))

    p = with_input(sub.add_parser("levels", help="layer the graph around an index node"))
    p.add_argument("--index", type=int, required=True, help="index node (1-based)")

    p = with_input(sub.add_parser("sfg", help="export the flow graph as DOT"))
    p.add_argument("--dot", default="-", help="output path ('-' for stdout)")
    p.add_argument("--reduced", action="store_true", help="export the reduced graph")
    p.add_argument("--index", type=int, default=None, help="index node (1-based)")

    p = with_input(sub.add_parser("classify", help="topological verdict for a rewiring"))
    p.add_argument("--mod", required=True, help="rewiring as a,b,d (1-based)")
    p.add_argument("--weight", type=float, default=None, help="transferred weight")
    p.add_argument("--verify", action="store_true", help="sweep weights and compare")
    p.add_argument("--grid", type=int, default=10, help="verification grid size")

    p = with_input(sub.add_parser("enumerate", help="rank all candidate rewirings"))
    p.add_argument("--target", type=int, default=None, help="agent to move (1-based)")
    p.add_argument("--verdict", choices=["redundant", "shift"], default=None)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table")
    p.set_defaults(fmt="json")

    p = with_input(sub.add_parser("verify", help="empirical weight sweep for a rewiring"))
    p.add_argument("--mod", required=True, help="rewiring as a,b,d (1-based)")
    p.add_argument("--grid", type=int, default=10)

    p = sub.add_parser("gen", help="generate a random test instance")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chords", type=int, default=None)
    p.add_argument("--self-loops", type=float, default=0.0, dest="self_loops")
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
    return parser


def parse_cli(argv: list[str]) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        input_path=getattr(ns, "network", None),
        tolerances=load_tolerances(),
        fmt=getattr(ns, "fmt", "json"),
        seed=getattr(ns, "seed", 0),
        options=ns,
    )


def _parse_mod(text: str, w_default: float | None, net: graph.Network) -> modifications.EdgeModification:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--mod expects 'a,b,d', got {text!r}")
    try:
        a, b, d = (int(p) - 1 for p in parts)
    except ValueError as exc:
        raise UsageError(f"--mod expects integers: {exc}") from exc
    for node in (a, b, d):
        if not 0 <= node < net.n:
            raise DataError(f"node {node + 1} out of range for n={net.n}")
    w_bd = float(net.weights[b, d])
    w = w_default if w_default is not None else w_bd / 2.0
    return modifications.EdgeModification(a, b, d, w)


def _parse_x0(text: str, n: int) -> np.ndarray:
    import os

    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            text = fh.read().strip().replace("\n", ",")
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise DataError(f"--x0: {exc}") from exc
    if len(values) != n:
        raise DataError(f"--x0 needs {n} values, got {len(values)}")
    return np.asarray(values)


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _classification_doc(cls: modifications.Classification) -> dict:
    return {
        "verdict": cls.verdict.value,
        "decreasing_agent": None if cls.decreasing_agent is None else cls.decreasing_agent + 1,
        "witness_index_node": None if cls.witness_index_node is None else cls.witness_index_node + 1,
        "rationale": cls.rationale,
    }


def _verification_doc(rep: modifications.VerificationReport) -> dict:
    return {
        "grid": list(rep.grid),
        "max_abs_delta": rep.max_abs_delta,
        "delta_by_agent": {str(a + 1): list(v) for a, v in rep.delta_by_agent.items()},
        "verdict": rep.verdict.value if rep.verdict else None,
        "consistent": rep.consistent,
    }


def _run(cfg: RunConfig) -> int:
    tol = cfg.tolerances
    ns = cfg.options
    net = graph.load_network(cfg.input_path, tol) if cfg.input_path else None

    if cfg.command == "centrality":
        c = dynamics.influence_centrality(net, tol)
        _emit({
            "centrality": list(map(float, c)),
            "stubborn_agents": [a + 1 for a in net.stubborn_agents],
            "tolerances": tol.as_dict(),
        })
    elif cfg.command == "simulate":
        x0 = _parse_x0(ns.x0, net.n)
        state = dynamics.OpinionState(x0.copy(), x0)
        writer = sys.stdout
        writer.write("k," + ",".join(f"x{i + 1}" for i in range(net.n)) + "\n")
        writer.write("0," + ",".join(repr(float(v)) for v in state.x) + "\n")
        if ns.steps is not None:
            for _ in range(ns.steps):
                state = dynamics.fj_step(net, state)
                writer.write(f"{state.k}," + ",".join(repr(float(v)) for v in state.x) + "\n")
        else:
            while True:
                prev = state.x
                state = dynamics.fj_step(net, state)
                writer.write(f"{state.k}," + ",".join(repr(float(v)) for v in state.x) + "\n")
                if float(np.max(np.abs(state.x - prev))) < tol.solve_residual:
                    break
                if state.k >= tol.max_iterations:
                    raise FJInfluenceError("iteration cap reached without convergence")
    elif cfg.command == "index-nodes":
        nodes = sorted(graph.eligible_index_nodes(net))
        _emit({"eligible_index_nodes": [v + 1 for v in nodes],
               "tolerances": tol.as_dict()})
    elif cfg.command == "levels":
        flow = sfg.build_sfg(net, tol)
        la = levels.assign_levels(flow, ns.index - 1)
        _emit({
            "index_node": la.index_node + 1,
            "levels": {str(v + 1): h for v, h in sorted(la.level.items())},
            "q": la.q,
            "s1": la.s1,
            "s2": la.s2,
            "source_order": [a + 1 for a in la.source_order],
            "regions": {str(v + 1): r for v, r in sorted(la.region.items())},
            "tolerances": tol.as_dict(),
        })
    elif cfg.command == "sfg":
        flow = sfg.build_sfg(net, tol)
        if ns.reduced:
            if ns.index is None:
                raise UsageError("--reduced needs --index")
            text = dot.reduced_to_dot(sfg.index_residue_reduce(flow, ns.index - 1, tol))
        else:
            idx = None if ns.index is None else ns.index - 1
            text = dot.sfg_to_dot(flow, idx)
        if ns.dot == "-":
            sys.stdout.write(text)
        else:
            with open(ns.dot, "w", encoding="utf-8") as fh:
                fh.write(text)
    elif cfg.command == "classify":
        mod = _parse_mod(ns.mod, ns.weight, net)
        cls = modifications.classify(net, mod, tol=tol)
        doc = {
            "modification": [mod.a + 1, mod.b + 1, mod.d + 1],
            "weight": mod.w_new,
            "permissible": True,
            "classification": _classification_doc(cls),
            "tolerances": tol.as_dict(),
        }
        if ns.verify:
            doc["verification"] = _verification_doc(
                modifications.verify_empirically(net, mod, ns.grid, tol)
            )
        _emit(doc)
    elif cfg.command == "enumerate":
        target = None if ns.target is None else ns.target - 1
        verdict = None if ns.verdict is None else modifications.Verdict(ns.verdict)
        ranked = modifications.enumerate_modifications(net, target, verdict, tol)
        rows = [
            {
                "modification": [c.mod.a + 1, c.mod.b + 1, c.mod.d + 1],
                "permissible": c.permissible,
                "verdict": c.classification.verdict.value if c.classification else None,
                "delta_target": c.delta_target,
            }
            for c in ranked
        ]
        if cfg.fmt == "table":
            sys.stdout.write(f"{'modification':>14} {'permissible':>12} {'verdict':>14} {'delta':>12}\n")
            for row in rows:
                m = ",".join(str(x) for x in row["modification"])
                sys.stdout.write(
                    f"{m:>14} {str(row['permissible']):>12} "
                    f"{str(row['verdict']):>14} {row['delta_target']:>12.3e}\n"
                )
        else:
            _emit({"candidates": rows, "tolerances": tol.as_dict()})
    elif cfg.command == "verify":
        mod = _parse_mod(ns.mod, None, net)
        rep = modifications.verify_empirically(net, mod, ns.grid, tol)
        _emit({
            "modification": [mod.a + 1, mod.b + 1, mod.d + 1],
            "verification": _verification_doc(rep),
            "tolerances": tol.as_dict(),
        })
    elif cfg.command == "gen":
        rng = np.random.default_rng(ns.seed)
        net = generators.random_network(ns.nodes, rng, ns.chords, ns.self_loops)
        doc = graph.network_to_dict(net)
        if ns.output == "-":
            _emit(doc)
        else:
            graph.save_network(net, ns.output)
    else:  # pragma: no cover - argparse enforces the command set
        raise UsageError(f"unknown command {cfg.command!r}")
    return EX_OK


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_cli(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    try:
        return _run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except FileNotFoundError as exc:
        print(f"no such file: {exc.filename}", file=sys.stderr)
        return EX_NOINPUT
    except NotPermissible as exc:
        print(f"not permissible: {exc}", file=sys.stderr)
        return EX_NOT_PERMISSIBLE
    except (DataError, FJInfluenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
