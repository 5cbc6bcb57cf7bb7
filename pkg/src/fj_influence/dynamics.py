"""Opinion evolution, steady-state solve, and the matrix route to influence.

The steady state solves ``(I - (I - B) W) P = B`` with ``B = diag(beta)``;
column ``j`` of ``P`` carries how much agent ``j``'s anchor opinion shows up in
everyone's final opinion, and ``c = P^T 1 / n`` averages that over the group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    ConsistencyError,
    ConvergenceFailure,
    DimensionMismatch,
    NotStronglyConnected,
    SingularSystem,
)
from .graph import Network, is_strongly_connected
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class OpinionState:
    x: np.ndarray
    x0: np.ndarray
    k: int = 0


@dataclass(frozen=True)
class InfluenceResult:
    P: np.ndarray
    c: np.ndarray
    x_f: np.ndarray | None = None


def fj_step(net: Network, state: OpinionState) -> OpinionState:
    """One update: x' = (I - B) W x + B x0."""
    x = np.asarray(state.x, dtype=np.float64)
    x0 = np.asarray(state.x0, dtype=np.float64)
    if x.shape != (net.n,) or x0.shape != (net.n,):
        raise DimensionMismatch(
            f"opinion vectors must have length {net.n}, got {x.shape} and {x0.shape}"
        )
    beta = net.stubbornness
    x_next = (1.0 - beta) * (net.weights @ x) + beta * x0
    return OpinionState(x_next, x0, state.k + 1)


def iterate_to_steady(
    net: Network,
    x0: np.ndarray,
    x_init: np.ndarray | None = None,
    tol: Tolerances = DEFAULT,
) -> tuple[np.ndarray, int]:
    """Fixed-point iteration of the update map until the step residual dies out.

    Exceeding the iteration cap raises instead of returning a bad vector; under
    the solve preconditions the map is a contraction, so that signals bad input.
    """
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    if x0.shape != (net.n,):
        raise DimensionMismatch(f"x0 must have length {net.n}, got {x0.shape}")
    start = np.zeros(net.n) if x_init is None else np.ascontiguousarray(x_init, dtype=np.float64)
    beta = net.stubbornness
    x, steps, converged = _kernels.fj_iterate(
        net.weights, 1.0 - beta, beta * x0, start, tol.solve_residual, tol.max_iterations
    )
    if not converged:
        raise ConvergenceFailure(
            f"no convergence after {tol.max_iterations} steps; check the network"
        )
    return x, steps


def _solve(net: Network, rhs: np.ndarray) -> np.ndarray:
    beta = net.stubbornness
    a = np.eye(net.n) - (1.0 - beta)[:, None] * net.weights
    lu, piv, ok = _kernels.lu_factor(np.ascontiguousarray(a))
    if not ok:
        raise SingularSystem(
            "steady-state system is singular; is any agent stubborn?"
        )
    return _kernels.lu_solve(lu, piv, np.ascontiguousarray(rhs))


def influence_matrix(net: Network, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Row-stochastic matrix mapping anchor opinions to final opinions."""
    if not is_strongly_connected(net):
        raise NotStronglyConnected("influence analysis needs a strongly connected network")
    p = _solve(net, np.diag(net.stubbornness))
    rows = p.sum(axis=1)
    if np.max(np.abs(rows - 1.0)) > tol.check:
        raise ConsistencyError(f"influence matrix rows sum to {rows}, expected 1")
    return p


def influence_centrality(net: Network, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Per-agent share of the group's average final opinion; sums to 1."""
    p = influence_matrix(net, tol)
    return p.T @ np.full(net.n, 1.0 / net.n)


def steady_state(net: Network, x0: np.ndarray, tol: Tolerances = DEFAULT) -> np.ndarray:
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (net.n,):
        raise DimensionMismatch(f"x0 must have length {net.n}, got {x0.shape}")
    return influence_matrix(net, tol) @ x0


def average_final_opinion(net: Network, x0: np.ndarray, tol: Tolerances = DEFAULT) -> float:
    """Mean final opinion; cross-checked against the centrality-weighted anchors."""
    x0 = np.asarray(x0, dtype=np.float64)
    p = influence_matrix(net, tol)
    via_mean = float(np.mean(p @ x0))
    via_centrality = float(x0 @ (p.T @ np.full(net.n, 1.0 / net.n)))
    if abs(via_mean - via_centrality) > tol.check:
        raise ConsistencyError(
            f"average opinion mismatch: {via_mean} vs {via_centrality}"
        )
    return via_mean


def analyze(net: Network, x0: np.ndarray | None = None,
            tol: Tolerances = DEFAULT) -> InfluenceResult:
    p = influence_matrix(net, tol)
    c = p.T @ np.full(net.n, 1.0 / net.n)
    x_f = p @ np.asarray(x0, dtype=np.float64) if x0 is not None else None
    return InfluenceResult(p, c, x_f)
