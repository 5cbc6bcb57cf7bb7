"""Central tolerance record; every numeric check in the library reads from here."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

ENV_VAR = "FJ_INFLUENCE_TOL"


@dataclass(frozen=True)
class Tolerances:
    row_sum_input: float = 1e-9        # |row sum - 1| accepted on network input
    row_sum_internal: float = 1e-12    # internal stochasticity / gain-sum checks
    solve_residual: float = 1e-12      # fixed-point iteration stopping residual
    iterate_agreement: float = 1e-8    # direct solve vs iteration agreement
    check: float = 1e-9                # generic report checks (sum c, redundancy)
    strict_margin: float = 1e-12       # margin for strict sign/inequality checks
    max_iterations: int = 10**6
    cycle_budget: int = 10**6

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT = Tolerances()


def load_tolerances() -> Tolerances:
    """Default record, with field overrides taken from the environment.

    ``FJ_INFLUENCE_TOL`` may hold a JSON object mapping field names to values,
    e.g. ``{"check": 1e-8}``, or a bare float that overrides ``check``.
    """
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return DEFAULT
    try:
        parsed = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{ENV_VAR} is not valid JSON: {exc}") from exc
    if isinstance(parsed, (int, float)) and not isinstance(parsed, bool):
        parsed = {"check": float(parsed)}
    if not isinstance(parsed, dict):
        raise ValueError(f"{ENV_VAR} must be a JSON object or a number")
    known = {f.name for f in dataclasses.fields(Tolerances)}
    unknown = set(parsed) - known
    if unknown:
        raise ValueError(f"{ENV_VAR} has unknown fields: {sorted(unknown)}")
    for name, value in parsed.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            raise ValueError(f"{ENV_VAR}: field {name!r} must be a positive number")
    return dataclasses.replace(DEFAULT, **parsed)
