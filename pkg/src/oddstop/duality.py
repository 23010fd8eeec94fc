"""Optimality certificates for a (flow, values) pair.

The flow LP maximizes ``sum R_i y_i``; its dual minimizes ``w_0`` subject to
``w_{i-1} >= q_i w_i + p_i R_i`` (the stop row, dual to ``y_i``) and
``w_{i-1} >= w_i`` (the auxiliary ``a_i = w_{i-1} - w_i >= 0``, dual to the
capacity row). Complementary slackness pairs

* ``y_i`` with the stop-row slack ``w_{i-1} - q_i w_i - p_i R_i``;
* the capacity slack ``p_i z_{i-1} - y_i`` with ``a_i``.

Both products vanish at a jointly optimal pair.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .bridge import flow_residuals
from .core import FlowSolution, Instance, ValueVector

FEAS_TOL = 1e-9
CS_TOL = 1e-7


class InfeasiblePairError(ValueError):
    pass


def check_primal_feasible(inst: Instance, flow: FlowSolution) -> dict[str, float]:
    """Max residual per constraint family of the flow LP."""
    return flow_residuals(inst, flow)


def check_dual_feasible(inst: Instance, w: ValueVector) -> dict[str, float]:
    """Max residual per constraint family of the value LP."""
    if w.n != inst.n:
        raise ValueError(f"value vector has n = {w.n}, instance has n = {inst.n}")
    wv = w.w
    stop = inst.q * wv[1:] + inst.p * inst.R - wv[:-1]
    mono = wv[1:] - wv[:-1]
    return {
        "stop": float(max(0.0, np.max(stop))),
        "monotone": float(max(0.0, np.max(mono))),
        "terminal": abs(float(wv[-1])),
    }


def _require_feasible(inst, flow, w, tol):
    primal = max(check_primal_feasible(inst, flow).values())
    dual = max(check_dual_feasible(inst, w).values())
    if primal > tol or dual > tol:
        raise InfeasiblePairError(
            f"pair not feasible within {tol:g} (primal {primal:.3e}, dual {dual:.3e})"
        )


def duality_gap(inst: Instance, flow: FlowSolution, w: ValueVector, tol: float = FEAS_TOL) -> float:
    """``w_0 - sum R_i y_i`` for a feasible pair; nonnegative up to ``tol``."""
    _require_feasible(inst, flow, w, tol)
    return float(w.w[0]) - flow.objective(inst)


@dataclass
class SlackViolation:
    family: str  # "stop" or "capacity"
    index: int  # 1-based
    magnitude: float


@dataclass
class SlacknessReport:
    scale: float
    tol: float
    stop_products: list[float]
    capacity_products: list[float]
    violations: list[SlackViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def complementary_slackness(
    inst: Instance, flow: FlowSolution, w: ValueVector, tol: float = CS_TOL, feas_tol: float = FEAS_TOL
) -> SlacknessReport:
    """Per-index complementary-slackness products and the pairs exceeding
    ``tol * max(1, w_0)``."""
    _require_feasible(inst, flow, w, feas_tol)
    wv, y, z = w.w, flow.y, flow.z
    stop_slack = wv[:-1] - inst.q * wv[1:] - inst.p * inst.R
    cap_slack = inst.p * z[:-1] - y
    alpha = wv[:-1] - wv[1:]
    stop_prod = np.abs(y * stop_slack)
    cap_prod = np.abs(cap_slack * alpha)
    scale = max(1.0, abs(float(wv[0])))
    limit = tol * scale
    violations = [
        SlackViolation(fam, i + 1, float(v))
        for fam, prods in (("stop", stop_prod), ("capacity", cap_prod))
        for i, v in enumerate(prods)
        if v > limit
    ]
    return SlacknessReport(scale, tol, stop_prod.tolist(), cap_prod.tolist(), violations)
