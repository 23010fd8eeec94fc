"""Maps between randomized policies and stopping flows.

A policy ``pi`` induces the flow ``z_i = prod_{j<=i}(q_j + p_j pi_j)`` of
probability mass still in the game after observation i, and
``y_i = z_{i-1} p_i (1 - pi_i)`` of mass stopping at i. Conversely any
flow satisfying

    y_i <= p_i z_{i-1},   y_i + z_i = z_{i-1},   z_0 = 1,   y_i >= 0

comes from the policy ``pi_i = 1 - y_i / (p_i z_{i-1})``.
"""
from __future__ import annotations

import numpy as np

from .core import FlowSolution, Instance, Policy

FEAS_TOL = 1e-9


class InfeasibleFlowError(ValueError):
    pass


def policy_to_flow(inst: Instance, pol: Policy) -> FlowSolution:
    if pol.n != inst.n:
        raise ValueError(f"policy has length {pol.n}, instance has n = {inst.n}")
    p, q, pi = inst.p, inst.q, pol.pi
    z = np.empty(inst.n + 1)
    y = np.empty(inst.n)
    z[0] = 1.0
    for i in range(inst.n):
        y[i] = z[i] * p[i] * (1.0 - pi[i])
        z[i + 1] = z[i] * (q[i] + p[i] * pi[i])
    return FlowSolution(y, z)


def flow_residuals(inst: Instance, flow: FlowSolution) -> dict[str, float]:
    """Largest violation of each constraint family of the flow system."""
    if flow.n != inst.n:
        raise ValueError(f"flow has length {flow.n}, instance has n = {inst.n}")
    y, z = flow.y, flow.z
    return {
        "conservation": float(np.max(np.abs(y + z[1:] - z[:-1]))),
        "capacity": float(max(0.0, np.max(y - inst.p * z[:-1]))),
        "source": abs(float(z[0]) - 1.0),
        "nonnegativity": float(max(0.0, np.max(-y))),
    }


def flow_to_policy(inst: Instance, flow: FlowSolution, tol: float = FEAS_TOL) -> Policy:
    """Policy generating ``flow``.

    Where ``z_{i-1} = 0`` the state is unreachable and ``pi_i = 0`` by
    convention. Values are clipped into [0, 1] to absorb feasibility slack
    up to ``tol``; flows violating the system by more raise
    :class:`InfeasibleFlowError`.
    """
    worst = max(flow_residuals(inst, flow).values())
    if worst > tol:
        raise InfeasibleFlowError(f"flow violates the flow constraints by {worst:.3e}")
    denom = inst.p * flow.z[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        pi = np.where(denom > 0.0, 1.0 - flow.y / denom, 0.0)
    return Policy(np.clip(pi, 0.0, 1.0))
