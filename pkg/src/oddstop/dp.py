"""Backward induction and the odds-theorem threshold rule."""
from __future__ import annotations

import numpy as np

from . import _backend
from .core import Instance, InstanceError, StopRegion, ValueVector

EQ_TOL = 1e-9


def solve_dp(inst: Instance) -> ValueVector:
    """Values ``w_{i-1} = max(q_i w_i + p_i R_i, w_i)`` with ``w_n = 0``."""
    p = np.ascontiguousarray(inst.p)
    R = np.ascontiguousarray(inst.R)
    return ValueVector(_backend.kernels.backward_induction(p, R))


def policy_from_values(inst: Instance, w: ValueVector) -> StopRegion:
    """Deterministic optimal policy read off a solution of the DP equation.

    Stop at a success on index i iff ``q_i w_i + p_i R_i >= w_i``; an exact
    tie therefore stops. ``w`` is checked against the recurrence first and
    rejected if any entry is off by more than ``1e-9`` (relative to
    ``max(1, w_0)``), since values may come from an LP solve.
    """
    wv = w.w
    if wv.shape[0] != inst.n + 1:
        raise ValueError(f"value vector has {wv.shape[0]} entries, expected {inst.n + 1}")
    stop_val = inst.q * wv[1:] + inst.p * inst.R
    expect = np.maximum(stop_val, wv[1:])
    scale = max(1.0, abs(float(wv[0])))
    resid = max(abs(float(wv[-1])), float(np.max(np.abs(wv[:-1] - expect))))
    if resid > EQ_TOL * scale:
        raise ValueError(f"values do not solve the DP equation (residual {resid:.3e})")
    return StopRegion(stop_val >= wv[1:])


def odds_threshold(inst: Instance) -> tuple[int, float]:
    """Threshold index and win probability from the odds theorem.

    ``s*`` is the largest s with ``r_s + ... + r_n >= 1`` (1 if no such s);
    the rule skips everything before ``s*`` and takes the first success
    from ``s*`` on, winning with probability
    ``(q_s* ... q_n)(r_s* + ... + r_n)``. The comparison with 1 is an exact
    double comparison on the tail sum accumulated from n downward. Rewards
    are ignored: the result is only meaningful for last-success rewards.

    ``p_1 = 1`` is allowed (its odds are infinite, so the threshold never
    goes past index 1 unless the later tail already reaches 1).
    """
    p = inst.p
    n = inst.n
    bad = np.flatnonzero(p[1:] >= 1.0)
    if bad.size:
        i = int(bad[0]) + 2
        raise InstanceError("odds-undefined", f"odds r_{i} undefined: p_{i} = 1")
    tail = 0.0
    s = 1
    for i in range(n, 0, -1):
        if p[i - 1] >= 1.0:
            break
        tail += p[i - 1] / (1.0 - p[i - 1])
        if tail >= 1.0:
            s = i
            break
    if p[s - 1] >= 1.0:
        # certain success at s = 1: the rule takes X_1 and wins iff nothing follows
        return s, float(np.prod(1.0 - p[s:]))
    q = 1.0 - p[s - 1 :]
    r = p[s - 1 :] / q
    return s, float(np.prod(q) * np.sum(r))
