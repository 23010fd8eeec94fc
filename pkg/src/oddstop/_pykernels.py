"""Fallback kernels in plain Python/numpy.

Same signatures and floating-point operation order as ``_ckernels.pyx``.
"""
from __future__ import annotations

import numpy as np

_MASK_CHUNK = 1 << 14


def backward_induction(p: np.ndarray, R: np.ndarray) -> np.ndarray:
    n = p.shape[0]
    w = np.empty(n + 1)
    w[n] = 0.0
    wi = 0.0
    for i in range(n - 1, -1, -1):
        stop = (1.0 - p[i]) * wi + p[i] * R[i]
        if stop > wi:
            wi = stop
        w[i] = wi
    return w


def deterministic_values(p: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Expected reward of every deterministic policy.

    Entry ``mask`` holds the value of the policy stopping at index i (0-based)
    iff bit ``n-1-i`` of ``mask`` is set, so increasing masks run through the
    stop vectors in lexicographic order.
    """
    n = p.shape[0]
    total = 1 << n
    out = np.empty(total)
    q = 1.0 - p
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    for lo in range(0, total, _MASK_CHUNK):
        masks = np.arange(lo, min(total, lo + _MASK_CHUNK), dtype=np.int64)
        pi = 1.0 - ((masks[:, None] >> shifts) & 1).astype(float)
        z = np.ones(masks.shape[0])
        val = np.zeros(masks.shape[0])
        for i in range(n):
            val += R[i] * (z * p[i] * (1.0 - pi[:, i]))
            z = z * (q[i] + p[i] * pi[:, i])
        out[lo : lo + masks.shape[0]] = val
    return out


def simulate_chunk(p: np.ndarray, pi: np.ndarray, R: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Reward of each trial given outcome uniforms ``u`` and policy uniforms ``v``.

    Observation i of a trial is a success iff ``u < p_i``; at a success the
    policy continues iff ``v < pi_i``.
    """
    stops = (u < p) & (v >= pi)
    first = np.argmax(stops, axis=1)
    hit = stops[np.arange(stops.shape[0]), first]
    return np.where(hit, R[first], 0.0)
