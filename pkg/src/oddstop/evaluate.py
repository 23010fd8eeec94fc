"""Policy evaluation: closed form, record enumeration, brute force, simulation."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import _backend
from .core import Instance, Policy, StopRegion

MAX_ENUM_N = 24
MAX_BRUTE_N = 20
SIM_CHUNK = 1 << 16
GENERATOR = "numpy.random.PCG64 via SeedSequence.spawn"
TIE_TOL = 1e-12


def expected_reward(inst: Instance, pol: Policy) -> float:
    """Exact expected reward of ``pol``, O(n)."""
    if pol.n != inst.n:
        raise ValueError(f"policy has length {pol.n}, instance has n = {inst.n}")
    p, q, R, pi = inst.p, inst.q, inst.R, pol.pi
    z = 1.0
    total = 0.0
    for i in range(inst.n):
        total += R[i] * (z * p[i] * (1.0 - pi[i]))
        z = z * (q[i] + p[i] * pi[i])
    return total


def enumerate_records(inst: Instance, pol: Policy) -> list[tuple[tuple[int, ...], float]]:
    """Every game record with its probability under ``pol``.

    A record lists the observed outcomes up to the selected success; when no
    success is selected it is the full outcome sequence followed by a 1.
    """
    n = inst.n
    if pol.n != n:
        raise ValueError(f"policy has length {pol.n}, instance has n = {n}")
    if n > MAX_ENUM_N:
        raise ValueError(f"record enumeration limited to n <= {MAX_ENUM_N}")
    p, q, pi = inst.p, inst.q, pol.pi
    out = []
    for length in range(1, n + 2):
        for prefix in itertools.product((0, 1), repeat=length - 1):
            prob = 1.0
            for j, bit in enumerate(prefix):
                prob *= q[j] if bit == 0 else p[j] * pi[j]
            if length <= n:
                prob *= p[length - 1] * (1.0 - pi[length - 1])
            # length n + 1: all n positions are already in the prefix; the
            # appended 1 carries no extra factor
            out.append((prefix + (1,), prob))
    return out


def deterministic_values(inst: Instance, backend: str | None = None) -> np.ndarray:
    """Expected reward of all ``2**n`` stop vectors, in lexicographic order."""
    if inst.n > MAX_BRUTE_N:
        raise ValueError(f"brute force limited to n <= {MAX_BRUTE_N}")
    k = _backend.kernels if backend is None else _backend.get(backend)
    return k.deterministic_values(np.ascontiguousarray(inst.p), np.ascontiguousarray(inst.R))


def brute_force_optimal(inst: Instance, backend: str | None = None) -> tuple[float, StopRegion]:
    """Best deterministic policy by exhaustive search.

    Ties (within ``1e-12 * max(1, best)``) go to the lexicographically
    smallest stop vector, with False < True.
    """
    vals = deterministic_values(inst, backend)
    best = float(vals.max())
    mask = int(np.flatnonzero(vals >= best - TIE_TOL * max(1.0, best))[0])
    n = inst.n
    stop = [(mask >> (n - 1 - i)) & 1 == 1 for i in range(n)]
    return float(vals[mask]), StopRegion(stop)


@dataclass(frozen=True)
class SimResult:
    estimate: float
    stderr: float
    trials: int
    seed: int
    generator: str = GENERATOR
    workers: int = 1

    def to_dict(self) -> dict:
        return asdict(self)


def _worker_rewards(inst, pol, trials, seed_seq, kern):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    p = np.ascontiguousarray(inst.p)
    R = np.ascontiguousarray(inst.R)
    pi = np.ascontiguousarray(pol.pi)
    out = np.empty(trials)
    for lo in range(0, trials, SIM_CHUNK):
        c = min(SIM_CHUNK, trials - lo)
        u = rng.random((c, inst.n))
        v = rng.random((c, inst.n))
        out[lo : lo + c] = kern.simulate_chunk(p, pi, R, u, v)
    return out


def simulate(
    inst: Instance, pol: Policy, trials: int, seed: int, workers: int = 1, backend: str | None = None
) -> SimResult:
    """Monte Carlo estimate of the expected reward of ``pol``.

    Trials are split into ``workers`` contiguous shares, each drawing from
    its own stream spawned from ``seed``. Output is bitwise reproducible for
    a fixed (seed, workers) pair and does not depend on the kernel backend.
    """
    if pol.n != inst.n:
        raise ValueError(f"policy has length {pol.n}, instance has n = {inst.n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    kern = _backend.kernels if backend is None else _backend.get(backend)
    streams = np.random.SeedSequence(seed).spawn(workers)
    shares = [trials // workers + (1 if k < trials % workers else 0) for k in range(workers)]
    jobs = [(s, ss) for s, ss in zip(shares, streams) if s > 0]
    if len(jobs) == 1:
        parts = [_worker_rewards(inst, pol, jobs[0][0], jobs[0][1], kern)]
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as ex:
            parts = list(ex.map(lambda j: _worker_rewards(inst, pol, j[0], j[1], kern), jobs))
    rewards = np.concatenate(parts)
    est = float(rewards.mean())
    sd = float(rewards.std(ddof=1)) if trials > 1 else 0.0
    return SimResult(est, sd / math.sqrt(trials), trials, seed, GENERATOR, workers)
