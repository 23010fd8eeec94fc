"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--brute-n 16] [--trials 1000000]

Each kernel runs on identical inputs under both backends; the script
reports best-of-``repeat`` wall time, the speedup, and whether the outputs
agree bitwise.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from oddstop import _backend
from oddstop.core import secretary_instance
from oddstop.dp import policy_from_values, solve_dp
from oddstop.evaluate import deterministic_values, simulate


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--brute-n", type=int, default=16)
    ap.add_argument("--trials", type=int, default=10**6)
    ap.add_argument("--dp-n", type=int, default=200_000)
    args = ap.parse_args(argv)

    backends = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled extension not available; timing the Python backend only")

    rng = np.random.default_rng(0)
    p_dp = rng.uniform(0.05, 0.95, args.dp_n)
    R_dp = rng.uniform(0.0, 1.0, args.dp_n)
    brute = secretary_instance(args.brute_n)
    sim = secretary_instance(10)
    sim_pol = policy_from_values(sim, solve_dp(sim)).to_policy()

    cases = {
        f"backward_induction n={args.dp_n}": lambda b: _backend.get(b).backward_induction(p_dp, R_dp),
        f"deterministic_values n={args.brute_n}": lambda b: deterministic_values(brute, backend=b),
        f"simulate n=10 trials={args.trials}": lambda b: np.array(
            [simulate(sim, sim_pol, args.trials, seed=1, backend=b).estimate]
        ),
    }

    print(f"{'kernel':<40}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'identical':>11}")
    for label, fn in cases.items():
        times, outs = [], []
        for b in backends:
            t, out = best_of(lambda: fn(b), args.repeat)
            times.append(t)
            outs.append(out)
        speed = f"{times[0] / times[-1]:.1f}x" if len(times) > 1 else "-"
        same = str(all(np.array_equal(outs[0], o) for o in outs[1:])) if len(outs) > 1 else "-"
        print(f"{label:<40}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times) + f"{speed:>10}{same:>11}")


if __name__ == "__main__":
    main()
