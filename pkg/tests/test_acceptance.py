"""Acceptance criteria, one test each.

Every test prints a single ``[criterion k] PASS|FAIL ...`` line (visible
without ``-s``) and then asserts. Run alone with

    pytest tests/test_acceptance.py -v
"""
import math
import time

import numpy as np
import pytest

from oddstop.bridge import flow_residuals, flow_to_policy, policy_to_flow
from oddstop.core import Instance, Policy, secretary_instance
from oddstop.dp import odds_threshold, policy_from_values, solve_dp
from oddstop.duality import complementary_slackness, duality_gap
from oddstop.evaluate import brute_force_optimal, simulate
from oddstop.lp_model import build_dual_lp, build_flow_lp, build_secretary_reduced_lp
from oddstop.rewards import VariantSpec, build_rewards, last_success_rewards
from oddstop.simplex import solve_lp

from conftest import random_instance

pytestmark = pytest.mark.acceptance

INV_E = 1.0 / math.e


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'} {detail}")

    return emit


def test_criterion_1_secretary_3(report):
    t0 = time.perf_counter()
    inst = secretary_instance(3)
    dp = solve_dp(inst).value
    _, odds = odds_threshold(inst)
    ff = solve_lp(build_flow_lp(inst)).objective
    red = solve_lp(build_secretary_reduced_lp(3)).objective
    brute, _ = brute_force_optimal(inst)
    elapsed = time.perf_counter() - t0
    errs = {"dp": abs(dp - 0.5), "odds": abs(odds - 0.5), "ff": abs(ff - 0.5), "reduced": abs(red - 0.5)}
    ok = (
        errs["dp"] <= 1e-12
        and errs["odds"] <= 1e-12
        and errs["ff"] <= 1e-9
        and errs["reduced"] <= 1e-9
        and abs(brute - 0.5) <= 1e-12
        and elapsed < 1.0
    )
    report(1, ok, f"errors {errs} brute={brute!r} in {elapsed:.3f}s")
    assert ok


def test_criterion_2_dp_vs_brute_force(report):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        inst = random_instance(rng, 12)
        brute, _ = brute_force_optimal(inst)
        worst = max(worst, abs(solve_dp(inst).value - brute))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 60.0
    report(2, ok, f"max |w_0 - brute| = {worst:.2e} over 500 instances in {elapsed:.2f}s")
    assert ok


@pytest.fixture(scope="module")
def duality_suite():
    """Criterion 3's 200 instances with DP values and both simplex optima."""
    rng = np.random.default_rng(3)
    rows = []
    t0 = time.perf_counter()
    for _ in range(200):
        inst = random_instance(rng, 50)
        w = solve_dp(inst)
        ff = solve_lp(build_flow_lp(inst))
        dual = solve_lp(build_dual_lp(inst, "P"))
        rows.append((inst, w, ff, dual))
    return rows, time.perf_counter() - t0


def test_criterion_3_strong_duality(report, duality_suite):
    rows, elapsed = duality_suite
    statuses = {(ff.status, dual.status) for _, _, ff, dual in rows}
    err_ff = max(abs(ff.objective - w.value) for _, w, ff, _ in rows)
    err_p = max(abs(dual.objective - w.value) for _, w, _, dual in rows)
    ok = statuses == {("optimal", "optimal")} and err_ff <= 1e-7 and err_p <= 1e-7 and elapsed < 120.0
    report(3, ok, f"max |FF - w_0| = {err_ff:.2e}, max |P - w_0| = {err_p:.2e}, 200 instances in {elapsed:.2f}s")
    assert ok


def test_criterion_4_policy_flow_roundtrip(report):
    rng = np.random.default_rng(4)
    worst_sys = worst_trip = 0.0
    for k in range(1000):
        inst = random_instance(rng, 40)
        assert np.all(inst.q > 0)
        kind = k % 3
        if kind == 0:
            pi = rng.random(inst.n)
        elif kind == 1:
            pi = (rng.random(inst.n) < 0.5).astype(float)
        else:
            pi = np.where(rng.random(inst.n) < 0.3, rng.choice([0.0, 1.0], inst.n), rng.random(inst.n))
        flow = policy_to_flow(inst, Policy(pi))
        worst_sys = max(worst_sys, *flow_residuals(inst, flow).values())
        back = policy_to_flow(inst, flow_to_policy(inst, flow))
        worst_trip = max(
            worst_trip, float(np.max(np.abs(back.y - flow.y))), float(np.max(np.abs(back.z - flow.z)))
        )
    ok = worst_sys <= 1e-12 and worst_trip <= 1e-12
    report(4, ok, f"max system residual {worst_sys:.2e}, max roundtrip error {worst_trip:.2e} over 1000 pairs")
    assert ok


def test_criterion_5_complementary_slackness(report, duality_suite):
    rows, _ = duality_suite
    worst_gap = 0.0
    n_viol = 0
    for inst, w, _, _ in rows:
        flow = policy_to_flow(inst, policy_from_values(inst, w).to_policy())
        worst_gap = max(worst_gap, abs(duality_gap(inst, flow, w)))
        n_viol += len(complementary_slackness(inst, flow, w, tol=1e-7).violations)
    ok = worst_gap <= 1e-10 and n_viol == 0
    report(5, ok, f"max |gap| = {worst_gap:.2e}, {n_viol} slackness violations over {len(rows)} instances")
    assert ok


def test_criterion_6_reduced_lp(report):
    worst = 0.0
    for n in range(1, 51):
        ff = solve_lp(build_flow_lp(secretary_instance(n)))
        red = solve_lp(build_secretary_reduced_lp(n))
        assert ff.optimal and red.optimal
        worst = max(worst, abs(ff.objective - red.objective))
    ok = worst <= 1e-9
    report(6, ok, f"max |reduced - FF| = {worst:.2e} for n = 1..50")
    assert ok


def test_criterion_7_asymptotics(report):
    vals = [solve_dp(secretary_instance(n)).value for n in range(2, 201)]
    rises = [vals[k + 1] - vals[k] for k in range(len(vals) - 1)]
    worst_rise = max(rises)
    monotone = worst_rise <= 0.0
    above = min(vals) > INV_E

    rng = np.random.default_rng(7)
    worst_odds = math.inf
    worst_dp = 0.0
    count = 0
    while count < 100:
        n = int(rng.integers(1, 51))
        p = rng.uniform(0.05, 0.95, n)
        if np.sum(p / (1.0 - p)) < 1.0:
            continue
        count += 1
        inst = Instance.from_arrays(p, last_success_rewards(p), variant=VariantSpec("last-success"))
        _, win = odds_threshold(inst)
        worst_odds = min(worst_odds, win)
        worst_dp = max(worst_dp, abs(win - solve_dp(inst).value))
    bound = worst_odds >= INV_E - 1e-12 and worst_dp <= 1e-12

    ok = monotone and above and bound
    report(
        7,
        ok,
        f"secretary max rise {worst_rise:.2e}, min value {min(vals):.6f} > 1/e; "
        f"min odds win {worst_odds:.6f}, max |odds - dp| {worst_dp:.2e}",
    )
    assert ok


def test_criterion_8_monte_carlo(report):
    inst = secretary_instance(3)
    pol = policy_from_values(inst, solve_dp(inst)).to_policy()
    a = simulate(inst, pol, 10**6, seed=8)
    b = simulate(inst, pol, 10**6, seed=8)
    c = simulate(inst, pol, 10**6, seed=8, workers=4)
    d = simulate(inst, pol, 10**6, seed=8, workers=4)
    within = abs(a.estimate - 0.5) <= 4 * a.stderr and abs(c.estimate - 0.5) <= 4 * c.stderr
    same = a == b and c == d
    ok = within and same
    report(
        8,
        ok,
        f"estimate {a.estimate:.5f} +/- {a.stderr:.5f} (z = {(a.estimate - 0.5) / a.stderr:+.2f}), "
        f"4 workers z = {(c.estimate - 0.5) / c.stderr:+.2f}, reproducible = {same}",
    )
    assert ok


def test_criterion_9_reward_identities(report):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 31))
        p = rng.uniform(0.05, 0.95, n)
        for m in range(1, min(6, n) + 1):
            any_m = build_rewards(p, VariantSpec("any-of-last-m", m=m))
            parts = sum(build_rewards(p, VariantSpec("mth-last", m=j)) for j in range(1, m + 1))
            worst = max(worst, float(np.max(np.abs(any_m - parts))))
        for l in range(1, min(6, n - 1) + 1):  # noqa: E741
            k1 = build_rewards(p, VariantSpec("k-of-last-l", k=1, l=l))
            kl = build_rewards(p, VariantSpec("k-of-last-l", k=l, l=l))
            worst = max(
                worst,
                float(np.max(np.abs(k1 - build_rewards(p, VariantSpec("any-of-last-m", m=l))))),
                float(np.max(np.abs(kl - build_rewards(p, VariantSpec("mth-last", m=l))))),
            )
    ok = worst <= 1e-12
    report(9, ok, f"max identity error {worst:.2e} over 100 p vectors")
    assert ok
