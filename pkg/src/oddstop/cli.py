"""Command-line interface.

Exit codes: 0 success, 1 usage/input error, 2 verification failure,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any

import numpy as np

from .bridge import flow_residuals, flow_to_policy, policy_to_flow
from .core import FlowSolution, Instance, InstanceError, Policy, ValueVector, is_secretary, load_instance, secretary_instance, validate_instance
from .dp import odds_threshold, policy_from_values, solve_dp
from .duality import check_dual_feasible, check_primal_feasible, complementary_slackness
from .evaluate import expected_reward, simulate
from .lp_model import build_dual_lp, build_flow_lp, build_secretary_reduced_lp
from .lpio import to_lp_text, to_mps
from .rewards import VariantSpec, build_rewards, is_last_success
from .simplex import PivotLimitError, SingularBasisError, solve_lp

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
AGREE_TOL = 1e-9


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code
        self.message = message
        self.exit_code = exit_code


def _emit(doc: Any, output: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError("io", f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError("parse", f"{path}: {exc}") from None


def _load(path: str) -> Instance:
    try:
        return load_instance(path)
    except OSError as exc:
        raise CliError("io", f"{path}: {exc.strerror}") from None


def _policy_doc(stop, pi) -> dict:
    return {"stop": [bool(s) for s in stop], "pi": [float(v) for v in pi]}


def _flow_doc(flow: FlowSolution) -> dict:
    return {"y": flow.y.tolist(), "z": flow.z.tolist()}


def _solve_dp(inst: Instance) -> dict:
    w = solve_dp(inst)
    region = policy_from_values(inst, w)
    pol = region.to_policy()
    return {
        "method": "dp",
        "value": w.value,
        "policy": _policy_doc(region.stop, pol.pi),
        "values": w.w.tolist(),
        "flow": _flow_doc(policy_to_flow(inst, pol)),
    }


def _solve_simplex(inst: Instance) -> dict:
    sol = solve_lp(build_flow_lp(inst))
    if not sol.optimal:
        raise CliError("numeric", f"simplex returned status {sol.status} on the flow LP", EXIT_NUMERIC)
    n = inst.n
    flow = FlowSolution(
        [sol.values[f"y_{i}"] for i in range(1, n + 1)], [sol.values[f"z_{i}"] for i in range(n + 1)]
    )
    pol = flow_to_policy(inst, flow)
    w = [sol.duals["Source"]] + [sol.duals[f"Cons_{i}"] for i in range(1, n + 1)]
    return {
        "method": "simplex",
        "value": sol.objective,
        "policy": _policy_doc(pol.pi < 0.5, pol.pi),
        "values": w,
        "flow": _flow_doc(flow),
        "pivots": sol.pivots,
    }


def _solve_odds(inst: Instance) -> dict:
    s, win = odds_threshold(inst)
    stop = np.arange(1, inst.n + 1) >= s
    doc = {
        "method": "odds-theorem",
        "value": win,
        "s_star": s,
        "policy": _policy_doc(stop, np.where(stop, 0.0, 1.0)),
    }
    if not is_last_success(inst):
        doc["warning"] = "rewards are not last-success rewards; the odds theorem does not apply"
    return doc


SOLVERS = {"dp": _solve_dp, "simplex": _solve_simplex, "odds-theorem": _solve_odds}


def _timed(fn, inst):
    t0 = time.perf_counter()
    doc = fn(inst)
    doc["timing_ms"] = (time.perf_counter() - t0) * 1e3
    return doc


def cmd_solve(args) -> int:
    inst = _load(args.input)
    if args.method != "all":
        doc = _timed(SOLVERS[args.method], inst)
        if "warning" in doc:
            print(f"warning: {doc['warning']}", file=sys.stderr)
        _emit(doc, args.output)
        return EXIT_OK
    results = {name: _timed(fn, inst) for name, fn in SOLVERS.items() if name != "odds-theorem"}
    compared = ["dp", "simplex"]
    try:
        results["odds-theorem"] = _timed(_solve_odds, inst)
        if "warning" in results["odds-theorem"]:
            print(f"warning: {results['odds-theorem']['warning']}", file=sys.stderr)
        else:
            compared.append("odds-theorem")
    except InstanceError as exc:
        results["odds-theorem"] = {"method": "odds-theorem", "skipped": exc.message}
    ref = results["dp"]["value"]
    diffs = {m: abs(results[m]["value"] - ref) for m in compared if m != "dp"}
    doc = {
        "method": "all",
        "value": ref,
        "policy": results["dp"]["policy"],
        "agreement": all(d <= AGREE_TOL for d in diffs.values()),
        "checks": {"compared": compared, "abs_diff_vs_dp": diffs, "tol": AGREE_TOL},
        "results": results,
        "timing_ms": sum(r.get("timing_ms", 0.0) for r in results.values()),
    }
    _emit(doc, args.output)
    return EXIT_OK if doc["agreement"] else EXIT_VERIFY


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "value": float(value), "tol": tol, "ok": bool(value <= tol)}


def verify_instance(inst: Instance) -> list[dict]:
    """Certificate checks tying the DP, the flow LP and the odds rule together."""
    checks = []
    w = solve_dp(inst)
    scale = max(1.0, w.value)
    resid = np.max(np.abs(w.w[:-1] - np.maximum(inst.q * w.w[1:] + inst.p * inst.R, w.w[1:])))
    checks.append(_check("dp_fixpoint_residual", resid / scale, 1e-12))
    checks.append(_check("dp_dual_feasibility", max(check_dual_feasible(inst, w).values()), 1e-12))

    pol = policy_from_values(inst, w).to_policy()
    flow = policy_to_flow(inst, pol)
    checks.append(_check("dp_flow_feasibility", max(check_primal_feasible(inst, flow).values()), 1e-12))
    checks.append(_check("duality_gap", abs(w.value - flow.objective(inst)), 1e-10))
    cs = complementary_slackness(inst, flow, w)
    checks.append(_check("complementary_slackness_violations", len(cs.violations), 0))

    back = policy_to_flow(inst, flow_to_policy(inst, flow))
    rt = max(np.max(np.abs(back.y - flow.y)), np.max(np.abs(back.z - flow.z)))
    checks.append(_check("flow_policy_roundtrip", rt, 1e-12))

    ff = solve_lp(build_flow_lp(inst))
    dual = solve_lp(build_dual_lp(inst, "P"))
    if not (ff.optimal and dual.optimal):
        raise CliError("numeric", f"simplex status ff={ff.status} dual={dual.status}", EXIT_NUMERIC)
    checks.append(_check("simplex_ff_vs_dp", abs(ff.objective - w.value), 1e-7))
    checks.append(_check("simplex_dual_p_vs_dp", abs(dual.objective - w.value), 1e-7))
    lp_flow = FlowSolution(
        [ff.values[f"y_{i}"] for i in range(1, inst.n + 1)], [ff.values[f"z_{i}"] for i in range(inst.n + 1)]
    )
    checks.append(_check("simplex_flow_feasibility", max(flow_residuals(inst, lp_flow).values()), 1e-9))
    lp_w = ValueVector([ff.duals["Source"]] + [ff.duals[f"Cons_{i}"] for i in range(1, inst.n + 1)])
    checks.append(_check("simplex_duals_feasible_for_P", max(check_dual_feasible(inst, lp_w).values()), 1e-7))

    if is_last_success(inst):
        try:
            _, win = odds_threshold(inst)
            checks.append(_check("odds_theorem_vs_dp", abs(win - w.value), 1e-12))
        except InstanceError:
            pass
    return checks


def verify_solution(inst: Instance, doc: Any) -> list[dict]:
    """Checks a solution document (as written by ``solve``) against the instance."""
    if not isinstance(doc, dict) or "value" not in doc:
        raise CliError("schema", "solution file needs a 'value' field")
    checks = []
    w = solve_dp(inst)
    try:
        value = float(doc["value"])
        checks.append(_check("file_value_vs_dp", abs(value - w.value), AGREE_TOL))
        pol_doc = doc.get("policy")
        if pol_doc and "pi" in pol_doc:
            pol = Policy(pol_doc["pi"])
            checks.append(_check("file_policy_value_vs_dp", abs(expected_reward(inst, pol) - w.value), AGREE_TOL))
        if "values" in doc:
            fw = ValueVector(doc["values"])
            if fw.n != inst.n:
                raise ValueError("'values' has the wrong length")
            checks.append(_check("file_values_dual_feasibility", max(check_dual_feasible(inst, fw).values()), AGREE_TOL))
            checks.append(_check("file_values_w0_vs_dp", abs(fw.value - w.value), AGREE_TOL))
        if "flow" in doc:
            fl = FlowSolution(doc["flow"]["y"], doc["flow"]["z"])
            if fl.n != inst.n:
                raise ValueError("'flow' has the wrong length")
            checks.append(_check("file_flow_feasibility", max(check_primal_feasible(inst, fl).values()), AGREE_TOL))
            checks.append(_check("file_flow_objective_vs_dp", abs(fl.objective(inst) - w.value), AGREE_TOL))
    except (TypeError, ValueError, KeyError) as exc:
        raise CliError("schema", f"malformed solution file: {exc}") from None
    return checks


def cmd_verify(args) -> int:
    inst = _load(args.input)
    checks = verify_instance(inst)
    if args.check_files:
        for path in args.check_files:
            for c in verify_solution(inst, _read_json(path)):
                c["file"] = path
                checks.append(c)
    ok = all(c["ok"] for c in checks)
    _emit({"ok": ok, "checks": checks}, args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def _load_policy(spec: str, inst: Instance) -> Policy:
    if spec == "optimal":
        return policy_from_values(inst, solve_dp(inst)).to_policy()
    doc = _read_json(spec)
    pi = doc.get("pi") if isinstance(doc, dict) else None
    if pi is None and isinstance(doc, dict) and isinstance(doc.get("policy"), dict):
        pi = doc["policy"].get("pi")
    try:
        pol = Policy(pi)
    except (TypeError, ValueError) as exc:
        raise CliError("policy", f"malformed policy in {spec}: {exc}") from None
    if pol.n != inst.n:
        raise CliError("policy", f"policy has length {pol.n}, instance has n = {inst.n}")
    return pol


def cmd_simulate(args) -> int:
    if args.trials <= 0:
        raise CliError("usage", "--trials must be positive")
    if args.workers <= 0:
        raise CliError("usage", "--workers must be positive")
    inst = _load(args.input)
    pol = _load_policy(args.policy, inst)
    res = simulate(inst, pol, args.trials, args.seed, workers=args.workers)
    doc = res.to_dict()
    if args.compare_exact:
        exact = expected_reward(inst, pol)
        doc["exact"] = exact
        doc["z_score"] = (res.estimate - exact) / res.stderr if res.stderr > 0 else 0.0
    _emit(doc, args.output)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    inst = _load(args.input)
    if args.formulation == "ff":
        lp = build_flow_lp(inst)
    elif args.formulation == "dual-p":
        lp = build_dual_lp(inst, "P")
    elif args.formulation == "dual-p1":
        lp = build_dual_lp(inst, "P1")
    else:
        if not is_secretary(inst):
            raise CliError("formulation", "secretary-reduced needs a secretary instance (p_i = 1/i, R_i = i/n)")
        lp = build_secretary_reduced_lp(inst.n)
    try:
        text = to_mps(lp) if args.format == "mps" else to_lp_text(lp)
    except ValueError as exc:
        raise CliError("format", str(exc)) from None
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    sources = sum(bool(x) for x in (args.p_list, args.secretary, args.seed is not None))
    if sources != 1:
        raise CliError("usage", "give exactly one of --p-list, --secretary, --seed")
    if args.p_list:
        try:
            p = [float(t) for t in args.p_list.split(",") if t.strip()]
        except ValueError:
            raise CliError("usage", f"bad --p-list {args.p_list!r}") from None
        if args.n is not None and args.n != len(p):
            raise CliError("usage", f"--n {args.n} disagrees with {len(p)} probabilities")
    else:
        if args.n is None or args.n < 1:
            raise CliError("usage", "--n must be a positive integer")
        if args.secretary:
            p = secretary_instance(args.n).p.tolist()
        else:
            rng = np.random.Generator(np.random.PCG64(args.seed))
            p = rng.uniform(0.05, 0.95, args.n).tolist()

    if args.variant:
        spec = VariantSpec(args.variant, args.m, args.k, args.l)
        inst = validate_instance({"p": p, "rewards": build_rewards(p, spec).tolist()}, variant=spec)
    elif args.secretary:
        inst = secretary_instance(args.n)
    else:
        raise CliError("usage", "--variant is required unless --secretary is given")
    _emit(inst.to_dict(), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oddstop", description="Optimal stopping for the odds problem and its variants.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=[*SOLVERS, "all"], default="dp")
    s.add_argument("--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="certify DP / flow-LP optimality and duality")
    v.add_argument("--input", required=True)
    v.add_argument("--check-files", nargs="+", metavar="SOLUTION", help="solution documents to check")
    v.add_argument("--output")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("simulate", help="Monte Carlo estimate of a policy's reward")
    m.add_argument("--input", required=True)
    m.add_argument("--policy", default="optimal", help="'optimal' or a JSON file with 'pi'")
    m.add_argument("--trials", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--compare-exact", action="store_true")
    m.add_argument("--output")
    m.set_defaults(func=cmd_simulate)

    e = sub.add_parser("export-lp", help="write an LP formulation as MPS or LP text")
    e.add_argument("--input", required=True)
    e.add_argument("--formulation", choices=["ff", "dual-p", "dual-p1", "secretary-reduced"], default="ff")
    e.add_argument("--format", choices=["mps", "lp-text"], default="lp-text")
    e.add_argument("--output")
    e.set_defaults(func=cmd_export_lp)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--n", type=int)
    g.add_argument("--variant", choices=["last-success", "mth-last", "any-of-last-m", "k-of-last-l"])
    g.add_argument("--m", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--l", type=int)
    g.add_argument("--p-list")
    g.add_argument("--secretary", action="store_true")
    g.add_argument("--seed", type=int)
    g.add_argument("--output")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        err = {"code": exc.code, "message": exc.message}
        code = exc.exit_code
    except InstanceError as exc:
        err, code = exc.to_dict(), EXIT_USAGE
    except (SingularBasisError, PivotLimitError) as exc:
        err, code = {"code": "numeric", "message": str(exc)}, EXIT_NUMERIC
    print(json.dumps({"error": err}), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
