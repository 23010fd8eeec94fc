"""Writers for fixed-format MPS and CPLEX-style LP text.

Output is a pure function of the problem: rows and columns appear in
declaration order and numbers use the shortest round-trip repr (MPS falls
back to the widest ``%g`` form that fits its 12-character field).
"""
from __future__ import annotations

import math

from .lp_model import LpProblem

MPS_NAME_LEN = 8
MPS_NUM_LEN = 12


def _mps_num(x: float) -> str:
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    if len(s) <= MPS_NUM_LEN:
        return s
    for digits in range(MPS_NUM_LEN, 0, -1):
        s = f"{x:.{digits}g}"
        if len(s) <= MPS_NUM_LEN:
            return s
    raise ValueError(f"cannot fit {x!r} into an MPS field")


def _check_name(name: str) -> str:
    if len(name) > MPS_NAME_LEN or " " in name:
        raise ValueError(
            f"name {name!r} does not fit fixed-format MPS (max {MPS_NAME_LEN} chars); use lp-text"
        )
    return name


def to_mps(prob: LpProblem) -> str:
    lines = [f"NAME          {prob.name}"]
    if prob.sense == "max":
        lines += ["OBJSENSE", "    MAX"]
    kind = {"<=": "L", ">=": "G", "=": "E"}
    lines += ["ROWS", " N  OBJ"]
    for con in prob.constraints:
        lines.append(f" {kind[con.relation]}  {_check_name(con.name)}")

    column_entries: dict[str, list[tuple[str, float]]] = {v: [] for v in prob.variables}
    for v, c in prob.objective.items():
        if c != 0.0:
            column_entries[v].append(("OBJ", c))
    for con in prob.constraints:
        for v, c in con.coeffs.items():
            if c != 0.0:
                column_entries[v].append((con.name, c))
    lines.append("COLUMNS")
    for v, entries in column_entries.items():
        _check_name(v)
        for row, c in entries:
            lines.append(f"    {v:<8}  {row:<8}  {_mps_num(c):>12}")

    lines.append("RHS")
    for con in prob.constraints:
        if con.rhs != 0.0:
            lines.append(f"    {'RHS':<8}  {con.name:<8}  {_mps_num(con.rhs):>12}")

    bound_lines = []
    for v, (lo, hi) in prob.bounds.items():
        if lo == -math.inf and hi == math.inf:
            bound_lines.append(f" FR {'BND':<8}  {v:<8}")
            continue
        if lo == hi:
            bound_lines.append(f" FX {'BND':<8}  {v:<8}  {_mps_num(lo):>12}")
            continue
        if lo == -math.inf:
            bound_lines.append(f" MI {'BND':<8}  {v:<8}")
        elif lo != 0.0:
            bound_lines.append(f" LO {'BND':<8}  {v:<8}  {_mps_num(lo):>12}")
        if hi != math.inf:
            bound_lines.append(f" UP {'BND':<8}  {v:<8}  {_mps_num(hi):>12}")
    if bound_lines:
        lines.append("BOUNDS")
        lines += bound_lines
    lines.append("ENDATA")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _num(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _expr(coeffs: dict[str, float], per_line: int = 8) -> str:
    terms = []
    for v, c in coeffs.items():
        if c == 0.0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1.0 else f"{_num(mag)} {v}"
        terms.append(f"{sign} {body}")
    if not terms:
        first = next(iter(coeffs), None)
        return f"0 {first}" if first else "0"
    if terms[0].startswith("+ "):
        terms[0] = terms[0][2:]
    chunks = [" ".join(terms[k : k + per_line]) for k in range(0, len(terms), per_line)]
    return "\n   ".join(chunks)


def to_lp_text(prob: LpProblem) -> str:
    rel = {"<=": "<=", ">=": ">=", "=": "="}
    obj = prob.objective or {prob.variables[0]: 0.0}
    lines = [f"\\ Problem: {prob.name}", "Maximize" if prob.sense == "max" else "Minimize"]
    lines.append(f" obj: {_expr(obj)}")
    lines.append("Subject To")
    for con in prob.constraints:
        lines.append(f" {con.name}: {_expr(con.coeffs)} {rel[con.relation]} {_num(con.rhs)}")
    bound_lines = []
    for v, (lo, hi) in prob.bounds.items():
        if lo == -math.inf and hi == math.inf:
            bound_lines.append(f" {v} free")
        elif lo == 0.0 and hi == math.inf:
            continue
        else:
            lo_s = "-inf" if lo == -math.inf else _num(lo)
            hi_s = "+inf" if hi == math.inf else _num(hi)
            bound_lines.append(f" {lo_s} <= {v} <= {hi_s}")
    if bound_lines:
        lines.append("Bounds")
        lines += bound_lines
    lines.append("End")
    return "\n".join(lines) + "\n"
