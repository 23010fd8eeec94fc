"""LP formulations: the stopping-flow LP, its dual in two forms, and the
reduced secretary LP.

Naming is fixed so exports are reproducible:

* flow LP: variables ``y_i`` (>= 0) and ``z_i`` (free); rows ``Cap_i``,
  ``Cons_i``, ``Source``.
* dual, ``P1`` form: variables ``w_i`` (free) and ``a_i`` (>= 0); rows
  ``Stop_i``, ``Link_i``, ``Terminal``.
* dual, ``P`` form: variables ``w_i`` (free); rows ``Stop_i``, ``Mono_i``,
  ``Terminal``.
* reduced secretary LP: variables ``y_i`` (>= 0); rows ``Cap_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Instance, ValueVector

INF = math.inf
RELATIONS = ("<=", "=", ">=")


@dataclass
class Constraint:
    name: str
    coeffs: dict[str, float]
    relation: str
    rhs: float

    def activity(self, x: dict[str, float]) -> float:
        return sum(c * x[v] for v, c in self.coeffs.items())

    def violation(self, x: dict[str, float]) -> float:
        """Amount by which ``x`` violates this row (0 when satisfied)."""
        lhs = self.activity(x)
        if self.relation == "<=":
            return max(0.0, lhs - self.rhs)
        if self.relation == ">=":
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass
class LpProblem:
    """A linear program over named variables.

    Variables keep declaration order; that order (and constraint order) is
    the column/row order used by the solver and the exporters.
    """

    sense: str
    name: str = "lp"
    objective: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")

    @property
    def variables(self) -> list[str]:
        return list(self.bounds)

    def add_variable(self, name: str, lower: float = 0.0, upper: float = INF, cost: float = 0.0) -> None:
        if name in self.bounds:
            raise ValueError(f"variable {name} declared twice")
        if lower > upper:
            raise ValueError(f"variable {name}: lower bound above upper bound")
        self.bounds[name] = (float(lower), float(upper))
        if cost:
            self.objective[name] = float(cost)

    def add_constraint(self, name: str, coeffs: dict[str, float], relation: str, rhs: float) -> None:
        if relation not in RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        if any(c.name == name for c in self.constraints):
            raise ValueError(f"constraint {name} declared twice")
        for v, c in coeffs.items():
            if v not in self.bounds:
                raise ValueError(f"constraint {name} uses undeclared variable {v}")
            if not math.isfinite(c):
                raise ValueError(f"constraint {name}: non-finite coefficient for {v}")
        self.constraints.append(Constraint(name, {v: float(c) for v, c in coeffs.items()}, relation, float(rhs)))

    def constraint(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def objective_value(self, x: dict[str, float]) -> float:
        return sum(c * x[v] for v, c in self.objective.items())

    def max_violation(self, x: dict[str, float]) -> float:
        worst = 0.0
        for v, (lo, hi) in self.bounds.items():
            worst = max(worst, lo - x[v], x[v] - hi)
        for c in self.constraints:
            worst = max(worst, c.violation(x))
        return worst

    def to_dense(self):
        """Matrix form ``(c, A, relations, b, lower, upper)`` in declaration order."""
        cols = {v: j for j, v in enumerate(self.bounds)}
        c = np.zeros(len(cols))
        for v, coef in self.objective.items():
            c[cols[v]] = coef
        A = np.zeros((len(self.constraints), len(cols)))
        for i, con in enumerate(self.constraints):
            for v, coef in con.coeffs.items():
                A[i, cols[v]] = coef
        rel = [con.relation for con in self.constraints]
        b = np.array([con.rhs for con in self.constraints], dtype=float)
        lo = np.array([bd[0] for bd in self.bounds.values()], dtype=float)
        hi = np.array([bd[1] for bd in self.bounds.values()], dtype=float)
        return c, A, rel, b, lo, hi


@dataclass(frozen=True)
class DualAuxiliary:
    """The ``a_i`` variables of the P1 dual; ``a_i = w_{i-1} - w_i``."""

    alpha: np.ndarray

    @classmethod
    def from_values(cls, w: ValueVector) -> "DualAuxiliary":
        return cls(w.alpha())


def build_flow_lp(inst: Instance) -> LpProblem:
    """Maximize ``sum R_i y_i`` over stopping flows.

    The capacity row is stored as ``y_i - p_i z_{i-1} <= 0`` (scaled by
    ``p_i`` so no coefficient is a quotient).
    """
    n = inst.n
    lp = LpProblem("max", name="ff")
    for i in range(1, n + 1):
        lp.add_variable(f"y_{i}", 0.0, INF, inst.R[i - 1])
    for i in range(n + 1):
        lp.add_variable(f"z_{i}", -INF, INF)
    for i in range(1, n + 1):
        lp.add_constraint(f"Cap_{i}", {f"y_{i}": 1.0, f"z_{i-1}": -inst.p[i - 1]}, "<=", 0.0)
    for i in range(1, n + 1):
        lp.add_constraint(f"Cons_{i}", {f"y_{i}": 1.0, f"z_{i}": 1.0, f"z_{i-1}": -1.0}, "=", 0.0)
    lp.add_constraint("Source", {"z_0": 1.0}, "=", 1.0)
    return lp


def build_dual_lp(inst: Instance, form: str = "P") -> LpProblem:
    """Dual of the flow LP, either as derived (``"P1"``) or with the
    auxiliary variables eliminated (``"P"``)."""
    n = inst.n
    p, q, R = inst.p, inst.q, inst.R
    if form not in ("P", "P1"):
        raise ValueError(f"form must be 'P' or 'P1', got {form!r}")
    lp = LpProblem("min", name=f"dual-{form.lower()}")
    for i in range(n + 1):
        lp.add_variable(f"w_{i}", -INF, INF, 1.0 if i == 0 else 0.0)
    if form == "P1":
        for i in range(1, n + 1):
            lp.add_variable(f"a_{i}", 0.0, INF)
        for i in range(1, n + 1):
            lp.add_constraint(f"Stop_{i}", {f"w_{i}": 1.0, f"a_{i}": 1.0 / p[i - 1]}, ">=", R[i - 1])
        for i in range(1, n + 1):
            lp.add_constraint(f"Link_{i}", {f"w_{i-1}": 1.0, f"w_{i}": -1.0, f"a_{i}": -1.0}, "=", 0.0)
    else:
        for i in range(1, n + 1):
            coeffs = {f"w_{i-1}": 1.0}
            if q[i - 1] != 0.0:
                coeffs[f"w_{i}"] = -q[i - 1]
            lp.add_constraint(f"Stop_{i}", coeffs, ">=", p[i - 1] * R[i - 1])
        for i in range(1, n + 1):
            lp.add_constraint(f"Mono_{i}", {f"w_{i-1}": 1.0, f"w_{i}": -1.0}, ">=", 0.0)
    lp.add_constraint("Terminal", {f"w_{n}": 1.0}, "=", 0.0)
    return lp


def build_secretary_reduced_lp(n: int) -> LpProblem:
    """Secretary LP in stop-flow variables only:
    ``max sum (i/n) y_i`` s.t. ``i*y_i <= 1 - sum_{k<i} y_k``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lp = LpProblem("max", name="secretary-reduced")
    for i in range(1, n + 1):
        lp.add_variable(f"y_{i}", 0.0, INF, i / n)
    for i in range(1, n + 1):
        coeffs = {f"y_{k}": 1.0 for k in range(1, i)}
        coeffs[f"y_{i}"] = float(i)
        lp.add_constraint(f"Cap_{i}", coeffs, "<=", 1.0)
    return lp


def flow_point(flow) -> dict[str, float]:
    """Variable assignment for the flow LP from a FlowSolution."""
    x = {f"y_{i}": float(v) for i, v in enumerate(flow.y, start=1)}
    x.update({f"z_{i}": float(v) for i, v in enumerate(flow.z)})
    return x


def value_point(w: ValueVector, form: str = "P") -> dict[str, float]:
    """Variable assignment for a dual LP from a value vector."""
    x = {f"w_{i}": float(v) for i, v in enumerate(w.w)}
    if form == "P1":
        x.update({f"a_{i}": float(v) for i, v in enumerate(w.alpha(), start=1)})
    return x
