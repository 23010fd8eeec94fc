"""Dense two-phase tableau simplex with Bland's rule.

Problems are brought to ``min c'x, Ax = b, x >= 0, b >= 0`` by shifting and
splitting variables and adding slack, surplus and artificial columns.
Phase 1 minimizes the sum of artificials; phase 2 the real objective.
Entering variable: lowest column index with negative reduced cost. Leaving
variable: minimum ratio, ties broken by lowest basic column index. Both
choices are deterministic, so identical input gives identical pivots.

Once the optimal basis is known, primal values and dual prices are
recomputed from the original matrix with a direct solve instead of being
read off the accumulated tableau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lp_model import LpProblem

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
MAX_PIVOTS = 100_000


class SingularBasisError(ArithmeticError):
    """The final basis matrix could not be factorized."""


class PivotLimitError(ArithmeticError):
    pass


@dataclass
class LpSolution:
    """Solver output.

    ``duals`` are shadow prices: the rate of change of the optimal objective
    per unit increase of each constraint's right-hand side, keyed by
    constraint name. Empty unless ``status == "optimal"``.
    """

    status: str
    objective: float = math.nan
    values: dict[str, float] = field(default_factory=dict)
    duals: dict[str, float] = field(default_factory=dict)
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _snap(x: np.ndarray, tol: float = FEAS_TOL) -> np.ndarray:
    x = np.where(np.abs(x) <= tol, 0.0, x)
    return x + 0.0  # normalizes -0.0


class _StandardForm:
    """Column transform from the user's variables to nonnegative ones."""

    def __init__(self, prob: LpProblem):
        c, A, rel, b, lo, hi = prob.to_dense()
        m, n = A.shape
        self.n_orig = n
        self.sign = -1.0 if prob.sense == "max" else 1.0
        # each original variable: x = shift + sum(mult * column)
        self.shift = np.zeros(n)
        cols: list[tuple[int, float]] = []  # (orig var, multiplier)
        extra_rows: list[tuple[int, float]] = []  # (std column, upper bound)
        for j in range(n):
            if math.isfinite(lo[j]):
                self.shift[j] = lo[j]
                cols.append((j, 1.0))
                if math.isfinite(hi[j]):
                    extra_rows.append((len(cols) - 1, hi[j] - lo[j]))
            elif math.isfinite(hi[j]):
                self.shift[j] = hi[j]
                cols.append((j, -1.0))
            else:
                cols.append((j, 1.0))
                cols.append((j, -1.0))
        self.cols = cols
        nx = len(cols)
        M = np.zeros((m + len(extra_rows), nx))
        cx = np.zeros(nx)
        for k, (j, mult) in enumerate(cols):
            M[:m, k] = A[:, j] * mult
            cx[k] = self.sign * c[j] * mult
        rhs = np.concatenate([b - A @ self.shift, [ub for _, ub in extra_rows]])
        rels = list(rel) + ["<="] * len(extra_rows)
        for r, (k, _) in enumerate(extra_rows):
            M[m + r, k] = 1.0
        self.obj_const = self.sign * float(c @ self.shift)
        self.m_orig = m

        # slack / surplus columns, then sign-normalize rows
        n_slack = sum(1 for r in rels if r != "=")
        rows = M.shape[0]
        S = np.zeros((rows, n_slack))
        slack_of_row = [-1] * rows
        s = 0
        for r, relation in enumerate(rels):
            if relation == "<=":
                S[r, s] = 1.0
            elif relation == ">=":
                S[r, s] = -1.0
            else:
                continue
            slack_of_row[r] = nx + s
            s += 1
        A_std = np.hstack([M, S])
        self.row_flip = np.where(rhs < 0.0, -1.0, 1.0)
        A_std *= self.row_flip[:, None]
        rhs = rhs * self.row_flip
        self.A = A_std
        self.b = rhs
        self.c = np.concatenate([cx, np.zeros(n_slack)])
        self.n_struct = A_std.shape[1]
        # initial basis: a slack with +1 where available, otherwise an artificial
        self.basis_slack = [
            k if k >= 0 and A_std[r, k] > 0 else -1 for r, k in enumerate(slack_of_row)
        ]

    def recover(self, x_std: np.ndarray) -> np.ndarray:
        x = self.shift.copy()
        for k, (j, mult) in enumerate(self.cols):
            x[j] += mult * x_std[k]
        return x


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0


def _price_out(T: np.ndarray, cost: np.ndarray, basis: list[int]) -> None:
    T[-1, :-1] = cost
    T[-1, -1] = 0.0
    for r, k in enumerate(basis):
        if T[-1, k] != 0.0:
            T[-1] -= T[-1, k] * T[r]


def _run(T: np.ndarray, basis: list[int], n_allowed: int, count: list[int]) -> str:
    rows = T.shape[0] - 1
    while True:
        rc = T[-1, :n_allowed]
        cand = np.flatnonzero(rc < -PIVOT_TOL)
        if cand.size == 0:
            return "optimal"
        j = int(cand[0])
        col = T[:rows, j]
        pos = np.flatnonzero(col > PIVOT_TOL)
        if pos.size == 0:
            return "unbounded"
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, j)
        basis[r] = j
        count[0] += 1
        if count[0] > MAX_PIVOTS:
            raise PivotLimitError(f"simplex exceeded {MAX_PIVOTS} pivots")


def solve_lp(prob: LpProblem) -> LpSolution:
    """Solve ``prob``; status is ``optimal``, ``infeasible`` or ``unbounded``.

    Raises :class:`SingularBasisError` if the optimal basis is numerically
    singular when recomputing the solution.
    """
    sf = _StandardForm(prob)
    A, b = sf.A, sf.b
    m, ns = A.shape
    art_rows = [r for r in range(m) if sf.basis_slack[r] < 0]
    n_art = len(art_rows)
    T = np.zeros((m + 1, ns + n_art + 1))
    T[:m, :ns] = A
    T[:m, -1] = b
    basis = list(sf.basis_slack)
    for a, r in enumerate(art_rows):
        T[r, ns + a] = 1.0
        basis[r] = ns + a
    count = [0]

    if n_art:
        phase1_cost = np.concatenate([np.zeros(ns), np.ones(n_art)])
        _price_out(T, phase1_cost, basis)
        _run(T, basis, ns + n_art, count)
        infeas = -T[-1, -1]
        if infeas > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution("infeasible", pivots=count[0])
        # drive remaining (zero-level) artificials out of the basis
        keep = []
        for r in range(m):
            if basis[r] >= ns:
                nz = np.flatnonzero(np.abs(T[r, :ns]) > PIVOT_TOL)
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
                    count[0] += 1
                    keep.append(r)
                # else: redundant row, dropped
            else:
                keep.append(r)
        T = np.vstack([T[keep][:, list(range(ns)) + [T.shape[1] - 1]], np.zeros((1, ns + 1))])
        basis = [basis[r] for r in keep]
    else:
        keep = list(range(m))

    _price_out(T, sf.c, basis)
    status = _run(T, basis, ns, count)
    if status == "unbounded":
        return LpSolution("unbounded", pivots=count[0])

    B = A[keep][:, basis]
    try:
        xb = np.linalg.solve(B, b[keep])
        y = np.linalg.solve(B.T, sf.c[basis])
    except np.linalg.LinAlgError as exc:
        raise SingularBasisError(str(exc)) from None
    if not (np.all(np.isfinite(xb)) and np.all(np.isfinite(y))):
        raise SingularBasisError("non-finite solution from basis solve")
    x_std = np.zeros(ns)
    x_std[basis] = xb
    x = _snap(sf.recover(x_std))

    y_full = np.zeros(m)
    y_full[keep] = y
    # min-form multipliers -> shadow prices of the user's rows
    prices = _snap(sf.sign * y_full[: sf.m_orig] * sf.row_flip[: sf.m_orig])

    names = prob.variables
    values = {v: float(x[j]) for j, v in enumerate(names)}
    duals = {con.name: float(prices[i]) for i, con in enumerate(prob.constraints)}
    return LpSolution("optimal", prob.objective_value(values), values, duals, count[0])


def reduced_costs(prob: LpProblem, sol: LpSolution) -> dict[str, float]:
    """Objective coefficient minus dual-priced column, per variable.

    At an optimum, free variables and variables strictly inside their bounds
    have zero reduced cost; a variable resting on its lower bound has a
    reduced cost ``<= 0`` in a max problem and ``>= 0`` in a min problem.
    """
    rc = dict(prob.objective)
    rc = {v: rc.get(v, 0.0) for v in prob.variables}
    for con in prob.constraints:
        yv = sol.duals[con.name]
        for v, coef in con.coeffs.items():
            rc[v] -= yv * coef
    return rc
