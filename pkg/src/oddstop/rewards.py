"""Reward vectors for the last-success family of selection problems.

Every variant has the form

    R_i = (prod_{j>i} q_j) * sum_{h in H} e_h(r_{i+1}, ..., r_n)

where ``e_h`` is the h-th elementary symmetric polynomial of the tail odds
and ``H`` depends on the variant. The tail is swept once from i = n down to
1, updating the symmetric polynomials one odds value at a time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .core import InstanceError

KINDS = ("last-success", "mth-last", "any-of-last-m", "k-of-last-l")


@dataclass(frozen=True)
class VariantSpec:
    kind: str
    m: int | None = None
    k: int | None = None
    l: int | None = None  # noqa: E741

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError("variant", f"unknown variant kind {self.kind!r}")
        needs = {
            "last-success": (),
            "mth-last": ("m",),
            "any-of-last-m": ("m",),
            "k-of-last-l": ("k", "l"),
        }[self.kind]
        for name in ("m", "k", "l"):
            val = getattr(self, name)
            if name in needs:
                if isinstance(val, bool) or not isinstance(val, int):
                    raise InstanceError("variant", f"{self.kind} needs integer parameter {name}")
                if val < 1:
                    raise InstanceError("variant", f"{name} = {val} must be >= 1")
            elif val is not None:
                raise InstanceError("variant", f"{self.kind} takes no parameter {name}")
        if self.kind == "k-of-last-l" and self.k > self.l:
            raise InstanceError("variant", f"k-of-last-l needs k <= l (k={self.k}, l={self.l})")

    def degrees(self) -> range:
        """The summation range H of symmetric-polynomial degrees."""
        if self.kind == "last-success":
            return range(0, 1)
        if self.kind == "mth-last":
            return range(self.m - 1, self.m)
        if self.kind == "any-of-last-m":
            return range(0, self.m)
        return range(self.k - 1, self.l)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "VariantSpec":
        if not isinstance(doc, Mapping) or "kind" not in doc:
            raise InstanceError("variant", "variant must be an object with a 'kind' field")
        extra = set(doc) - {"kind", "m", "k", "l"}
        if extra:
            raise InstanceError("variant", f"unknown variant fields: {sorted(extra)}")
        return cls(doc["kind"], doc.get("m"), doc.get("k"), doc.get("l"))

    def to_dict(self) -> dict:
        return {k: v for k, v in (("kind", self.kind), ("m", self.m), ("k", self.k), ("l", self.l)) if v is not None}


def elem_sym_polys(r: Sequence[float], max_h: int) -> np.ndarray:
    """Elementary symmetric polynomials ``e_0..e_max_h`` of the values in ``r``.

    >>> elem_sym_polys([1.0, 0.5], 2).tolist()
    [1.0, 1.5, 0.5]
    """
    if max_h < 0:
        raise ValueError("max_h must be >= 0")
    e = np.zeros(max_h + 1)
    e[0] = 1.0
    for x in r:
        _push(e, float(x))
    return e


def _push(e: np.ndarray, x: float) -> None:
    # high degree first so e[h-1] is still the old value
    for h in range(e.shape[0] - 1, 0, -1):
        e[h] += x * e[h - 1]


def build_rewards(p: Sequence[float], spec: VariantSpec) -> np.ndarray:
    """Reward vector for variant ``spec`` under success probabilities ``p``.

    ``p_1 = 1`` is allowed since the first odds value never enters a reward;
    ``p_j = 1`` for j >= 2 raises :class:`InstanceError`.
    """
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    if spec.kind == "k-of-last-l" and not spec.l < n:
        raise InstanceError("variant", f"k-of-last-l needs l < n (l={spec.l}, n={n})")
    bad = np.flatnonzero(p[1:] >= 1.0)
    if bad.size:
        i = int(bad[0]) + 2
        raise InstanceError("odds-undefined", f"odds r_{i} undefined: p_{i} = 1")

    H = spec.degrees()
    e = np.zeros(H.stop)
    e[0] = 1.0
    tail_q = 1.0
    R = np.empty(n)
    for i in range(n - 1, -1, -1):
        R[i] = tail_q * sum(e[h] for h in H)
        q = 1.0 - p[i]
        if i > 0:
            _push(e, p[i] / q)
            tail_q *= q
    return R


def last_success_rewards(p: Sequence[float]) -> np.ndarray:
    return build_rewards(p, VariantSpec("last-success"))


def is_last_success(inst, tol: float = 1e-12) -> bool:
    """True when the instance's rewards are the last-success rewards of its p."""
    if inst.variant is not None:
        return inst.variant.kind == "last-success" or (
            inst.variant.kind in ("mth-last", "any-of-last-m") and inst.variant.m == 1
        ) or (inst.variant.kind == "k-of-last-l" and inst.variant.l == 1)
    try:
        ref = last_success_rewards(inst.p)
    except InstanceError:
        return False
    return bool(np.all(np.abs(ref - inst.R) <= tol * np.maximum(1.0, np.abs(ref))))
