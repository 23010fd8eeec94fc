"""Domain types shared by the solvers, and instance validation.

Indices are 1-based in docstrings and 0-based in storage: ``p[0]`` is the
success probability of the first observation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np


class InstanceError(ValueError):
    """Raised for malformed instance data.

    ``code`` is a short machine-readable tag used in CLI error documents.
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


def _frozen(values: Any) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """One odds-problem instance: success probabilities and stop rewards.

    Construct through :func:`validate_instance` (or :meth:`from_arrays`),
    which enforces the invariants. ``flags`` collects non-fatal notes such as
    a probability equal to one. ``variant`` is set when the rewards were
    generated from a reward variant rather than given explicitly.
    """

    p: np.ndarray
    R: np.ndarray
    flags: tuple[str, ...] = ()
    variant: Any = None

    @property
    def n(self) -> int:
        return int(self.p.shape[0])

    @property
    def q(self) -> np.ndarray:
        return 1.0 - self.p

    def odds(self, start: int = 1) -> np.ndarray:
        """Odds ``r_i = p_i/q_i`` for ``i >= start`` (1-based).

        Raises InstanceError if some ``q_i`` in that range is zero.
        """
        p = self.p[start - 1 :]
        q = 1.0 - p
        bad = np.flatnonzero(q <= 0.0)
        if bad.size:
            i = int(bad[0]) + start
            raise InstanceError("odds-undefined", f"odds r_{i} undefined: p_{i} = 1")
        return p / q

    @classmethod
    def from_arrays(cls, p: Sequence[float], R: Sequence[float], variant: Any = None) -> "Instance":
        return validate_instance({"p": list(p), "rewards": list(R)}, variant=variant)

    def with_rewards(self, R: Sequence[float]) -> "Instance":
        return Instance.from_arrays(self.p, R)

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {"n": self.n, "p": self.p.tolist(), "rewards": self.R.tolist()}
        if self.variant is not None:
            # informational only; the file stays a rewards-form instance
            doc["source"] = {"variant": self.variant.to_dict()}
        return doc


@dataclass(frozen=True, eq=False)
class Policy:
    """Randomized Markov policy; ``pi[i]`` is the probability to continue at a success."""

    pi: np.ndarray

    def __post_init__(self):
        pi = _frozen(self.pi)
        if pi.ndim != 1:
            raise ValueError("policy must be a vector")
        if not np.all((pi >= 0.0) & (pi <= 1.0)):
            raise ValueError("policy entries must lie in [0, 1]")
        object.__setattr__(self, "pi", pi)

    @property
    def n(self) -> int:
        return int(self.pi.shape[0])

    @classmethod
    def never_stop(cls, n: int) -> "Policy":
        return cls(np.ones(n))

    @classmethod
    def first_success(cls, n: int) -> "Policy":
        return cls(np.zeros(n))


@dataclass(frozen=True, eq=False)
class ValueVector:
    """DP values ``w_0..w_n``. No invariant check here; see ``duality.check_dual_feasible``."""

    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", _frozen(self.w))

    @property
    def n(self) -> int:
        return int(self.w.shape[0]) - 1

    @property
    def value(self) -> float:
        return float(self.w[0])

    def alpha(self) -> np.ndarray:
        """Auxiliary dual variables ``alpha_i = w_{i-1} - w_i``."""
        return self.w[:-1] - self.w[1:]


@dataclass(frozen=True, eq=False)
class FlowSolution:
    """Stop flows ``y_1..y_n`` and continue flows ``z_0..z_n``."""

    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        y, z = _frozen(self.y), _frozen(self.z)
        if z.shape[0] != y.shape[0] + 1:
            raise ValueError("flow needs len(z) == len(y) + 1")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return int(self.y.shape[0])

    def objective(self, inst: Instance) -> float:
        return float(np.dot(inst.R, self.y))


@dataclass(frozen=True, eq=False)
class StopRegion:
    """Deterministic policy: ``stop[i]`` means select a success at index i+1."""

    stop: np.ndarray = field()

    def __post_init__(self):
        s = np.array(self.stop, dtype=bool)
        s.setflags(write=False)
        object.__setattr__(self, "stop", s)

    def to_policy(self) -> Policy:
        return Policy(np.where(self.stop, 0.0, 1.0))

    def as_tuple(self) -> tuple[bool, ...]:
        return tuple(bool(b) for b in self.stop)


def _number_list(raw: Any, name: str) -> list[float]:
    if isinstance(raw, (str, bytes)) or not isinstance(raw, (Sequence, np.ndarray)):
        raise InstanceError("type", f"'{name}' must be an array of numbers")
    out = []
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
            raise InstanceError("type", f"'{name}' contains a non-numeric entry: {v!r}")
        out.append(float(v))
    return out


def validate_instance(raw: Mapping[str, Any] | Instance, variant: Any = None) -> Instance:
    """Validate candidate instance data and return an :class:`Instance`.

    ``raw`` is a mapping with ``p`` and exactly one of ``rewards`` or
    ``variant``; ``n`` is optional but must agree when present. Errors raise
    :class:`InstanceError`. A probability of exactly one is accepted and
    noted in ``Instance.flags``.
    """
    if isinstance(raw, Instance):
        variant = raw.variant if variant is None else variant
        raw = raw.to_dict()
    if not isinstance(raw, Mapping):
        raise InstanceError("type", "instance must be a JSON object")
    if "p" not in raw:
        raise InstanceError("missing", "instance needs field 'p'")
    p = _number_list(raw["p"], "p")
    if not p:
        raise InstanceError("empty", "instance needs n >= 1 observations")
    if "n" in raw:
        n = raw["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise InstanceError("type", "'n' must be an integer")
        if n < 1:
            raise InstanceError("empty", "instance needs n >= 1 observations")
        if n != len(p):
            raise InstanceError("dimension", f"n = {n} but p has {len(p)} entries")
    for i, pi in enumerate(p, start=1):
        if not (math.isfinite(pi) and 0.0 < pi <= 1.0):
            raise InstanceError("probability", f"p_{i} = {pi} outside (0, 1]")

    has_rewards = "rewards" in raw
    has_variant = "variant" in raw and raw["variant"] is not None
    if has_rewards and has_variant:
        raise InstanceError("schema", "give exactly one of 'rewards' or 'variant'")
    if has_variant:
        from .rewards import VariantSpec, build_rewards

        variant = VariantSpec.from_dict(raw["variant"])
        R = build_rewards(p, variant).tolist()
    elif has_rewards:
        R = _number_list(raw["rewards"], "rewards")
    else:
        raise InstanceError("schema", "give exactly one of 'rewards' or 'variant'")

    if len(R) != len(p):
        raise InstanceError("dimension", f"p has {len(p)} entries but rewards has {len(R)}")
    for i, r in enumerate(R, start=1):
        if not math.isfinite(r):
            raise InstanceError("reward", f"R_{i} = {r} is not finite")
        if r < 0.0:
            raise InstanceError("reward", f"R_{i} = {r} is negative")

    flags = tuple(
        f"p_{i} = 1 outside the open interval (0, 1)" for i, pi in enumerate(p, start=1) if pi == 1.0
    )
    return Instance(p=_frozen(p), R=_frozen(R), flags=flags, variant=variant)


def load_instance(path) -> Instance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceError("parse", f"{path}: {exc}") from None
    return validate_instance(doc)


def secretary_instance(n: int) -> Instance:
    """Classical secretary problem: ``p_i = 1/i`` and ``R_i = i/n``."""
    if n < 1:
        raise InstanceError("empty", "secretary instance needs n >= 1")
    i = np.arange(1, n + 1, dtype=float)
    return validate_instance({"p": (1.0 / i).tolist(), "rewards": (i / n).tolist()})


def is_secretary(inst: Instance, tol: float = 1e-12) -> bool:
    ref = secretary_instance(inst.n)
    return bool(np.allclose(inst.p, ref.p, rtol=0, atol=tol) and np.allclose(inst.R, ref.R, rtol=0, atol=tol))
