"""Optimal stopping for the odds problem and its variants.

Three routes to the same optimum: backward induction (:mod:`oddstop.dp`),
the stopping-flow LP solved by an in-repo simplex (:mod:`oddstop.lp_model`,
:mod:`oddstop.simplex`), and the odds-theorem threshold rule. The
:mod:`oddstop.duality` module certifies that DP values and optimal flows
form a primal-dual optimal pair.
"""
from ._backend import BACKEND
from .core import (
    FlowSolution,
    Instance,
    InstanceError,
    Policy,
    StopRegion,
    ValueVector,
    load_instance,
    secretary_instance,
    validate_instance,
)
from .dp import odds_threshold, policy_from_values, solve_dp
from .rewards import VariantSpec, build_rewards, elem_sym_polys

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FlowSolution",
    "Instance",
    "InstanceError",
    "Policy",
    "StopRegion",
    "ValueVector",
    "VariantSpec",
    "build_rewards",
    "elem_sym_polys",
    "load_instance",
    "odds_threshold",
    "policy_from_values",
    "secretary_instance",
    "solve_dp",
    "validate_instance",
]
