"""Stable-roommate rotation machinery and geometric reduction gadgets."""

from .core import (
    Matching,
    RoommateInstance,
    blocking_pair,
    is_stable,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
)
from .irving import Rotation, Table, eliminate, exposed_rotations, find_stable_matching, phase1
from .rotations import (
    RotationGraph,
    RotationPoset,
    attribution_consistency_check,
    discover_rotations,
    rotation_graph,
)
from .counting import (
    StableCount,
    count_brute_force,
    count_via_downsets,
    count_via_maximal_is,
    enumerate_stable_matchings,
)
from .oneattr import OneAttrInstance, expand, solve_1attr

__all__ = [
    "Matching",
    "RoommateInstance",
    "blocking_pair",
    "is_stable",
    "parse_instance",
    "parse_matching",
    "serialize_instance",
    "serialize_matching",
    "Rotation",
    "Table",
    "eliminate",
    "exposed_rotations",
    "find_stable_matching",
    "phase1",
    "RotationGraph",
    "RotationPoset",
    "attribution_consistency_check",
    "discover_rotations",
    "rotation_graph",
    "StableCount",
    "count_brute_force",
    "count_via_downsets",
    "count_via_maximal_is",
    "enumerate_stable_matchings",
    "OneAttrInstance",
    "expand",
    "solve_1attr",
]
