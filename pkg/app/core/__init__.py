"""
Core algebra: finite groups, Serre graphs, graphs of groups, subgroup
folding, intersections and the brute-force tree oracle.
"""
from app.core.errors import FreeActionViolation, VfkitError
from app.core.graph_of_groups import GraphOfGroups, GWord, validate_gog
from app.core.intersection import fiber_product, intersection_core, verify_bound
from app.core.subgroup_folding import BlockGraph, CoreData, core_of, fold, member, wedge

__all__ = [
    "BlockGraph",
    "CoreData",
    "FreeActionViolation",
    "GWord",
    "GraphOfGroups",
    "VfkitError",
    "core_of",
    "fiber_product",
    "fold",
    "intersection_core",
    "member",
    "validate_gog",
    "verify_bound",
    "wedge",
]
