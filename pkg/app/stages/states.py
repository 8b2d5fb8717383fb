"""
Pipeline State Definitions.

This module defines the LangGraph state shared by the pipeline stages.
Fields written by the parallel fold stages either have distinct names or a
reducer, so both branches can update the state in the same step.
"""
import operator
from typing import Annotated, Dict, List, Optional

from typing_extensions import TypedDict

from app.core.errors import VfkitError
from app.core.graph_of_groups import GraphOfGroups, GWord
from app.core.intersection import FiberProduct, PairDiagnostic
from app.core.subgroup_folding import BlockGraph, CoreData
from app.models.documents import InstanceDocument
from app.models.reports import BoundReport, OracleReport, RunReport


def merge_timings(left: Dict[str, float], right: Dict[str, float]) -> Dict[str, float]:
    return {**left, **right}


class PipelineState(TypedDict, total=False):
    """
    LangGraph Pipeline State Definition.

    Attributes:
        instance_path: Instance file to load (unless ``document`` is given)
        document: Parsed instance
        gog: Validated graph of groups
        h_name, k_name: Subgroup names; no K means a single-subgroup run
        h_generators, k_generators: Generators in loop form

        delta_h, delta_k: Folded subgroup graphs
        core_h, core_k: Their cores

        fiber: Fiber product of delta_h and delta_k
        bound: Bound report for H and K
        diagnostics: Per vertex-pair degree chain records

        run_oracle: Whether to run the brute-force oracle
        oracle_radius, oracle_length: Oracle ball radius and product length
        oracle: Oracle reports, one per subgroup

        seed: Seed in effect
        with_timings: Include stage timings in the report
        report_path: Optional JSON file for the run report
        report: Final run report

        timings: Seconds per stage (merged across branches)
        failures: Exceptions raised inside stages (appended)
        errors: Error messages (appended)
    """
    # === Input ===
    instance_path: Optional[str]
    document: Optional[InstanceDocument]
    gog: Optional[GraphOfGroups]
    h_name: str
    k_name: Optional[str]
    h_generators: List[GWord]
    k_generators: List[GWord]

    # === Folding ===
    delta_h: Optional[BlockGraph]
    delta_k: Optional[BlockGraph]
    core_h: Optional[CoreData]
    core_k: Optional[CoreData]

    # === Intersection ===
    fiber: Optional[FiberProduct]
    bound: Optional[BoundReport]
    diagnostics: List[PairDiagnostic]

    # === Oracle ===
    run_oracle: bool
    oracle_radius: int
    oracle_length: int
    oracle: List[OracleReport]

    # === Report ===
    seed: int
    with_timings: bool
    report_path: Optional[str]
    report: Optional[RunReport]

    # === Accumulators ===
    timings: Annotated[Dict[str, float], merge_timings]
    failures: Annotated[List[VfkitError], operator.add]
    errors: Annotated[List[str], operator.add]
