"""
Oracle Stage Module.

Corroborates the folding stages by brute force on a ball of the Bass-Serre
tree. A subgroup whose folding reported a free-action violation is still
checked: a fixed vertex found in the ball corroborates the violation.
"""
import time
from typing import Any, Dict, List, Optional

from app.config.settings import settings
from app.core.errors import CapExceeded, FreeActionViolation
from app.core.serre_graph import graphs_isomorphic
from app.core.subgroup_folding import CoreData
from app.core.tree_oracle import OracleRun, find_fixed_vertex, stab_count_lower, stabilized_quotient
from app.models.reports import OracleReport
from app.stages.states import PipelineState
from app.utils.logging import get_logger

logger = get_logger("stages.oracle")


def _isomorphic(run: OracleRun, data: Optional[CoreData]) -> Optional[bool]:
    if data is None:
        return None
    if data.psi is None or run.quotient.core is None:
        return data.psi is None and run.quotient.core is None
    return graphs_isomorphic(run.quotient.core.graph, data.psi, decorated=True)


def _verdict(run: OracleRun, isomorphic: Optional[bool], violated: bool, fixed: bool) -> str:
    if violated:
        return "corroborated" if fixed else "inconclusive"
    if fixed:
        return "mismatch"
    if not run.stabilized or isomorphic is None:
        return "inconclusive"
    return "corroborated" if isomorphic else "mismatch"


def _violated(state: PipelineState, name: str) -> bool:
    return any(
        isinstance(f, FreeActionViolation) and f.subgroup == name
        for f in state.get("failures", [])
    )


def oracle_step(state: PipelineState) -> Dict[str, Any]:
    """
    Run the tree oracle for H (and K) and compare with the folded cores.

    Args:
        state: Current pipeline state

    Returns:
        State updates with one OracleReport per subgroup
    """
    gog = state.get("gog")
    if gog is None:
        return {}

    logger.info("=== Oracle Step ===")
    started = time.perf_counter()
    radius = state.get("oracle_radius", settings.oracle_radius)
    length = state.get("oracle_length", settings.oracle_length)

    sides = [("h", state["h_name"])]
    if state.get("k_name"):
        sides.append(("k", state["k_name"]))

    reports: List[OracleReport] = []
    runs: Dict[str, OracleRun] = {}
    try:
        for side, name in sides:
            run = stabilized_quotient(gog, state[f"{side}_generators"], radius, length)
            runs[side] = run
            hit = find_fixed_vertex(run.ball, run.elements)
            violated = _violated(state, name)
            isomorphic = None if violated else _isomorphic(run, state.get(f"core_{side}"))
            reports.append(OracleReport(
                subgroup=name,
                radius=radius,
                length=length,
                ball_vertices=run.ball.num_vertices,
                elements=len(run.elements),
                stabilized=run.stabilized,
                isomorphic=isomorphic,
                rank=run.quotient.rank if run.stabilized else None,
                fixed_vertex=run.ball.describe(hit[1]) if hit else None,
                verdict=_verdict(run, isomorphic, violated, hit is not None),
            ))
            logger.info(f"Oracle for {name}: {reports[-1].verdict}")

        if "k" in runs and state.get("bound") is not None:
            count = stab_count_lower(runs["h"].ball, runs["h"].elements, runs["k"].elements)
            reports[0] = reports[0].model_copy(update={"stab_count_lower": count})
    except CapExceeded as e:
        logger.warning(f"oracle skipped: {e}")
        return {"failures": [e], "errors": [f"oracle: {e}"], "timings": {"oracle": time.perf_counter() - started}}

    return {"oracle": reports, "timings": {"oracle": time.perf_counter() - started}}
