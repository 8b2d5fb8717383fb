"""
Intersection Workflow Module.

This module defines the LangGraph workflow that orchestrates:
1. Load: parse and validate the instance, read the generator words
2. Fold: fold H and K in parallel branches
3. Intersect: fiber product, intersection core and bound verdicts
4. Oracle (optional): brute-force corroboration on a tree ball
5. Report: assemble the RunReport
"""
from typing import Any, Dict, Optional

from langgraph.graph import END, START, StateGraph

from app.config.settings import settings
from app.core.errors import FreeActionViolation
from app.models.documents import InstanceDocument
from app.stages import (
    PipelineState,
    fold_h_step,
    fold_k_step,
    intersection_step,
    load_step,
    oracle_step,
    report_step,
)
from app.utils.logging import get_logger

logger = get_logger("workflow")


def _route_after_intersect(state: PipelineState) -> str:
    """Router: oracle when requested and the failures leave something to check."""
    if state.get("document") is None:
        logger.debug("Router: load failed, ending")
        return END
    failures = state.get("failures", [])
    oracle_ok = all(isinstance(f, FreeActionViolation) for f in failures)
    if state.get("run_oracle") and state.get("gog") is not None and oracle_ok:
        return "oracle_node"
    return "report_node"


def _build_workflow() -> StateGraph:
    """
    Build and configure the workflow graph.

    Graph Structure:
        START ──> load_node
                    ├──> fold_h_node ──┐
                    └──> fold_k_node ──┴──> intersect_node ──> [oracle_node] ──> report_node ──> END

    The intersect node waits for both fold branches.

    Returns:
        Configured StateGraph ready for compilation
    """
    workflow = StateGraph(PipelineState)

    # === Add Nodes ===
    workflow.add_node("load_node", load_step)
    workflow.add_node("fold_h_node", fold_h_step)
    workflow.add_node("fold_k_node", fold_k_step)
    workflow.add_node("intersect_node", intersection_step)
    workflow.add_node("oracle_node", oracle_step)
    workflow.add_node("report_node", report_step)

    # === Define Edges ===
    workflow.add_edge(START, "load_node")

    # Fork: one branch per subgroup
    workflow.add_edge("load_node", "fold_h_node")
    workflow.add_edge("load_node", "fold_k_node")

    # Join: intersect runs once both folds are done
    workflow.add_edge(["fold_h_node", "fold_k_node"], "intersect_node")

    workflow.add_conditional_edges(
        "intersect_node",
        _route_after_intersect,
        ["oracle_node", "report_node", END],
    )
    workflow.add_edge("oracle_node", "report_node")
    workflow.add_edge("report_node", END)

    return workflow


# Build and compile the workflow
_workflow = _build_workflow()
app = _workflow.compile()


def get_mermaid_diagram() -> str:
    """Generate Mermaid diagram of the workflow."""
    return app.get_graph().draw_mermaid()


def run_pipeline(
    h_name: str,
    k_name: Optional[str] = None,
    instance_path: Optional[str] = None,
    document: Optional[InstanceDocument] = None,
    run_oracle: bool = False,
    oracle_radius: Optional[int] = None,
    oracle_length: Optional[int] = None,
    seed: Optional[int] = None,
    with_timings: bool = False,
    report_path: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Run the pipeline on one instance.

    Args:
        h_name: Subgroup H
        k_name: Subgroup K; omitted for a single-subgroup run
        instance_path: Instance file (ignored when ``document`` is given)
        document: Already parsed instance
        run_oracle: Also run the tree oracle
        oracle_radius, oracle_length: Oracle (R, L), defaults from settings
        seed: Seed recorded in the report
        with_timings: Record stage timings in the report
        report_path: Write the report as JSON here

    Returns:
        Final pipeline state dictionary
    """
    if instance_path is None and document is None:
        raise ValueError("run_pipeline needs an instance_path or a document")

    initial: Dict[str, Any] = {
        "instance_path": instance_path,
        "document": document,
        "h_name": h_name,
        "k_name": k_name,
        "run_oracle": run_oracle,
        "oracle_radius": settings.oracle_radius if oracle_radius is None else oracle_radius,
        "oracle_length": settings.oracle_length if oracle_length is None else oracle_length,
        "seed": settings.seed if seed is None else seed,
        "with_timings": with_timings,
        "report_path": report_path,
        "timings": {},
        "failures": [],
        "errors": [],
    }
    logger.info(f"Pipeline start: H={h_name} K={k_name or '-'}")
    final_state = app.invoke(initial)
    if final_state.get("errors"):
        logger.warning(f"Errors encountered: {final_state['errors']}")
    return final_state
