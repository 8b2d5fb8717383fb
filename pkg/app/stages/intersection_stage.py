"""
Intersection Stage Module.

Builds the fiber product of the two folded subgroup graphs and the bound
report with its degree chain diagnostics.
"""
import time
from typing import Any, Dict

from app.core.errors import VfkitError
from app.core.intersection import bound_report, degree_chain_diagnostics, fiber_product, intersection_core
from app.stages.states import PipelineState
from app.utils.logging import get_logger

logger = get_logger("stages.intersection")


def intersection_step(state: PipelineState) -> Dict[str, Any]:
    """
    Intersect H and K when both folded cleanly.

    Args:
        state: Current pipeline state

    Returns:
        State updates with fiber, bound and diagnostics
    """
    if state.get("failures") or state.get("delta_h") is None or state.get("delta_k") is None:
        return {}

    logger.info("=== Intersection Step ===")
    started = time.perf_counter()
    try:
        fp = fiber_product(state["delta_h"], state["delta_k"])
        core_hk = intersection_core(fp)
        diagnostics = degree_chain_diagnostics(fp, state["core_h"], state["core_k"], core_hk)
        report = bound_report(fp, state["core_h"], state["core_k"], core_hk, diagnostics)
    except VfkitError as e:
        logger.error(f"intersection failed: {e}")
        return {"failures": [e], "errors": [f"intersect: {e}"]}

    logger.info(
        f"Fiber product: {len(fp.blocks)} blocks, {len(fp.packets)} packets, "
        f"base component {len(fp.base_component)} blocks"
    )
    return {
        "fiber": fp,
        "bound": report,
        "diagnostics": diagnostics,
        "timings": {"intersect": time.perf_counter() - started},
    }
