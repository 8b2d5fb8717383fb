"""
Subgroup Stage Module.

This stage is responsible for:
- Loading and validating the instance document
- Converting subgroup words to loop form
- Folding H and K (run as two parallel branches)
"""
import time
from typing import Any, Dict

from app.core.errors import VfkitError
from app.core.intersection import fold_subgroup
from app.core.subgroup_folding import core_of
from app.stages.states import PipelineState
from app.tools.instance_tools import build_gog, load_instance, subgroup_generators
from app.utils.logging import get_logger

logger = get_logger("stages.subgroup")


def _failure(stage: str, error: VfkitError, started: float) -> Dict[str, Any]:
    logger.error(f"{stage} failed: {error}")
    return {
        "failures": [error],
        "errors": [f"{stage}: {error}"],
        "timings": {stage: time.perf_counter() - started},
    }


def load_step(state: PipelineState) -> Dict[str, Any]:
    """
    Parse the instance, validate the graph of groups and read the generators.

    Args:
        state: Current pipeline state

    Returns:
        State updates with document, gog and generator lists, or a failure
    """
    logger.info("=== Load Step ===")
    started = time.perf_counter()

    try:
        doc = state.get("document") or load_instance(state["instance_path"])
        gog = build_gog(doc)
        updates: Dict[str, Any] = {
            "document": doc,
            "gog": gog,
            "h_generators": subgroup_generators(doc, gog, state["h_name"]),
        }
        if state.get("k_name"):
            updates["k_generators"] = subgroup_generators(doc, gog, state["k_name"])
    except VfkitError as e:
        return _failure("load", e, started)

    logger.info(f"Loaded {len(updates['h_generators'])} generators for {state['h_name']}")
    updates["timings"] = {"load": time.perf_counter() - started}
    return updates


def _fold_side(state: PipelineState, side: str) -> Dict[str, Any]:
    name = state.get(f"{side}_name")
    if state.get("failures") or state.get("gog") is None or not name:
        return {}

    logger.info(f"=== Fold Step: {name} ===")
    started = time.perf_counter()
    try:
        delta = fold_subgroup(state["gog"], state[f"{side}_generators"], name)
        data = core_of(delta)
    except VfkitError as e:
        return _failure(f"fold_{side}", e, started)

    logger.info(
        f"{name}: {delta.num_blocks} blocks, {len(delta.packets)} packets, "
        f"rank {data.rank}, reduced rank {data.reduced_rank}"
    )
    return {
        f"delta_{side}": delta,
        f"core_{side}": data,
        "timings": {f"fold_{side}": time.perf_counter() - started},
    }


def fold_h_step(state: PipelineState) -> Dict[str, Any]:
    return _fold_side(state, "h")


def fold_k_step(state: PipelineState) -> Dict[str, Any]:
    return _fold_side(state, "k")
