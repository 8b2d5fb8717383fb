"""
Report Stage Module.

Assembles the RunReport from whatever the earlier stages produced and
optionally writes it as canonical JSON.
"""
from pathlib import Path
from typing import Any, Dict, List

from app import __version__
from app.core.subgroup_folding import BlockGraph, CoreData, free_generators
from app.models.reports import RunReport, SubgroupSummary
from app.stages.states import PipelineState
from app.tools.instance_tools import canonical_json, format_words, instance_digest
from app.utils.logging import get_logger

logger = get_logger("stages.report")


def summarize(name: str, delta: BlockGraph, data: CoreData) -> SubgroupSummary:
    """Rank data and a free basis of one folded subgroup."""
    return SubgroupSummary(
        name=name,
        rank=data.rank,
        reduced_rank=data.reduced_rank,
        blocks=delta.num_blocks,
        packets=len(delta.packets),
        core_vertices=data.num_vertices,
        core_edges=data.num_positive,
        free_generators=format_words(delta.gog, free_generators(delta)),
    )


def report_step(state: PipelineState) -> Dict[str, Any]:
    """
    Build the run report.

    Args:
        state: Current pipeline state

    Returns:
        State updates with ``report``
    """
    logger.info("=== Report Step ===")
    doc = state.get("document")

    subgroups: List[SubgroupSummary] = []
    for side in ("h", "k"):
        delta, data = state.get(f"delta_{side}"), state.get(f"core_{side}")
        if delta is not None and data is not None:
            subgroups.append(summarize(state[f"{side}_name"], delta, data))

    report = RunReport(
        version=__version__,
        instance_digest=instance_digest(doc) if doc is not None else "",
        seed=state.get("seed", 0),
        subgroups=subgroups,
        bound=state.get("bound"),
        oracle=state.get("oracle", []),
        timings=dict(state.get("timings", {})) if state.get("with_timings") else None,
        errors=list(state.get("errors", [])),
    )

    path = state.get("report_path")
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(canonical_json(report) + "\n", encoding="utf-8")
        logger.info(f"Report written to {target}")

    return {"report": report}
