"""
Pipeline stages.

Each stage is a LangGraph node: it reads the shared PipelineState and
returns a dict of updates.
"""
from app.stages.intersection_stage import intersection_step
from app.stages.oracle_stage import oracle_step
from app.stages.report_stage import report_step, summarize
from app.stages.states import PipelineState
from app.stages.subgroup_stage import fold_h_step, fold_k_step, load_step

__all__ = [
    "PipelineState",
    "load_step",
    "fold_h_step",
    "fold_k_step",
    "intersection_step",
    "oracle_step",
    "report_step",
    "summarize",
]
