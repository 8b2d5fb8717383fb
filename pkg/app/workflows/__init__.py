"""Workflows package."""

from app.workflows.corpus import run_corpus
from app.workflows.intersection_workflow import app, get_mermaid_diagram, run_pipeline

__all__ = ["app", "run_pipeline", "run_corpus", "get_mermaid_diagram"]
