"""Document and report models."""

from app.models.documents import EdgeSpec, EmbeddingSpec, GraphSpec, InstanceDocument
from app.models.reports import BoundReport, OracleReport, RunReport, SubgroupSummary, Verdict

__all__ = [
    "BoundReport",
    "EdgeSpec",
    "EmbeddingSpec",
    "GraphSpec",
    "InstanceDocument",
    "OracleReport",
    "RunReport",
    "SubgroupSummary",
    "Verdict",
]
