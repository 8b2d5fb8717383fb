"""
Report Models.

This module defines:
- Verdict: one checked inequality or identity
- BoundReport: rank data, multiplicity bounds and every verdict for a pair H, K
- OracleReport: brute-force corroboration of a folding result
- RunReport: everything one pipeline run produces, serializable as canonical JSON
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class Verdict(BaseModel):
    """
    A single checked statement.

    Attributes:
        name: Stable identifier used in reports and tests
        holds: Outcome of the check
        lhs: Left-hand side value (for inequalities and identities)
        rhs: Right-hand side value
        gate: False for informational checks that never fail a run
        detail: First counterexample or context, empty when unremarkable
    """
    name: str = Field(..., description="Stable verdict identifier")
    holds: bool = Field(..., description="Outcome of the check")
    lhs: Optional[int] = Field(default=None, description="Left-hand side")
    rhs: Optional[int] = Field(default=None, description="Right-hand side")
    gate: bool = Field(default=True, description="Whether a failure fails the run")
    detail: str = Field(default="", description="Counterexample or context")


class BoundReport(BaseModel):
    """
    Intersection rank bound report for subgroups H and K.

    Attributes:
        rank_h, rank_k, rank_hk: Ranks of H, K and H∩K
        reduced_rank_h, reduced_rank_k, reduced_rank_hk: Reduced ranks r̄
        degrees_h, degrees_k, degrees_hk: Core degree profiles (descending)
        m_prime: Largest edge-group order
        m_lower: Largest observed multiplicity (a lower bound for m)
        n_upper: Largest vertex-group order
        bound: 6·m′·r̄(H)·r̄(K)
        shape: 'amalgam', 'hnn' or 'general'
        verdicts: Every check, gates first
    """
    rank_h: int = Field(..., description="Rank of H")
    rank_k: int = Field(..., description="Rank of K")
    rank_hk: int = Field(..., description="Rank of H∩K")
    reduced_rank_h: int = Field(..., description="Reduced rank of H")
    reduced_rank_k: int = Field(..., description="Reduced rank of K")
    reduced_rank_hk: int = Field(..., description="Reduced rank of H∩K")
    degrees_h: List[int] = Field(default_factory=list, description="Core degrees of H")
    degrees_k: List[int] = Field(default_factory=list, description="Core degrees of K")
    degrees_hk: List[int] = Field(default_factory=list, description="Core degrees of H∩K")
    m_prime: int = Field(..., description="Largest edge-group order")
    m_lower: int = Field(..., description="Largest observed multiplicity")
    n_upper: int = Field(..., description="Largest vertex-group order")
    bound: int = Field(..., description="6·m′·r̄(H)·r̄(K)")
    shape: str = Field(..., description="Graph-of-groups shape")
    verdicts: List[Verdict] = Field(default_factory=list, description="All checks")

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts if v.gate)

    @property
    def failed(self) -> List[str]:
        return [v.name for v in self.verdicts if v.gate and not v.holds]

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


class SubgroupSummary(BaseModel):
    """Rank data of one folded subgroup."""
    name: str = Field(..., description="Subgroup name in the instance")
    rank: int = Field(..., description="Rank r")
    reduced_rank: int = Field(..., description="Reduced rank r̄")
    blocks: int = Field(..., description="Blocks of Δ(H)")
    packets: int = Field(..., description="Packets of Δ(H)")
    core_vertices: int = Field(..., description="|V(Ψ(H))|")
    core_edges: int = Field(..., description="|E(Ψ(H))⁺|")
    free_generators: List[str] = Field(default_factory=list, description="Free basis in loop form")


class OracleReport(BaseModel):
    """
    Brute-force corroboration of a folding result.

    ``verdict`` is 'corroborated' when the quotient stabilized and its core
    matches the folded core, 'mismatch' when it stabilized but disagrees and
    'inconclusive' otherwise.
    """
    subgroup: str = Field(..., description="Subgroup name")
    radius: int = Field(..., description="Ball radius R")
    length: int = Field(..., description="Generator product length L")
    ball_vertices: int = Field(..., description="Vertices in the inner ball of radius R//2")
    elements: int = Field(..., description="Enumerated subgroup elements")
    stabilized: bool = Field(..., description="Inner quotient stable under R+2, L+2")
    isomorphic: Optional[bool] = Field(default=None, description="Quotient core ≅ folded core")
    rank: Optional[int] = Field(default=None, description="Rank read from the quotient core")
    stab_count_lower: Optional[int] = Field(default=None, description="Lower bound for m")
    fixed_vertex: Optional[str] = Field(default=None, description="Ball vertex fixed by a nontrivial element")
    verdict: str = Field(..., description="corroborated, mismatch or inconclusive")


class RunReport(BaseModel):
    """Full record of one pipeline run."""
    version: str = Field(..., description="Tool version")
    instance_digest: str = Field(..., description="SHA-256 of the canonical instance JSON")
    seed: int = Field(..., description="Seed in effect")
    subgroups: List[SubgroupSummary] = Field(default_factory=list, description="Per-subgroup rank data")
    bound: Optional[BoundReport] = Field(default=None, description="Intersection bound report")
    oracle: List[OracleReport] = Field(default_factory=list, description="Oracle corroboration")
    timings: Optional[Dict[str, float]] = Field(default=None, description="Seconds per stage")
    errors: List[str] = Field(default_factory=list, description="Errors recorded by the pipeline")
