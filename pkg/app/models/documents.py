"""
Instance Document Models.

This module defines the on-disk instance format:
- EdgeSpec / GraphSpec: the underlying graph Y by positive edges
- EmbeddingSpec: α_e and α_inv(e) for one positive edge
- InstanceDocument: groups, embeddings, base vertex and named subgroups

Groups are given as multiplication tables over 0..n-1 with 0 the identity,
or as the string "trivial". Subgroup generators are words of tokens
"v:g" (element g of the group at vertex v) and "ek+" / "ek-" (the stable
letter of positive edge k or its inverse).
"""
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

GroupSpec = Union[Literal["trivial"], List[List[int]]]


class EdgeSpec(BaseModel):
    """One positive edge of Y."""
    model_config = ConfigDict(extra="forbid")

    src: int = Field(..., ge=0, description="Source vertex")
    dst: int = Field(..., ge=0, description="Target vertex")
    name: Optional[str] = Field(default=None, description="Display label")


class GraphSpec(BaseModel):
    """Underlying graph Y."""
    model_config = ConfigDict(extra="forbid")

    vertices: int = Field(..., ge=1, description="Number of vertices")
    edges: List[EdgeSpec] = Field(default_factory=list, description="Positive edges")
    vertex_names: Optional[List[str]] = Field(default=None, description="Display labels")


class EmbeddingSpec(BaseModel):
    """
    Embeddings of one edge group.

    Attributes:
        alpha: Images in the group at the source vertex
        omega: Images in the group at the target vertex
    """
    model_config = ConfigDict(extra="forbid")

    alpha: List[int] = Field(..., description="α_e into G_src(e)")
    omega: List[int] = Field(..., description="α_inv(e) into G_dst(e)")


class InstanceDocument(BaseModel):
    """
    A graph of finite groups with named subgroups.

    Attributes:
        name: Optional instance name
        graph: Underlying graph
        vertex_groups: One group per vertex
        edge_groups: One group per positive edge
        embeddings: One embedding pair per positive edge
        base_vertex: Base vertex of all loops
        subgroups: Generator words per subgroup name
    """
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = Field(default=None, description="Instance name")
    graph: GraphSpec = Field(..., description="Underlying graph")
    vertex_groups: List[GroupSpec] = Field(..., description="Group per vertex")
    edge_groups: List[GroupSpec] = Field(default_factory=list, description="Group per positive edge")
    embeddings: List[EmbeddingSpec] = Field(default_factory=list, description="Embeddings per positive edge")
    base_vertex: int = Field(default=0, ge=0, description="Base vertex")
    subgroups: Dict[str, List[str]] = Field(default_factory=dict, description="Named generator lists")

    @model_validator(mode="after")
    def check_indices(self) -> "InstanceDocument":
        n = self.graph.vertices
        edges = len(self.graph.edges)
        if len(self.vertex_groups) != n:
            raise ValueError(f"{len(self.vertex_groups)} vertex groups for {n} vertices")
        if len(self.edge_groups) != edges:
            raise ValueError(f"{len(self.edge_groups)} edge groups for {edges} edges")
        if len(self.embeddings) != edges:
            raise ValueError(f"{len(self.embeddings)} embeddings for {edges} edges")
        if self.graph.vertex_names is not None and len(self.graph.vertex_names) != n:
            raise ValueError("one vertex name per vertex is required")
        for k, edge in enumerate(self.graph.edges):
            if edge.src >= n or edge.dst >= n:
                raise ValueError(f"edge {k} references a vertex outside 0..{n - 1}")
        if self.base_vertex >= n:
            raise ValueError(f"base vertex {self.base_vertex} outside 0..{n - 1}")
        for table in list(self.vertex_groups) + list(self.edge_groups):
            if table != "trivial" and any(len(row) != len(table) for row in table):
                raise ValueError("multiplication tables must be square")
        return self
