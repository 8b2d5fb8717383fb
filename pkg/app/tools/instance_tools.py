"""
Instance Tools Module.

This module provides tools for:
- Loading, parsing and canonically serializing instance documents
- Building a validated GraphOfGroups from a document (and back)
- Parsing generator words in the S-presentation and printing loop words

Malformed documents raise SchemaError; algebraic problems surface as the
AlgebraError subclasses raised by the core validators.
"""
import hashlib
import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ValidationError

from app.core.errors import SchemaError, UnknownSubgroup, WordSyntaxError
from app.core.finite_group import FiniteGroup, trivial_group, validate_group
from app.core.graph_of_groups import GraphOfGroups, GWord, SPresLetter, StableLetter, VertexLetter, validate_gog
from app.core.serre_graph import SerreGraph
from app.models.documents import EdgeSpec, EmbeddingSpec, GraphSpec, GroupSpec, InstanceDocument
from app.utils.logging import get_logger

logger = get_logger("tools.instance")

VERTEX_TOKEN = re.compile(r"^(\d+):(\d+)$")
STABLE_TOKEN = re.compile(r"^e?(\d+)([+-])$")


# === Documents ===

def canonical_json(data: Union[BaseModel, Dict[str, Any], List[Any]]) -> str:
    """Sorted keys, no insignificant whitespace, UTF-8 text."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json", exclude_none=True)
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def parse_instance(text: str) -> InstanceDocument:
    """
    Parse an instance document from JSON text.

    Raises:
        SchemaError: Invalid JSON or a document that fails validation
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None
    try:
        return InstanceDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "document"
        raise SchemaError(f"{where}: {first['msg']}") from None


def serialize_instance(doc: InstanceDocument) -> str:
    return canonical_json(doc)


def load_instance(path: Union[str, Path]) -> InstanceDocument:
    """Read and parse an instance file."""
    file_path = Path(path)
    logger.info(f"Loading instance: {file_path}")
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"cannot read {file_path}: {e.strerror}") from None
    return parse_instance(text)


def instance_digest(doc: InstanceDocument) -> str:
    """SHA-256 of the canonical serialization."""
    return hashlib.sha256(serialize_instance(doc).encode("utf-8")).hexdigest()


# === Graphs of groups ===

def _group(spec: GroupSpec, max_order: Optional[int]) -> FiniteGroup:
    if spec == "trivial":
        return trivial_group()
    return validate_group(spec, max_order=max_order)


def build_gog(doc: InstanceDocument, max_order: Optional[int] = None) -> GraphOfGroups:
    """
    Validate every group and embedding of a document.

    Raises:
        NotAGroup, GroupTooLarge, NotInjective, NotHomomorphism, Disconnected, SchemaError
    """
    edges = doc.graph.edges
    names = [e.name for e in edges]
    edge_labels = None
    if any(names):
        edge_labels = [
            (name, f"{name}'") if name else (f"e{k}+", f"e{k}-")
            for k, name in enumerate(names)
        ]
    y = SerreGraph.from_edges(
        doc.graph.vertices,
        [(e.src, e.dst) for e in edges],
        vertex_labels=doc.graph.vertex_names,
        edge_labels=edge_labels,
    )

    vertex_groups = [_group(spec, max_order) for spec in doc.vertex_groups]
    edge_groups = [_group(spec, max_order) for spec in doc.edge_groups]
    alpha_maps: List[List[int]] = []
    for embedding in doc.embeddings:
        alpha_maps.extend((embedding.alpha, embedding.omega))

    gog = validate_gog(y, vertex_groups, edge_groups, alpha_maps, doc.base_vertex)
    logger.info(
        f"Instance {doc.name or '(unnamed)'}: |V|={y.num_vertices} |E+|={y.num_positive} "
        f"shape={gog.shape} m'={gog.m_prime}"
    )
    return gog


def _table_spec(group: FiniteGroup) -> GroupSpec:
    return "trivial" if group.is_trivial else group.table.tolist()


def document_from_gog(
    gog: GraphOfGroups,
    subgroups: Optional[Dict[str, List[str]]] = None,
    name: Optional[str] = None,
) -> InstanceDocument:
    """Instance document describing ``gog`` with the given subgroup words."""
    y = gog.y
    edges = []
    for e in y.positive:
        label = y.edge_labels[e] if y.edge_labels is not None else None
        edges.append(EdgeSpec(src=y.src(e), dst=y.dst(e), name=label))
    return InstanceDocument(
        name=name,
        graph=GraphSpec(
            vertices=y.num_vertices,
            edges=edges,
            vertex_names=list(y.vertex_labels) if y.vertex_labels is not None else None,
        ),
        vertex_groups=[_table_spec(g) for g in gog.vertex_groups],
        edge_groups=[_table_spec(gog.edge_groups[e]) for e in y.positive],
        embeddings=[
            EmbeddingSpec(alpha=list(gog.alpha(e).images), omega=list(gog.omega(e).images))
            for e in y.positive
        ],
        base_vertex=gog.base_vertex,
        subgroups=dict(subgroups or {}),
    )


# === Words ===

def tokenize_word(text: str) -> List[SPresLetter]:
    """
    Split a word into S-presentation letters.

    Raises:
        WordSyntaxError: With the first token that is neither "v:g" nor "ek±"
    """
    letters: List[SPresLetter] = []
    for token in text.split():
        if m := VERTEX_TOKEN.match(token):
            letters.append(VertexLetter(int(m.group(1)), int(m.group(2))))
        elif m := STABLE_TOKEN.match(token):
            letters.append(StableLetter(int(m.group(1)), 1 if m.group(2) == "+" else -1))
        else:
            raise WordSyntaxError(text, token)
    return letters


def parse_word(gog: GraphOfGroups, text: str) -> GWord:
    """S-presentation word → normal-form loop at the base vertex."""
    return gog.from_spres(tokenize_word(text))


def subgroup_generators(doc: InstanceDocument, gog: GraphOfGroups, name: str) -> List[GWord]:
    """
    Generators of a named subgroup in loop form.

    Raises:
        UnknownSubgroup: No subgroup with that name
    """
    if name not in doc.subgroups:
        raise UnknownSubgroup(name)
    return [parse_word(gog, text) for text in doc.subgroups[name]]


def spres_word(gog: GraphOfGroups, w: GWord) -> str:
    """
    S-presentation spelling of a loop at the base vertex.

    g₀ e₁ g₁ … e_n g_n equals the product of the vertex letters (v_i, g_i)
    and stable letters of e_i, since the tree paths cancel in between.
    """
    tokens = []
    vertices = gog.vertex_sequence(w)
    for i, g in enumerate(w.coefficients):
        if g != 0:
            tokens.append(f"{vertices[i]}:{g}")
        if i < len(w.edges):
            e = w.edges[i]
            tokens.append(f"e{e >> 1}{'-' if e & 1 else '+'}")
    return " ".join(tokens)


def format_word(gog: GraphOfGroups, w: GWord) -> str:
    """Loop form g₀ e₁ g₁ … with element names and edge labels."""
    vertices = gog.vertex_sequence(w)
    parts = [gog.group_at(vertices[0]).name(w.coefficients[0])]
    for i, e in enumerate(w.edges):
        parts.append(gog.y.edge_label(e))
        parts.append(gog.group_at(vertices[i + 1]).name(w.coefficients[i + 1]))
    return " ".join(parts)


def format_words(gog: GraphOfGroups, words: Sequence[GWord]) -> List[str]:
    return [format_word(gog, w) for w in words]
