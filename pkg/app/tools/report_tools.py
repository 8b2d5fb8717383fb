"""
Report Tools Module.

This module provides tools for:
- Rendering text reports from Jinja2 templates
- Exporting Serre graphs, subgroup graphs and fiber products as DOT
- Writing report files to the output directory

Templates live in ``app/templates`` next to this package and are rendered
with StrictUndefined so a missing field fails loudly.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from app.config.settings import settings
from app.core.graph_of_groups import GraphOfGroups
from app.core.intersection import FiberProduct, PairDiagnostic
from app.core.serre_graph import SerreGraph
from app.core.subgroup_folding import BlockGraph, CoreData
from app.models.documents import InstanceDocument
from app.models.reports import BoundReport, OracleReport, SubgroupSummary
from app.utils.logging import get_logger

logger = get_logger("tools.report")

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"


def _get_template_env() -> Environment:
    """
    Get configured Jinja2 environment.

    Returns:
        Jinja2 Environment over the package template directory
    """
    return Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        undefined=StrictUndefined,
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def render_text(template_name: str, **context: Any) -> str:
    template = _get_template_env().get_template(template_name)
    return template.render(**context)


def write_output(text: str, filename: str, output_dir: Optional[Path] = None) -> Path:
    """
    Write a report file.

    Args:
        text: File contents
        filename: Name (or relative path) inside the output directory
        output_dir: Defaults to settings.output_path

    Returns:
        Absolute path of the written file
    """
    target = Path(filename)
    if not target.is_absolute():
        target = (output_dir or settings.output_path) / target
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {target}")
    return target.resolve()


# === Shape ===

def describe_shape(gog: GraphOfGroups) -> Dict[str, Any]:
    """Construction summary: kind, amalgam and HNN step counts, m′, n′ and χ."""
    y = gog.y
    if gog.is_free_group:
        kind = "free group"
    elif gog.has_trivial_edge_groups:
        kind = "free product"
    else:
        kind = {"amalgam": "amalgamated product", "hnn": "HNN extension"}.get(gog.shape, "graph of groups")
    return {
        "kind": kind,
        "shape": gog.shape,
        "vertices": y.num_vertices,
        "edges": y.num_positive,
        "amalgam_steps": y.num_vertices - 1,
        "hnn_steps": y.num_positive - y.num_vertices + 1,
        "m_prime": gog.m_prime,
        "n_upper": gog.n_upper,
        "euler_characteristic": str(gog.euler_characteristic),
        "vertex_orders": [g.order for g in gog.vertex_groups],
        "edge_orders": [gog.edge_groups[e].order for e in y.positive],
    }


# === Text reports ===

def render_validate(doc: InstanceDocument, gog: GraphOfGroups) -> str:
    return render_text(
        "validate.txt.j2",
        name=doc.name or "(unnamed)",
        shape=describe_shape(gog),
        subgroups={name: len(words) for name, words in sorted(doc.subgroups.items())},
    )


def render_rank(summary: SubgroupSummary, show_generators: bool = False) -> str:
    return render_text("rank.txt.j2", s=summary, show_generators=show_generators)


def render_intersect(
    report: BoundReport,
    h_name: str,
    k_name: str,
    diagnostics: Optional[Sequence[PairDiagnostic]] = None,
) -> str:
    return render_text(
        "intersect.txt.j2",
        r=report,
        h_name=h_name,
        k_name=k_name,
        diagnostics=list(diagnostics) if diagnostics is not None else None,
    )


def render_oracle(reports: Sequence[OracleReport]) -> str:
    return render_text("oracle.txt.j2", reports=list(reports))


def render_member(subgroup: str, word: str, folded: bool, brute: bool, length: int) -> str:
    return render_text(
        "member.txt.j2", subgroup=subgroup, word=word, folded=folded, brute=brute, length=length
    )


def render_corpus(summary: Dict[str, Any]) -> str:
    return render_text("corpus.txt.j2", **summary)


def render_timings(timings: Dict[str, float]) -> str:
    return "".join(f"timing {name}: {seconds:.3f}s\n" for name, seconds in sorted(timings.items()))


# === DOT ===

def _dot(name: str, vertices: List[Dict[str, Any]], edges: List[Dict[str, Any]]) -> str:
    return render_text("graph.dot.j2", name=name, vertices=vertices, edges=edges)


def serre_graph_dot(graph: SerreGraph, name: str = "graph") -> str:
    """One DOT edge per positive edge, labelled with its decoration."""
    vertices = [{"id": v, "label": graph.vertex_label(v)} for v in graph.vertices]
    edges = [
        {"src": graph.src(e), "dst": graph.dst(e), "label": graph.edge_label(e), "bold": False}
        for e in graph.positive
    ]
    return _dot(name, vertices, edges)


def block_graph_dot(graph: BlockGraph, name: str = "delta", core: Optional[CoreData] = None) -> str:
    """Δ(H) with block types and packet anchors; core packets drawn bold."""
    y = graph.gog.y
    in_core = set()
    if core is not None and core.psi is not None:
        in_core = {core.embedding.edge_map[e] >> 1 for e in core.psi.positive}
    vertices = [
        {"id": b, "label": f"B{b}:{y.vertex_label(t)}"} for b, t in enumerate(graph.block_types)
    ]
    edges = [
        {
            "src": p.source,
            "dst": p.target,
            "label": f"{y.edge_label(p.edge)} ({p.anchor[0]},{p.anchor[1]})",
            "bold": i in in_core,
        }
        for i, p in enumerate(graph.packets)
    ]
    return _dot(name, vertices, edges)


def fiber_product_dot(fp: FiberProduct, name: str = "fiber", base_only: bool = True) -> str:
    """Fiber product with the projected packets of Δ(H) and Δ(K) as tail and head labels."""
    y = fp.gog.y
    keep = set(fp.base_component) if base_only else set(range(len(fp.blocks)))
    vertices = [
        {"id": i, "label": f"({b.left},{b.right},{b.offset}):{y.vertex_label(fp.left.block_types[b.left])}"}
        for i, b in enumerate(fp.blocks) if i in keep
    ]
    edges = [
        {
            "src": p.source,
            "dst": p.target,
            "label": y.edge_label(p.edge),
            "tail": f"p{p.left}",
            "head": f"q{p.right}",
            "bold": False,
        }
        for p in fp.packets if p.source in keep
    ]
    return _dot(name, vertices, edges)
