"""
Tests for text and DOT rendering.
"""
from app.core.intersection import fiber_product
from app.core.serre_graph import SerreGraph
from app.core.subgroup_folding import core_of, subgroup_graph
from app.tools.fixtures import get_fixture
from app.tools.report_tools import (
    block_graph_dot,
    describe_shape,
    fiber_product_dot,
    render_timings,
    serre_graph_dot,
    write_output,
)


def test_serre_graph_dot_collapses_inverse_pairs():
    graph = SerreGraph.from_edges(2, [(0, 1), (1, 1)], vertex_labels=["a", "b"], edge_labels=["s", "t"])
    text = serre_graph_dot(graph, name="y")
    assert text.startswith('digraph "y"')
    assert text.count("->") == 2
    assert 'n0 [label="a"]' in text


def test_block_graph_dot_marks_core(z2z3):
    delta = subgroup_graph(z2z3.gog, z2z3.generators("kernel"))
    text = block_graph_dot(delta, core=core_of(delta))
    assert text.count("->") == len(delta.packets)
    assert text.count("penwidth=2") == 6


def test_fiber_product_dot_labels_projections(f2):
    left = subgroup_graph(f2.gog, f2.generators("x"))
    right = subgroup_graph(f2.gog, f2.generators("xsq"))
    text = fiber_product_dot(fiber_product(left, right))
    assert "taillabel=" in text and "headlabel=" in text
    assert text.count("->") == 2


def test_describe_shape():
    assert describe_shape(get_fixture("f2_rose").gog)["kind"] == "free group"
    assert describe_shape(get_fixture("z2_z3").gog)["kind"] == "free product"
    assert describe_shape(get_fixture("z4_amalg_z6").gog)["kind"] == "amalgamated product"
    shape = describe_shape(get_fixture("z4_hnn_z2").gog)
    assert shape["kind"] == "HNN extension"
    assert shape["hnn_steps"] == 1
    assert shape["amalgam_steps"] == 0


def test_render_timings():
    assert render_timings({"load": 0.5, "fold_h": 0.25}) == "timing fold_h: 0.250s\ntiming load: 0.500s\n"


def test_write_output_relative_to_output_dir(tmp_path):
    target = write_output("digraph {}\n", "graphs/a.dot", output_dir=tmp_path)
    assert target == (tmp_path / "graphs" / "a.dot").resolve()
    assert target.read_text(encoding="utf-8") == "digraph {}\n"
