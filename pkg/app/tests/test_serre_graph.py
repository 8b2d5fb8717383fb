"""
Tests for Serre graphs, paths, cores and isomorphism.
"""
import pytest
from hypothesis import given, strategies as st

from app.core.errors import BrokenPath, Disconnected, IsATree, NotAMorphism, NotClosed
from app.core.serre_graph import (
    GraphMorphism,
    Path,
    SerreGraph,
    core,
    free_generator_paths,
    fundamental_rank,
    graphs_isomorphic,
    is_cyclically_reduced,
    is_locally_injective,
    make_path,
    reduce_path,
    spanning_tree,
)


def theta_with_tail() -> SerreGraph:
    return SerreGraph.from_edges(4, [(0, 1), (0, 1), (0, 1), (1, 2), (2, 3)])


def rose(n: int) -> SerreGraph:
    return SerreGraph.from_edges(1, [(0, 0)] * n)


def test_inverse_pairs_and_degrees():
    g = theta_with_tail()
    assert g.num_positive == 5
    assert g.src(0) == 0 and g.dst(0) == 1
    assert g.src(1) == 1 and g.dst(1) == 0
    assert g.degree(1) == 4
    assert rose(2).degree(0) == 4


def test_core_prunes_tail():
    g = theta_with_tail()
    result = core(g)
    assert result.graph.num_vertices == 2
    assert result.graph.num_positive == 3
    assert result.embedding.vertex_map == (0, 1)
    assert fundamental_rank(result.graph) == fundamental_rank(g) == 2


def test_core_of_tree_raises():
    with pytest.raises(IsATree):
        core(SerreGraph.from_edges(3, [(0, 1), (1, 2)]))


def test_disconnected_graph():
    g = SerreGraph.from_edges(3, [(0, 1)])
    with pytest.raises(Disconnected) as info:
        fundamental_rank(g)
    assert info.value.exit_code == 3


def test_paths():
    g = rose(2)
    assert reduce_path(Path(0, (0, 2, 3, 1))) == Path(0, ())
    assert is_cyclically_reduced(g, Path(0, (0, 2)))
    assert not is_cyclically_reduced(g, Path(0, (0, 1)))
    # x y x⁻¹ is reduced but not cyclically reduced
    assert not is_cyclically_reduced(g, Path(0, (0, 2, 1)))
    with pytest.raises(NotClosed):
        is_cyclically_reduced(theta_with_tail(), Path(0, (0,)))
    with pytest.raises(BrokenPath):
        make_path(theta_with_tail(), 0, (0, 0))


def test_free_generator_paths_of_theta():
    g = SerreGraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
    tree = spanning_tree(g, 0)
    assert tree == frozenset({0})
    assert free_generator_paths(g, 0, tree) == [Path(0, (2, 1)), Path(0, (4, 1))]


def test_local_injectivity():
    circle2 = SerreGraph.from_edges(2, [(0, 1), (1, 0)])
    covering = GraphMorphism(circle2, rose(1), (0, 0), (0, 1, 0, 1))
    assert is_locally_injective(covering).ok

    fold = GraphMorphism(rose(2), rose(1), (0,), (0, 1, 0, 1))
    result = is_locally_injective(fold)
    assert not result.ok
    assert result.witness == (0, 2)


def test_morphism_validation_and_composition():
    circle2 = SerreGraph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(NotAMorphism):
        GraphMorphism(circle2, rose(1), (0, 0), (0, 0, 0, 1))

    swap = GraphMorphism(circle2, circle2, (1, 0), (2, 3, 0, 1))
    covering = GraphMorphism(circle2, rose(1), (0, 0), (0, 1, 0, 1))
    assert swap.then(covering).edge_map == (0, 1, 0, 1)
    assert swap.then(swap).vertex_map == (0, 1)


def test_isomorphism_respects_labels():
    a = SerreGraph.from_edges(2, [(0, 1), (0, 1)], edge_labels=["x", "y"])
    b = SerreGraph.from_edges(2, [(0, 1), (0, 1)], edge_labels=["y", "x"])
    c = SerreGraph.from_edges(2, [(0, 1), (0, 1)], edge_labels=["y", "z"])
    assert graphs_isomorphic(a, b)
    assert graphs_isomorphic(a, b, decorated=True)
    assert graphs_isomorphic(a, c)
    assert not graphs_isomorphic(a, c, decorated=True)
    assert not graphs_isomorphic(a, rose(2))


def test_isomorphism_counts_parallel_labels():
    aab = SerreGraph.from_edges(2, [(0, 1), (0, 1), (0, 1)], edge_labels=["a", "a", "b"])
    abb = SerreGraph.from_edges(2, [(0, 1), (0, 1), (0, 1)], edge_labels=["a", "b", "b"])
    bab = SerreGraph.from_edges(2, [(0, 1), (0, 1), (0, 1)], edge_labels=["b", "a", "b"])
    assert graphs_isomorphic(aab, abb)
    assert not graphs_isomorphic(aab, abb, decorated=True)
    assert graphs_isomorphic(abb, bab, decorated=True)


@st.composite
def connected_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    tree = [(draw(st.integers(min_value=0, max_value=i - 1)), i) for i in range(1, n)]
    extra = draw(st.lists(
        st.tuples(st.integers(min_value=0, max_value=n - 1), st.integers(min_value=0, max_value=n - 1)),
        max_size=4,
    ))
    return SerreGraph.from_edges(n, tree + extra), len(extra)


@given(connected_graphs())
def test_rank_counts_non_tree_edges(case):
    graph, extra = case
    assert fundamental_rank(graph) == extra
    assert len(spanning_tree(graph)) == graph.num_vertices - 1


@given(connected_graphs())
def test_core_properties(case):
    graph, extra = case
    if extra == 0:
        return
    result = core(graph)
    psi = result.graph
    assert min(psi.degree(v) for v in psi.vertices) >= 2
    assert fundamental_rank(psi) == extra
    again = core(psi).graph
    assert (again.num_vertices, again.num_positive) == (psi.num_vertices, psi.num_positive)
    assert is_locally_injective(result.embedding).ok


@given(connected_graphs())
def test_free_generators_are_reduced_loops(case):
    graph, extra = case
    tree = spanning_tree(graph)
    loops = free_generator_paths(graph, 0, tree)
    assert len(loops) == extra
    for loop in loops:
        assert loop.start == 0 and loop.end(graph) == 0
        assert reduce_path(loop) == loop
        assert len(loop) >= 1
