"""
Serre Graphs Module.

Graphs with a fixed-point-free edge involution, plus the combinatorics built
on them:
- Paths, free reduction and cyclic reduction
- Breadth-first spanning trees and free generators q_e of π₁
- Fundamental rank |E⁺| − |V| + 1
- Cores by leaf pruning, returned with their embedding morphism
- Graph morphisms, local injectivity and isomorphism testing

Directed edges come in pairs: edge 2k is positive and 2k+1 is its inverse,
so ``inv(e) = e ^ 1`` for every graph.
"""
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import MultiDiGraphMatcher, categorical_node_match

from app.config.settings import settings
from app.core.errors import (
    BrokenPath,
    Disconnected,
    IsATree,
    NotAMorphism,
    NotClosed,
    TooLarge,
    UnknownEdge,
    UnknownVertex,
)


def inverse_edge(e: int) -> int:
    return e ^ 1


EdgeLabel = Union[str, Tuple[str, str]]


# === Domain Types ===

@dataclass(frozen=True)
class SerreGraph:
    """
    A finite Serre graph.

    Attributes:
        num_vertices: Vertices are 0..num_vertices-1
        sources: ``sources[e]`` is src(e) for every directed edge e;
            dst(e) is src(inv(e))
        vertex_labels: Optional decoration per vertex
        edge_labels: Optional decoration per directed edge
    """
    num_vertices: int
    sources: Tuple[int, ...]
    vertex_labels: Optional[Tuple[str, ...]] = None
    edge_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if len(self.sources) % 2:
            raise UnknownEdge(len(self.sources))
        for v in self.sources:
            if not 0 <= v < self.num_vertices:
                raise UnknownVertex(v)

    @classmethod
    def from_edges(
        cls,
        num_vertices: int,
        edges: Sequence[Tuple[int, int]],
        vertex_labels: Optional[Sequence[str]] = None,
        edge_labels: Optional[Sequence[EdgeLabel]] = None,
    ) -> "SerreGraph":
        """
        Build a graph from positive edges ``(src, dst)``.

        Edge labels are given per positive edge, either as one string (the
        inverse gets the same string with a trailing ``'``) or as a pair.
        """
        sources: List[int] = []
        for u, v in edges:
            sources.extend((u, v))
        labels: Optional[Tuple[str, ...]] = None
        if edge_labels is not None:
            flat: List[str] = []
            for label in edge_labels:
                if isinstance(label, tuple):
                    flat.extend(label)
                else:
                    flat.extend((label, f"{label}'"))
            labels = tuple(flat)
        return cls(
            num_vertices,
            tuple(sources),
            tuple(vertex_labels) if vertex_labels is not None else None,
            labels,
        )

    # --- structure ---

    @property
    def num_edges(self) -> int:
        """Number of directed edges, 2·|E⁺|."""
        return len(self.sources)

    @property
    def num_positive(self) -> int:
        return len(self.sources) // 2

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @property
    def edges(self) -> range:
        return range(len(self.sources))

    @property
    def positive(self) -> range:
        return range(0, len(self.sources), 2)

    def inv(self, e: int) -> int:
        return e ^ 1

    def src(self, e: int) -> int:
        return self.sources[e]

    def dst(self, e: int) -> int:
        return self.sources[e ^ 1]

    @cached_property
    def out_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """Outgoing directed edges per vertex, ascending."""
        buckets: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for e, v in enumerate(self.sources):
            buckets[v].append(e)
        return tuple(tuple(b) for b in buckets)

    def degree(self, v: int) -> int:
        return len(self.out_edges[v])

    def vertex_label(self, v: int) -> str:
        return self.vertex_labels[v] if self.vertex_labels is not None else str(v)

    def edge_label(self, e: int) -> str:
        if self.edge_labels is not None:
            return self.edge_labels[e]
        return f"e{e >> 1}{'-' if e & 1 else '+'}"


@dataclass(frozen=True)
class Path:
    """A path given by its start vertex and edge sequence."""
    start: int
    edges: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    def end(self, graph: SerreGraph) -> int:
        return graph.dst(self.edges[-1]) if self.edges else self.start

    def inverse(self, graph: SerreGraph) -> "Path":
        return Path(self.end(graph), tuple(e ^ 1 for e in reversed(self.edges)))

    def then(self, other: "Path") -> "Path":
        return Path(self.start, self.edges + other.edges)


def make_path(graph: SerreGraph, start: int, edges: Sequence[int]) -> Path:
    """Validate an edge sequence as a path of ``graph``."""
    if not 0 <= start < graph.num_vertices:
        raise UnknownVertex(start)
    at = start
    for i, e in enumerate(edges):
        if not 0 <= e < graph.num_edges:
            raise UnknownEdge(e)
        if graph.src(e) != at:
            raise BrokenPath(i)
        at = graph.dst(e)
    return Path(start, tuple(edges))


@dataclass(frozen=True)
class GraphMorphism:
    """A graph morphism given by vertex and directed-edge maps."""
    domain: SerreGraph
    codomain: SerreGraph
    vertex_map: Tuple[int, ...]
    edge_map: Tuple[int, ...]

    def __post_init__(self) -> None:
        for e in self.domain.edges:
            image = self.edge_map[e]
            if (
                self.edge_map[e ^ 1] != image ^ 1
                or self.codomain.src(image) != self.vertex_map[self.domain.src(e)]
            ):
                raise NotAMorphism(e)

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        """Composite ``other ∘ self``."""
        return GraphMorphism(
            self.domain,
            other.codomain,
            tuple(other.vertex_map[v] for v in self.vertex_map),
            tuple(other.edge_map[e] for e in self.edge_map),
        )


class CoreResult(NamedTuple):
    graph: SerreGraph
    embedding: GraphMorphism


class LocalInjectivity(NamedTuple):
    ok: bool
    witness: Optional[Tuple[int, int]] = None


# === Paths ===

def reduce_path(path: Path) -> Path:
    """Free reduction: delete every e·inv(e) until none is left."""
    stack: List[int] = []
    for e in path.edges:
        if stack and stack[-1] == e ^ 1:
            stack.pop()
        else:
            stack.append(e)
    return Path(path.start, tuple(stack))


def is_cyclically_reduced(graph: SerreGraph, path: Path) -> bool:
    end = path.end(graph)
    if end != path.start:
        raise NotClosed(path.start, end)
    if not path.edges:
        return True
    if reduce_path(path) != path:
        return False
    return path.edges[0] != path.edges[-1] ^ 1


# === Trees and Rank ===

def _bfs(graph: SerreGraph, root: int, allowed: Optional[FrozenSet[int]] = None) -> Dict[int, int]:
    """Parent edges of a breadth-first search by ascending edge index; root maps to -1."""
    parent = {root: -1}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in graph.out_edges[v]:
            if allowed is not None and (e & ~1) not in allowed:
                continue
            w = graph.dst(e)
            if w not in parent:
                parent[w] = e
                queue.append(w)
    return parent


def check_connected(graph: SerreGraph, root: int = 0) -> None:
    if graph.num_vertices == 0:
        return
    if not 0 <= root < graph.num_vertices:
        raise UnknownVertex(root)
    reached = _bfs(graph, root)
    if len(reached) < graph.num_vertices:
        missing = next(v for v in graph.vertices if v not in reached)
        raise Disconnected(root, missing)


def connected_components(graph: SerreGraph) -> List[Tuple[int, ...]]:
    """Vertex sets of the components, each sorted, ordered by smallest vertex."""
    seen: set = set()
    components = []
    for v in graph.vertices:
        if v in seen:
            continue
        reached = _bfs(graph, v)
        seen.update(reached)
        components.append(tuple(sorted(reached)))
    return components


def spanning_tree(graph: SerreGraph, root: int = 0) -> FrozenSet[int]:
    """
    Breadth-first maximal subtree.

    Returns:
        The positive edges of the tree

    Raises:
        Disconnected: With the root and the first unreachable vertex
    """
    check_connected(graph, root)
    parent = _bfs(graph, root)
    return frozenset(e & ~1 for e in parent.values() if e >= 0)


def fundamental_rank(graph: SerreGraph) -> int:
    check_connected(graph)
    return graph.num_positive - graph.num_vertices + 1


def tree_paths(graph: SerreGraph, root: int, tree: FrozenSet[int]) -> Dict[int, Path]:
    """Tree path r_v from ``root`` to every vertex."""
    parent = _bfs(graph, root, tree)
    if len(parent) < graph.num_vertices:
        missing = next(v for v in graph.vertices if v not in parent)
        raise Disconnected(root, missing)
    paths: Dict[int, Path] = {}
    # dict order is discovery order, so parents come first
    for v, e in parent.items():
        if e < 0:
            paths[v] = Path(v)
        else:
            paths[v] = Path(root, paths[graph.src(e)].edges + (e,))
    return paths


def free_generator_paths(graph: SerreGraph, root: int, tree: FrozenSet[int]) -> List[Path]:
    """
    Free generators q_e = r_src(e) · e · r_dst(e)⁻¹ of π₁(graph, root).

    One reduced closed path per positive non-tree edge, ascending by edge.
    """
    paths = tree_paths(graph, root, tree)
    generators = []
    for e in graph.positive:
        if e in tree:
            continue
        loop = paths[graph.src(e)].then(Path(graph.src(e), (e,))).then(
            paths[graph.dst(e)].inverse(graph)
        )
        generators.append(reduce_path(loop))
    return generators


def degree(graph: SerreGraph, v: int) -> int:
    return graph.degree(v)


# === Subgraphs and Cores ===

def induced_subgraph(
    graph: SerreGraph, vertices: Sequence[int], positive_edges: Sequence[int]
) -> CoreResult:
    """
    Subgraph on the given vertices and positive edges, relabelled in ascending order.

    Returns:
        The subgraph and its inclusion morphism into ``graph``
    """
    vertex_list = sorted(vertices)
    new_index = {v: i for i, v in enumerate(vertex_list)}
    edge_list = sorted(positive_edges)
    sources: List[int] = []
    edge_map: List[int] = []
    for e in edge_list:
        sources.extend((new_index[graph.src(e)], new_index[graph.dst(e)]))
        edge_map.extend((e, e ^ 1))
    sub = SerreGraph(
        len(vertex_list),
        tuple(sources),
        tuple(graph.vertex_labels[v] for v in vertex_list) if graph.vertex_labels else None,
        tuple(graph.edge_labels[e] for e in edge_map) if graph.edge_labels else None,
    )
    return CoreResult(sub, GraphMorphism(sub, graph, tuple(vertex_list), tuple(edge_map)))


def core(graph: SerreGraph) -> CoreResult:
    """
    Largest subgraph of minimum degree ≥ 2, by iterated deletion of leaves.

    Raises:
        Disconnected: Graph is not connected
        IsATree: Graph has no cycle, so its core is empty
    """
    if fundamental_rank(graph) == 0:
        raise IsATree()

    deg = [graph.degree(v) for v in graph.vertices]
    alive = [True] * graph.num_vertices
    queue = deque(v for v in graph.vertices if deg[v] <= 1)
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for e in graph.out_edges[v]:
            w = graph.dst(e)
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    queue.append(w)

    kept = [v for v in graph.vertices if alive[v]]
    edges = [e for e in graph.positive if alive[graph.src(e)] and alive[graph.dst(e)]]
    return induced_subgraph(graph, kept, edges)


# === Morphisms and Isomorphism ===

def is_locally_injective(morphism: GraphMorphism) -> LocalInjectivity:
    """True iff distinct edges leaving a common vertex have distinct images."""
    for v in morphism.domain.vertices:
        seen: Dict[int, int] = {}
        for e in morphism.domain.out_edges[v]:
            image = morphism.edge_map[e]
            if image in seen:
                return LocalInjectivity(False, (seen[image], e))
            seen[image] = e
    return LocalInjectivity(True)


def to_networkx(graph: SerreGraph, decorated: bool = False) -> nx.MultiDiGraph:
    """
    Directed multigraph with one arc per directed edge.

    With ``decorated`` the arcs carry ``(label(e), label(inv e))`` and the
    nodes their label, so matchings also respect decorations.
    """
    g = nx.MultiDiGraph()
    for v in graph.vertices:
        g.add_node(v, label=graph.vertex_label(v) if decorated else "")
    for e in graph.edges:
        label = (graph.edge_label(e), graph.edge_label(e ^ 1)) if decorated else ""
        g.add_edge(graph.src(e), graph.dst(e), label=label)
    return g


def _same_arc_labels(arcs1: Dict, arcs2: Dict) -> bool:
    """Parallel arcs match as label multisets, so {a, a, b} differs from {a, b, b}."""
    return Counter(d["label"] for d in arcs1.values()) == Counter(d["label"] for d in arcs2.values())


def graphs_isomorphic(
    g1: SerreGraph,
    g2: SerreGraph,
    decorated: bool = False,
    max_vertices: Optional[int] = None,
) -> bool:
    """
    Exact isomorphism test respecting src, dst and inv (VF2 backtracking).

    Args:
        g1, g2: Graphs to compare
        decorated: Also match vertex and edge labels
        max_vertices: Size cap (default: settings.max_iso_vertices)

    Raises:
        TooLarge: Either graph exceeds the cap
    """
    cap = settings.max_iso_vertices if max_vertices is None else max_vertices
    for g in (g1, g2):
        if g.num_vertices > cap:
            raise TooLarge(g.num_vertices, cap)
    if (g1.num_vertices, g1.num_edges) != (g2.num_vertices, g2.num_edges):
        return False
    if sorted(map(g1.degree, g1.vertices)) != sorted(map(g2.degree, g2.vertices)):
        return False

    matcher = MultiDiGraphMatcher(
        to_networkx(g1, decorated),
        to_networkx(g2, decorated),
        node_match=categorical_node_match("label", ""),
        edge_match=_same_arc_labels,
    )
    return matcher.is_isomorphic()
