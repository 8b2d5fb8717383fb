"""
Tree Oracle Module.

Brute-force view of the Bass-Serre tree at bounded depth, used to corroborate
the folding pipeline. This module provides:
- build_ball: the ball of radius R around the base vertex, labelled by normal forms
- enumerate_subgroup: products of at most L generators
- quotient_ball / stabilized_quotient: the inner ball modulo those products
- brute_member: one-sided membership by enumeration
- stab_count_lower: a lower bound for max |Stab(x) ∩ HK| over edges x
- act_on_vertex / find_fixed_vertex: the action and free-action witnesses

A tree vertex gG_v is labelled by the normal form of g with its last
coefficient dropped; the path of that normal form is the geodesic from the
base vertex.
"""
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from app.config.settings import settings
from app.core.errors import BallTooLarge, RadiusTooLarge, SetTooLarge
from app.core.graph_of_groups import GraphOfGroups, GWord
from app.core.serre_graph import (
    CoreResult,
    GraphMorphism,
    SerreGraph,
    core,
    fundamental_rank,
    graphs_isomorphic,
)
from app.utils.logging import get_logger

logger = get_logger("core.oracle")

Label = Tuple[Tuple[int, ...], Tuple[int, ...]]


# === Domain Types ===

@dataclass(frozen=True, eq=False)
class TreeBall:
    """
    Ball of radius ``radius`` in the Bass-Serre tree around the base vertex.

    Vertex 0 is the base vertex; vertex c > 0 is joined to ``parents[c]`` by
    positive edge 2(c−1), directed from parent to child with Y-edge ``steps[c][1]``.

    Attributes:
        gog: Ambient graph of groups
        radius: Depth R
        labels: (coefficients, edges) normal-form label per vertex
        parents: Parent vertex (−1 for the base vertex)
        steps: (transversal element, Y-edge) leading from the parent
        depths: Distance from the base vertex
        types: Vertex of Y under each ball vertex
    """
    gog: GraphOfGroups
    radius: int
    labels: Tuple[Label, ...]
    parents: Tuple[int, ...]
    steps: Tuple[Tuple[int, int], ...]
    depths: Tuple[int, ...]
    types: Tuple[int, ...]
    index: Dict[Label, int] = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @cached_property
    def graph(self) -> SerreGraph:
        return self.subtree(self.radius)

    def subtree(self, radius: int) -> SerreGraph:
        """
        The ball of a smaller radius as a graph.

        Vertices are numbered breadth first, so the smaller ball keeps the same
        vertex numbers and its positive edges are 2(c−1) for its vertices c > 0.
        """
        y = self.gog.y
        n = bisect_right(self.depths, radius)
        return SerreGraph.from_edges(
            n,
            [(self.parents[c], c) for c in range(1, n)],
            vertex_labels=[y.vertex_label(self.types[v]) for v in range(n)],
            edge_labels=[
                (y.edge_label(self.steps[c][1]), y.edge_label(self.steps[c][1] ^ 1))
                for c in range(1, n)
            ],
        )

    def word(self, vertex: int) -> GWord:
        """Coset representative of a vertex as a word from the base vertex."""
        coefficients, edges = self.labels[vertex]
        return GWord(self.gog.base_vertex, coefficients + (0,), edges)

    def vertex_of(self, w: GWord) -> Optional[int]:
        """Ball vertex w·G_v for a word w from the base vertex, if inside the ball."""
        nf = self.gog.normal_form(w)
        return self.index.get((nf.coefficients[:-1], nf.edges))

    @cached_property
    def child_lists(self) -> Tuple[Tuple[int, ...], ...]:
        lists: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for c in range(1, self.num_vertices):
            lists[self.parents[c]].append(c)
        return tuple(map(tuple, lists))

    def children(self, vertex: int) -> List[int]:
        return list(self.child_lists[vertex])

    def describe(self, vertex: int) -> str:
        coefficients, edges = self.labels[vertex]
        y = self.gog.y
        parts = [str(g) + " " + y.edge_label(e) for g, e in zip(coefficients, edges)]
        return " ".join(parts) if parts else "base"


@dataclass(frozen=True)
class ElementSet:
    """
    Normal-form elements found by enumeration.

    Attributes:
        elements: Distinct normal forms in discovery order, identity first
        length: Generator product length L used
    """
    elements: Tuple[GWord, ...]
    length: int

    @cached_property
    def members(self) -> FrozenSet[GWord]:
        return frozenset(self.elements)

    def __contains__(self, w: object) -> bool:
        return w in self.members

    def __len__(self) -> int:
        return len(self.elements)


class QuotientBall(NamedTuple):
    """
    Inner ball modulo the identifications found.

    Attributes:
        graph: Quotient graph
        projection: Inner ball → quotient
        inner_radius: Radius of the inner ball
        core: Core of the quotient with its embedding, or None for a tree
    """
    graph: SerreGraph
    projection: GraphMorphism
    inner_radius: int
    core: Optional[CoreResult]

    @property
    def rank(self) -> int:
        return fundamental_rank(self.graph)


class OracleRun(NamedTuple):
    ball: TreeBall
    elements: ElementSet
    quotient: QuotientBall
    stabilized: bool


# === Ball ===

def build_ball(gog: GraphOfGroups, radius: int, max_vertices: Optional[int] = None) -> TreeBall:
    """
    Every tree vertex within distance ``radius`` of the base vertex.

    Children of a vertex over v are reached by (t, e) with e leaving v and t
    in the transversal of α_e, except the step straight back to the parent.

    Raises:
        RadiusTooLarge: radius above settings.max_ball_radius
        BallTooLarge: more than ``max_vertices`` vertices
    """
    if radius > settings.max_ball_radius:
        raise RadiusTooLarge(radius, settings.max_ball_radius)
    cap = settings.max_ball_vertices if max_vertices is None else max_vertices

    base = gog.base_vertex
    labels: List[Label] = [((), ())]
    parents, steps, depths, types = [-1], [(0, -1)], [0], [base]

    frontier = [0]
    for depth in range(1, radius + 1):
        nxt = []
        for u in frontier:
            coefficients, edges = labels[u]
            back = edges[-1] ^ 1 if edges else -1
            for e in gog.y.out_edges[types[u]]:
                for t in gog.alpha(e).transversal:
                    if e == back and t == 0:
                        continue
                    labels.append((coefficients + (t,), edges + (e,)))
                    parents.append(u)
                    steps.append((t, e))
                    depths.append(depth)
                    types.append(gog.y.dst(e))
                    nxt.append(len(labels) - 1)
            if len(labels) > cap:
                raise BallTooLarge(len(labels), cap)
        frontier = nxt

    index = {label: i for i, label in enumerate(labels)}
    logger.debug(f"ball of radius {radius}: {len(labels)} vertices")
    return TreeBall(
        gog, radius, tuple(labels), tuple(parents), tuple(steps), tuple(depths), tuple(types), index
    )


def act_on_vertex(ball: TreeBall, h: GWord, vertex: int) -> Optional[int]:
    """The ball vertex h·vertex, or None when it lies outside the ball."""
    return ball.vertex_of(ball.gog.concat(h, ball.word(vertex)))


def find_fixed_vertex(ball: TreeBall, hs: ElementSet) -> Optional[Tuple[GWord, int]]:
    """
    A nontrivial element together with a ball vertex it fixes.

    An elliptic h fixes the midpoint of the geodesic from the base vertex to
    its translate, which is the half-length prefix of its normal form.
    """
    gog = ball.gog
    for h in hs.elements:
        if h.is_trivial or len(h) % 2:
            continue
        half = len(h) // 2
        vertex = ball.index.get((h.coefficients[:half], h.edges[:half]))
        if vertex is not None and act_on_vertex(ball, h, vertex) == vertex:
            logger.debug(f"fixed vertex {ball.describe(vertex)} for an element of length {len(h)}")
            return h, vertex
    return None


# === Subgroup elements ===

def enumerate_subgroup(
    gog: GraphOfGroups,
    generators: Sequence[GWord],
    length: int,
    max_length: Optional[int] = None,
    max_elements: Optional[int] = None,
) -> ElementSet:
    """
    All products of at most ``length`` generators and inverses.

    With ``max_length``, elements with more edges are neither kept nor
    extended; the set is then a truncation.

    Raises:
        SetTooLarge: More than ``max_elements`` elements
    """
    cap = settings.max_element_set if max_elements is None else max_elements
    letters: List[GWord] = []
    for g in generators:
        for w in (gog.normal_form(g), gog.invert(g)):
            if w not in letters:
                letters.append(w)

    identity = gog.identity()
    seen = {identity}
    order = [identity]
    frontier = [identity]
    for _ in range(length):
        nxt = []
        for w in frontier:
            for a in letters:
                p = gog.multiply(w, a)
                if p in seen or (max_length is not None and len(p) > max_length):
                    continue
                seen.add(p)
                order.append(p)
                nxt.append(p)
                if len(seen) > cap:
                    raise SetTooLarge(len(seen), cap)
        frontier = nxt
    return ElementSet(tuple(order), length)


def brute_member(gog: GraphOfGroups, generators: Sequence[GWord], w: GWord, length: int) -> bool:
    """True iff w is a product of at most ``length`` generators; False means not found."""
    return gog.normal_form(w) in enumerate_subgroup(gog, generators, length)


# === Quotients ===

class _UnionFind:
    def __init__(self) -> None:
        self.parent: Dict[int, int] = {}

    def find(self, x: int) -> int:
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while x != root:
            self.parent[x], x = root, self.parent.get(x, x)
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _inner_images(ball: TreeBall, h: GWord, radius: int) -> Dict[int, int]:
    """
    Vertices u within ``radius`` whose image h·u is also within ``radius``,
    mapped to that image.

    Images are carried down the tree edge by edge. For u = gG_v the product
    h·g is kept as (label of h·u, leftover coefficient at its vertex); moving
    to a child by (t, e) decomposes leftover·t along α_e, which either steps
    back up the label or extends it by one edge. A subtree is cut as soon as
    depth(u) + depth(h·u) exceeds 2·radius: a descendant k steps further down
    has its image at depth at least depth(h·u) − k.
    """
    gog = ball.gog
    images: Dict[int, int] = {}
    stack = [(0, h.coefficients[:-1], h.edges, h.coefficients[-1])]
    while stack:
        u, coefficients, edges, leftover = stack.pop()
        if ball.depths[u] + len(edges) > 2 * radius:
            continue
        if len(edges) <= radius:
            images[u] = ball.index[(coefficients, edges)]
        if ball.depths[u] == radius:
            continue
        group = gog.vertex_groups[ball.types[u]]
        for c in ball.child_lists[u]:
            t, e = ball.steps[c]
            rep, a = gog.alpha(e).decompose(group.mul(leftover, t))
            pushed = gog.omega(e)(a)
            if edges and e == edges[-1] ^ 1 and rep == 0:
                up = gog.vertex_groups[ball.types[c]].mul(coefficients[-1], pushed)
                stack.append((c, coefficients[:-1], edges[:-1], up))
            else:
                stack.append((c, coefficients + (rep,), edges + (e,), pushed))
    return images


def quotient_ball(ball: TreeBall, hs: ElementSet, inner_radius: Optional[int] = None) -> QuotientBall:
    """
    Identify u with h·u for h in ``hs`` whenever both lie in the inner ball,
    and the same for edges.

    The inner radius defaults to R//2. Only elements with at most twice that
    many edges can move an inner vertex to an inner vertex; each pair
    {h, h⁻¹} is applied once.
    """
    gog = ball.gog
    radius = ball.radius // 2 if inner_radius is None else min(inner_radius, ball.radius)
    inner = range(bisect_right(ball.depths, radius))

    vertices, arcs = _UnionFind(), _UnionFind()
    applied = set()
    for h in hs.elements:
        if h.is_trivial or len(h) > 2 * radius or h in applied:
            continue
        applied.add(h)
        applied.add(gog.invert(h))
        image = _inner_images(ball, h, radius)
        for v, hv in image.items():
            vertices.union(v, hv)
        for c, hc in image.items():
            p = ball.parents[c]
            if c == 0 or p not in image:
                continue
            hp = image[p]
            if ball.parents[hc] == hp:
                arcs.union(2 * (c - 1), 2 * (hc - 1))
                arcs.union(2 * (c - 1) + 1, 2 * (hc - 1) + 1)
            else:
                arcs.union(2 * (c - 1), 2 * (hp - 1) + 1)
                arcs.union(2 * (c - 1) + 1, 2 * (hp - 1))

    # Quotient vertices in ascending order of their least member
    vertex_index: Dict[int, int] = {}
    for v in inner:
        vertex_index.setdefault(vertices.find(v), len(vertex_index))

    sub = ball.subtree(radius)
    arc_index: Dict[int, int] = {}
    sources: List[int] = []
    labels: List[str] = []
    for e in sub.positive:
        forward, backward = arcs.find(e), arcs.find(e + 1)
        if forward in arc_index:
            continue
        arc_index[forward] = len(sources)
        arc_index[backward] = len(sources) + 1
        sources.extend((
            vertex_index[vertices.find(sub.src(e))],
            vertex_index[vertices.find(sub.dst(e))],
        ))
        labels.extend((sub.edge_label(e), sub.edge_label(e + 1)))

    class_labels = [""] * len(vertex_index)
    for v in inner:
        class_labels[vertex_index[vertices.find(v)]] = sub.vertex_label(v)
    quotient = SerreGraph(len(vertex_index), tuple(sources), tuple(class_labels), tuple(labels))

    projection = GraphMorphism(
        sub,
        quotient,
        tuple(vertex_index[vertices.find(v)] for v in inner),
        tuple(arc_index[arcs.find(e)] for e in sub.edges),
    )
    quotient_core = core(quotient) if fundamental_rank(quotient) > 0 else None
    return QuotientBall(quotient, projection, radius, quotient_core)


def cores_match(a: Optional[CoreResult], b: Optional[CoreResult]) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return graphs_isomorphic(a.graph, b.graph, decorated=True)


def _inner_quotient(
    gog: GraphOfGroups,
    generators: Sequence[GWord],
    inner_radius: int,
    length: int,
    longest: int,
) -> Tuple[TreeBall, ElementSet, QuotientBall]:
    ball = build_ball(gog, inner_radius)
    # a product may overshoot the inner ball by one generator before coming back
    hs = enumerate_subgroup(gog, generators, length, max_length=2 * inner_radius + longest)
    return ball, hs, quotient_ball(ball, hs, inner_radius=inner_radius)


def stabilized_quotient(
    gog: GraphOfGroups,
    generators: Sequence[GWord],
    radius: int,
    length: int,
) -> OracleRun:
    """
    Quotient at (R, L), certified stable when (R+2, L+2) gives an isomorphic core.

    Only the inner ball of radius R//2 is built: translates are computed from
    labels, so the outer shell is never consulted. The certificate also needs
    an inner radius of at least 1 and every generator short enough to close
    up inside the inner ball.

    Raises:
        RadiusTooLarge: radius above settings.max_ball_radius
    """
    if radius > settings.max_ball_radius:
        raise RadiusTooLarge(radius, settings.max_ball_radius)
    inner = radius // 2
    longest = max((len(gog.normal_form(g)) for g in generators), default=0)
    ball, hs, quotient = _inner_quotient(gog, generators, inner, length, longest)

    if inner < 1 or longest > 2 * inner:
        return OracleRun(ball, hs, quotient, False)
    if radius + 2 > settings.max_ball_radius:
        logger.warning(f"radius {radius + 2} exceeds the ball cap, stabilization not checked")
        return OracleRun(ball, hs, quotient, False)

    _, _, wider = _inner_quotient(gog, generators, inner + 1, length + 2, longest)
    stable = cores_match(quotient.core, wider.core)
    if not stable:
        logger.warning(f"oracle quotient not stable at R={radius}, L={length}")
    return OracleRun(ball, hs, quotient, stable)


def stab_count_lower(
    ball: TreeBall,
    hs_h: ElementSet,
    hs_k: ElementSet,
    radius: Optional[int] = None,
) -> int:
    """
    Largest count, over ball edges within ``radius``, of stabilizer elements
    found in hs_h · hs_k. A lower bound for m since products are truncated.
    """
    gog = ball.gog
    limit = settings.stab_radius if radius is None else radius
    best = 1
    for c in range(1, ball.num_vertices):
        if ball.depths[c] > limit:
            continue
        t, e = ball.steps[c]
        coefficients, edges = ball.labels[ball.parents[c]]
        # g' = parent word with last coefficient t; Stab = g' α_e(G_e) g'⁻¹
        anchor = GWord(gog.base_vertex, coefficients + (t,), edges)
        anchor_inv = gog.inverse_raw(anchor)
        count = 0
        for element in gog.edge_groups[e].elements:
            a = gog.alpha(e)(element)
            if a == 0:
                count += 1
                continue
            middle = GWord(gog.y.src(e), (a,))
            s = gog.product(anchor, middle, anchor_inv)
            if any(gog.multiply(gog.invert(h), s) in hs_k for h in hs_h.elements):
                count += 1
        best = max(best, count)
    return best
