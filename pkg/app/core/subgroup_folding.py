"""
Subgroup Folding Module.

Builds the decorated quotient graph Δ(H) of the Bass-Serre tree by H from a
list of generators. This module provides:
- wedge: one block chain per generator, closed back to the basepoint
- fold: merges through torsor bijections until transitions are deterministic
- core_of: core Ψ(H), rank and reduced rank
- member: trace a loop from the basepoint
- free_generators: a free basis read off a spanning tree of Δ(H)

A block of type v is a copy of G_v acting on itself from the right; an
element is addressed as (block, x). A packet of type e with anchor (x, y)
carries the transitions (x·α_e(c), y·ω_e(c)) for c in G_e.
"""
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from app.core.errors import FreeActionViolation, IdentityGenerator, NotClosed
from app.core.graph_of_groups import GraphOfGroups, GWord
from app.core.serre_graph import (
    GraphMorphism,
    SerreGraph,
    core,
    free_generator_paths,
    fundamental_rank,
    spanning_tree,
)
from app.utils.logging import get_logger

logger = get_logger("core.folding")

Element = Tuple[int, int]


# === Domain Types ===

class Packet(NamedTuple):
    edge: int
    source: int
    target: int
    anchor: Tuple[int, int]


class Direction(NamedTuple):
    """A packet read from one of its ends; arc 2i reads packet i forwards, 2i+1 backwards."""
    arc: int
    edge: int
    source: int
    source_element: int
    target: int
    target_element: int


@dataclass(frozen=True, eq=False)
class BlockGraph:
    """
    Torsor-decorated subgroup graph.

    Attributes:
        gog: Ambient graph of groups
        block_types: Vertex of Y under each block; block 0 holds the basepoint
        packets: Packets; after folding each has a positive edge type and
            its canonical (lexicographically least) anchor
        identifications: Element pairs still to be merged (set by wedge)
        folded: True once transitions are deterministic
    """
    gog: GraphOfGroups
    block_types: Tuple[int, ...]
    packets: Tuple[Packet, ...]
    identifications: Tuple[Tuple[Element, Element], ...] = ()
    folded: bool = False

    @property
    def num_blocks(self) -> int:
        return len(self.block_types)

    def directions(self) -> Iterator[Direction]:
        """Both readings of every packet."""
        for i, p in enumerate(self.packets):
            yield Direction(2 * i, p.edge, p.source, p.anchor[0], p.target, p.anchor[1])
            yield Direction(2 * i + 1, p.edge ^ 1, p.target, p.anchor[1], p.source, p.anchor[0])

    def transitions(self, edge: int, x: int, y: int) -> Iterator[Tuple[int, int]]:
        """Transition pairs (x·α_e(c), y·ω_e(c)) of a packet reading."""
        return _transitions(self.gog, edge, x, y)

    @cached_property
    def transition_map(self) -> Dict[Tuple[int, int, int], Element]:
        """(block, directed edge, element) → (block, element)."""
        table: Dict[Tuple[int, int, int], Element] = {}
        for d in self.directions():
            for u, w in self.transitions(d.edge, d.source_element, d.target_element):
                table[(d.source, d.edge, u)] = (d.target, w)
        return table

    @cached_property
    def transition_arcs(self) -> Dict[Tuple[int, int, int], int]:
        """(block, directed edge, element) → arc of to_serre_graph() carrying it."""
        table: Dict[Tuple[int, int, int], int] = {}
        for d in self.directions():
            for u, _ in self.transitions(d.edge, d.source_element, d.target_element):
                table[(d.source, d.edge, u)] = d.arc
        return table

    @cached_property
    def out_directions(self) -> Tuple[Tuple[Direction, ...], ...]:
        buckets: List[List[Direction]] = [[] for _ in self.block_types]
        for d in self.directions():
            buckets[d.source].append(d)
        return tuple(tuple(b) for b in buckets)

    def degree(self, block: int) -> int:
        return len(self.out_directions[block])

    def to_serre_graph(self) -> SerreGraph:
        """
        Underlying graph: one vertex per block, one edge pair per packet.

        Edge 2i reads packet i forwards. Labels are the Y labels of the
        block types and packet edge types.
        """
        y = self.gog.y
        return SerreGraph.from_edges(
            self.num_blocks,
            [(p.source, p.target) for p in self.packets],
            vertex_labels=[y.vertex_label(t) for t in self.block_types],
            edge_labels=[(y.edge_label(p.edge), y.edge_label(p.edge ^ 1)) for p in self.packets],
        )


@dataclass(frozen=True)
class CoreData:
    """
    Core of a subgroup graph with its rank data.

    Attributes:
        psi: The core, or None for the trivial subgroup
        embedding: Inclusion of psi into the full subgroup graph
        rank: Rank r of the free subgroup
        reduced_rank: r̄ = |E(psi)⁺| − |V(psi)| = max(r − 1, 0)
        degree_profile: Vertex degrees of psi, descending
    """
    psi: Optional[SerreGraph]
    embedding: Optional[GraphMorphism]
    rank: int
    reduced_rank: int
    degree_profile: Tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.psi is None

    @property
    def num_vertices(self) -> int:
        return self.psi.num_vertices if self.psi is not None else 0

    @property
    def num_positive(self) -> int:
        return self.psi.num_positive if self.psi is not None else 0

    @property
    def half_degree_excess(self) -> int:
        """½ Σ (deg v − 2) over the core; equals reduced_rank."""
        return sum(d - 2 for d in self.degree_profile) // 2


# === Construction ===

def wedge(gog: GraphOfGroups, generators: Sequence[GWord]) -> BlockGraph:
    """
    Unfolded block graph: a chain of fresh blocks per generator.

    Reading a coefficient g moves (B, x) to (B, x·g); reading an edge creates
    a fresh block and a packet. The last element of each chain is recorded
    for identification with the basepoint (done by fold).

    Raises:
        IdentityGenerator: A generator is trivial
        NotClosed: A generator is not a loop at the base vertex
    """
    block_types = [gog.base_vertex]
    packets: List[Packet] = []
    identifications: List[Tuple[Element, Element]] = []

    for index, raw in enumerate(generators):
        if not gog.is_loop(raw):
            raise NotClosed(raw.start, gog.end_vertex(raw))
        w = gog.normal_form(raw)
        if w.is_trivial:
            raise IdentityGenerator(index)

        block, x = 0, w.coefficients[0]
        for e, g in zip(w.edges, w.coefficients[1:]):
            fresh = len(block_types)
            block_types.append(gog.y.dst(e))
            packets.append(Packet(e, block, fresh, (x, 0)))
            block, x = fresh, g
        identifications.append(((block, x), (0, 0)))

    return BlockGraph(gog, tuple(block_types), tuple(packets), tuple(identifications))


class _Folder:
    """
    Working copy for fold: union-find over blocks with group-valued offsets.

    parent[b] = p with offset[b] = s means (b, z) is the element (p, s·z).
    """

    def __init__(self, graph: BlockGraph):
        self.gog = graph.gog
        self.types = list(graph.block_types)
        self.parent = list(range(graph.num_blocks))
        self.offset = [0] * graph.num_blocks
        self.packets = list(graph.packets)
        self.merges = 0

    def _group(self, block: int):
        return self.gog.group_at(self.types[block])

    def find(self, block: int) -> Element:
        path = []
        while self.parent[block] != block:
            path.append(block)
            block = self.parent[block]
        root = block
        mul = self._group(root).mul
        for node in reversed(path):
            up = self.parent[node]
            if up != root:
                self.offset[node] = mul(self.offset[up], self.offset[node])
                self.parent[node] = root
        return root, (self.offset[path[0]] if path else 0)

    def locate(self, element: Element) -> Element:
        """Root coordinates of an element."""
        root, shift = self.find(element[0])
        return root, self._group(root).mul(shift, element[1])

    def identify(self, a: Element, b: Element) -> None:
        (ra, pa), (rb, pb) = self.locate(a), self.locate(b)
        group = self._group(ra)
        if ra == rb:
            if pa != pb:
                twist = group.mul(pa, group.inv(pb))
                logger.debug(f"twisted self-identification in block {ra}: {twist}")
                raise FreeActionViolation(self.types[ra], twist)
            return
        if rb < ra:
            ra, pa, rb, pb = rb, pb, ra, pa
        # (rb, z) becomes (ra, t·z) with t·pb = pa
        self.parent[rb] = ra
        self.offset[rb] = group.mul(pa, group.inv(pb))
        self.merges += 1
        logger.debug(f"merged block {rb} into {ra} with offset {self.offset[rb]}")

    def rooted_packet(self, p: Packet) -> Packet:
        rs, x = self.locate((p.source, p.anchor[0]))
        rt, y = self.locate((p.target, p.anchor[1]))
        return Packet(p.edge, rs, rt, (x, y))

    def find_conflict(self, order: Sequence[int]) -> Optional[Tuple[Element, Element]]:
        """First pair of distinct transitions leaving one element along one edge type."""
        seen: Dict[Tuple[int, int, int], Element] = {}
        for pid in order:
            p = self.rooted_packet(self.packets[pid])
            readings = (
                (p.edge, p.source, p.target, p.anchor[0], p.anchor[1]),
                (p.edge ^ 1, p.target, p.source, p.anchor[1], p.anchor[0]),
            )
            for edge, src, dst, x, y in readings:
                for u, w in _transitions(self.gog, edge, x, y):
                    key = (src, edge, u)
                    found = seen.get(key)
                    if found is None:
                        seen[key] = (dst, w)
                    elif found != (dst, w):
                        return found, (dst, w)
        return None


def _transitions(gog: GraphOfGroups, edge: int, x: int, y: int) -> Iterator[Tuple[int, int]]:
    mul_src = gog.group_at(gog.y.src(edge)).mul
    mul_dst = gog.group_at(gog.y.dst(edge)).mul
    alpha, omega = gog.alpha(edge), gog.omega(edge)
    for c in gog.edge_groups[edge].elements:
        yield mul_src(x, alpha(c)), mul_dst(y, omega(c))


def canonical_anchor(gog: GraphOfGroups, edge: int, x: int, y: int) -> Tuple[int, int]:
    return min(_transitions(gog, edge, x, y))


def canonicalize(
    gog: GraphOfGroups,
    block_types: Dict[int, int],
    packets: Sequence[Packet],
    base: int,
) -> BlockGraph:
    """
    Renumber blocks breadth-first from ``base`` and fix each block's gauge.

    Blocks keep their right action; a block's coordinates may be changed by
    left multiplication. Base keeps its coordinates; every other block is
    shifted so the tree packet that discovers it lands its least source
    element on 0. Blocks unreachable from ``base`` are dropped.
    """
    # 1. Positive orientation, deduplicated
    pool: Set[Packet] = set()
    for p in packets:
        e, s, t, (x, y) = p
        if e & 1:
            e, s, t, x, y = e ^ 1, t, s, y, x
        pool.add(Packet(e, s, t, (x, y)))

    readings: Dict[int, List[Tuple[int, int, int, int]]] = {}
    for e, s, t, (x, y) in pool:
        readings.setdefault(s, []).append((e, x, t, y))
        readings.setdefault(t, []).append((e ^ 1, y, s, x))

    # 2. Breadth-first numbering with gauge fixing
    new_id = {base: 0}
    gauge = {base: 0}
    queue = deque([base])
    while queue:
        b = queue.popleft()
        group = gog.group_at(block_types[b])
        keyed = []
        for e, x, t, y in readings.get(b, []):
            alpha = gog.alpha(e)
            shifted = group.mul(gauge[b], x)
            least, c0 = min((group.mul(shifted, alpha(c)), c) for c in gog.edge_groups[e].elements)
            keyed.append(((e, least), c0, x, t, y))
        keyed.sort(key=lambda item: item[0])
        for (e, _least), c0, x, t, y in keyed:
            if t in new_id:
                continue
            target_group = gog.group_at(block_types[t])
            landing = target_group.mul(y, gog.omega(e)(c0))
            new_id[t] = len(new_id)
            gauge[t] = target_group.inv(landing)
            queue.append(t)

    # 3. Packets in new coordinates with canonical anchors
    final: Set[Packet] = set()
    for e, s, t, (x, y) in pool:
        if s not in new_id:
            continue
        x2 = gog.group_at(block_types[s]).mul(gauge[s], x)
        y2 = gog.group_at(block_types[t]).mul(gauge[t], y)
        final.add(Packet(e, new_id[s], new_id[t], canonical_anchor(gog, e, x2, y2)))

    types = [0] * len(new_id)
    for old, new in new_id.items():
        types[new] = block_types[old]
    ordered = tuple(sorted(final, key=lambda p: (p.source, p.edge, p.anchor, p.target)))
    return BlockGraph(gog, tuple(types), ordered, (), folded=True)


def fold(graph: BlockGraph, order: Optional[Sequence[int]] = None) -> BlockGraph:
    """
    Fold until every element has at most one transition per edge type.

    Args:
        graph: Any block graph (pending identifications are applied first)
        order: Packet scan order; ascending packet id by default

    Returns:
        Folded, canonically numbered block graph

    Raises:
        FreeActionViolation: A block element was identified with a twisted
            copy of itself
    """
    folder = _Folder(graph)
    for a, b in graph.identifications:
        folder.identify(a, b)

    scan = list(order) if order is not None else list(range(len(folder.packets)))
    while True:
        conflict = folder.find_conflict(scan)
        if conflict is None:
            break
        folder.identify(*conflict)

    roots: Dict[int, int] = {}
    for b in range(graph.num_blocks):
        root, _ = folder.find(b)
        roots[root] = folder.types[root]
    rooted = [folder.rooted_packet(p) for p in folder.packets]
    folded = canonicalize(graph.gog, roots, rooted, folder.find(0)[0])

    logger.debug(
        f"fold: {graph.num_blocks} blocks/{len(graph.packets)} packets -> "
        f"{folded.num_blocks} blocks/{len(folded.packets)} packets after {folder.merges} merges"
    )
    return folded


def subgroup_graph(gog: GraphOfGroups, generators: Sequence[GWord]) -> BlockGraph:
    """fold(wedge(...)) in one call."""
    return fold(wedge(gog, generators))


# === Queries ===

def core_of(graph: BlockGraph) -> CoreData:
    """Core Ψ(H) of a folded block graph with rank and reduced rank."""
    underlying = graph.to_serre_graph()
    rank = fundamental_rank(underlying)
    if rank == 0:
        return CoreData(None, None, 0, 0, ())
    psi, embedding = core(underlying)
    profile = tuple(sorted((psi.degree(v) for v in psi.vertices), reverse=True))
    return CoreData(psi, embedding, rank, psi.num_positive - psi.num_vertices, profile)


def member(graph: BlockGraph, w: GWord) -> bool:
    """Trace ``w`` from the basepoint; True iff it returns to the basepoint."""
    gog = graph.gog
    if not gog.is_loop(w):
        return False
    table = graph.transition_map
    block = 0
    x = w.coefficients[0]
    for e, g in zip(w.edges, w.coefficients[1:]):
        step = table.get((block, e, x))
        if step is None:
            return False
        block, x = step
        x = gog.group_at(graph.block_types[block]).mul(x, g)
    return block == 0 and x == 0


def free_generators(graph: BlockGraph) -> List[GWord]:
    """
    Free basis of H: one loop per packet outside a breadth-first spanning
    tree of Δ(H), spelled by reading torsor offsets along r_src · e · r_dst⁻¹.
    """
    gog = graph.gog
    underlying = graph.to_serre_graph()
    tree = spanning_tree(underlying, 0)
    words = []
    for path in free_generator_paths(underlying, 0, tree):
        block, x = 0, 0
        coefficients: List[int] = []
        edges: List[int] = []
        for d in path.edges:
            p = graph.packets[d >> 1]
            if d & 1:
                edge, entry, exit_, target = p.edge ^ 1, p.anchor[1], p.anchor[0], p.source
            else:
                edge, entry, exit_, target = p.edge, p.anchor[0], p.anchor[1], p.target
            group = gog.group_at(graph.block_types[block])
            coefficients.append(group.mul(group.inv(x), entry))
            edges.append(edge)
            block, x = target, exit_
        coefficients.append(gog.base_group.inv(x))
        words.append(gog.normal_form(GWord(gog.base_vertex, tuple(coefficients), tuple(edges))))
    return words


def tree_degree(gog: GraphOfGroups, v: int) -> int:
    """Degree of a tree vertex of type v: Σ over e leaving v of [G_v : α_e(G_e)]."""
    return sum(gog.alpha(e).index for e in gog.y.out_edges[v])
