"""
Intersection Module.

Fiber product of two folded subgroup graphs and the intersection rank bound.
This module provides:
- fiber_product: all compatible block and packet pairs, with projections
- intersection_core: Ψ(H∩K) read from the component of the paired basepoints
- multiplicity_table: how many intersection-core packets sit over each packet pair
- degree_chain_diagnostics: per vertex pair fiber degrees and inequalities
- conjugate_components: ranks of all components with a cycle
- verify_bound / bound_report: the full BoundReport

A product block (B, C, d) over vertex v stands for the diagonal orbit of
element pairs ((B, x), (C, d·x)), x ∈ G_v.
"""
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from app.core.errors import AmbientMismatch, FreeActionViolation
from app.core.graph_of_groups import GraphOfGroups, GWord
from app.core.serre_graph import (
    CoreResult,
    GraphMorphism,
    SerreGraph,
    connected_components,
    core,
    fundamental_rank,
    induced_subgraph,
    is_locally_injective,
)
from app.core.subgroup_folding import (
    BlockGraph,
    CoreData,
    Packet,
    canonicalize,
    core_of,
    fold,
    member,
    wedge,
)
from app.models.reports import BoundReport, Verdict
from app.utils.logging import get_logger

logger = get_logger("core.intersection")


# === Domain Types ===

class ProductBlock(NamedTuple):
    left: int
    right: int
    offset: int


class ProductPacket(NamedTuple):
    edge: int
    source: int
    target: int
    anchor: Tuple[int, int]
    left: int
    right: int


@dataclass(frozen=True, eq=False)
class FiberProduct:
    """
    Fiber product of Δ(H) and Δ(K) over the graph of groups.

    Attributes:
        left: Folded Δ(H)
        right: Folded Δ(K)
        blocks: Every product block, over every pair of blocks of equal type
        packets: Every product packet; packet i sits over left packet
            ``packets[i].left`` and right packet ``packets[i].right``
        base: Product block holding the paired basepoints
    """
    left: BlockGraph
    right: BlockGraph
    blocks: Tuple[ProductBlock, ...]
    packets: Tuple[ProductPacket, ...]
    base: int

    @property
    def gog(self) -> GraphOfGroups:
        return self.left.gog

    @cached_property
    def whole(self) -> BlockGraph:
        """All product blocks and packets as one (disconnected) block graph."""
        types = tuple(self.left.block_types[b.left] for b in self.blocks)
        packets = tuple(Packet(p.edge, p.source, p.target, p.anchor) for p in self.packets)
        return BlockGraph(self.gog, types, packets, (), folded=True)

    @cached_property
    def graph(self) -> SerreGraph:
        return self.whole.to_serre_graph()

    def _projection(self, side: BlockGraph, blocks: Sequence[int], packets: Sequence[int]) -> GraphMorphism:
        edge_map: List[int] = []
        for p in packets:
            edge_map.extend((2 * p, 2 * p + 1))
        return GraphMorphism(self.graph, side.to_serre_graph(), tuple(blocks), tuple(edge_map))

    @cached_property
    def pi_left(self) -> GraphMorphism:
        """π_H onto the underlying graph of Δ(H)."""
        return self._projection(
            self.left, [b.left for b in self.blocks], [p.left for p in self.packets]
        )

    @cached_property
    def pi_right(self) -> GraphMorphism:
        """π_K onto the underlying graph of Δ(K)."""
        return self._projection(
            self.right, [b.right for b in self.blocks], [p.right for p in self.packets]
        )

    @cached_property
    def components(self) -> List[Tuple[int, ...]]:
        return connected_components(self.graph)

    @cached_property
    def base_component(self) -> Tuple[int, ...]:
        return next(c for c in self.components if self.base in c)

    @cached_property
    def base_subgraph(self) -> CoreResult:
        """Base component as a graph, with its inclusion into ``graph``."""
        inside = set(self.base_component)
        edges = [e for e in self.graph.positive if self.graph.src(e) in inside]
        return induced_subgraph(self.graph, self.base_component, edges)

    @cached_property
    def base_graph(self) -> BlockGraph:
        """Δ(H∩K): the base component, canonically numbered."""
        types = {i: self.left.block_types[b.left] for i, b in enumerate(self.blocks)}
        packets = [Packet(p.edge, p.source, p.target, p.anchor) for p in self.packets]
        return canonicalize(self.gog, types, packets, self.base)

    def member(self, w: GWord) -> bool:
        return member(self.base_graph, w)


@dataclass(frozen=True)
class PairDiagnostic:
    """
    Fiber of Ψ(H∩K) over one vertex pair (a, b) of Ψ(H) × Ψ(K).

    Degrees are core degrees; an empty fiber gives zero sums.
    """
    a: int
    b: int
    degree_a: int
    degree_b: int
    fiber: Tuple[int, ...]
    fiber_degrees: Tuple[int, ...]
    m_prime: int

    @property
    def s(self) -> int:
        return len(self.fiber)

    @property
    def excess(self) -> int:
        return sum(d - 2 for d in self.fiber_degrees)

    @property
    def pair_bound(self) -> int:
        return 3 * self.m_prime * (self.degree_a - 2) * (self.degree_b - 2)

    @property
    def each_within_min(self) -> bool:
        return all(d <= min(self.degree_a, self.degree_b) for d in self.fiber_degrees)

    @property
    def sum_within_product(self) -> bool:
        return sum(self.fiber_degrees) <= self.m_prime * self.degree_a * self.degree_b

    @property
    def pair_inequality(self) -> bool:
        return self.excess <= self.pair_bound

    @property
    def holds(self) -> bool:
        return self.each_within_min and self.sum_within_product and self.pair_inequality


class ComponentRank(NamedTuple):
    blocks: Tuple[int, ...]
    rank: int
    reduced_rank: int
    is_base: bool


# === Construction ===

def fiber_product(left: BlockGraph, right: BlockGraph) -> FiberProduct:
    """
    Pair up blocks of equal type and packets of equal edge type.

    For packets p, q of type e and k ∈ G_e the product packet runs from
    (B, C, x_q·α(k)·x_p⁻¹) to (B′, C′, y_q·ω(k)·y_p⁻¹) with p's anchor.

    Raises:
        AmbientMismatch: The graphs live over different graphs of groups
    """
    if left.gog is not right.gog:
        raise AmbientMismatch()
    if not left.folded:
        left = fold(left)
    if not right.folded:
        right = fold(right)
    gog = left.gog

    index: Dict[Tuple[int, int, int], int] = {}
    blocks: List[ProductBlock] = []
    for b, v in enumerate(left.block_types):
        for c, w in enumerate(right.block_types):
            if v != w:
                continue
            for d in gog.group_at(v).elements:
                index[(b, c, d)] = len(blocks)
                blocks.append(ProductBlock(b, c, d))

    by_edge: Dict[int, List[int]] = {}
    for j, q in enumerate(right.packets):
        by_edge.setdefault(q.edge, []).append(j)

    packets: List[ProductPacket] = []
    for i, p in enumerate(left.packets):
        e = p.edge
        source_group = gog.group_at(gog.y.src(e))
        target_group = gog.group_at(gog.y.dst(e))
        alpha, omega = gog.alpha(e), gog.omega(e)
        (xp, yp) = p.anchor
        for j in by_edge.get(e, []):
            q = right.packets[j]
            (xq, yq) = q.anchor
            for k in gog.edge_groups[e].elements:
                d = source_group.product(xq, alpha(k), source_group.inv(xp))
                d2 = target_group.product(yq, omega(k), target_group.inv(yp))
                packets.append(ProductPacket(
                    e,
                    index[(p.source, q.source, d)],
                    index[(p.target, q.target, d2)],
                    p.anchor,
                    i,
                    j,
                ))

    fp = FiberProduct(left, right, tuple(blocks), tuple(packets), index[(0, 0, 0)])
    logger.debug(f"fiber product: {len(blocks)} blocks, {len(packets)} packets")
    return fp


def intersection_core(fp: FiberProduct) -> CoreData:
    """Core Ψ(H∩K) of the base component; the embedding lands in ``fp.graph``."""
    component, inclusion = fp.base_subgraph
    rank = fundamental_rank(component)
    if rank == 0:
        return CoreData(None, None, 0, 0, ())
    psi, inner = core(component)
    profile = tuple(sorted((psi.degree(v) for v in psi.vertices), reverse=True))
    return CoreData(psi, inner.then(inclusion), rank, psi.num_positive - psi.num_vertices, profile)


# === Diagnostics ===

def multiplicity_table(fp: FiberProduct, core_hk: Optional[CoreData] = None) -> Dict[Tuple[int, int], int]:
    """Count of Ψ(H∩K) packets over each (packet of Δ(H), packet of Δ(K)) pair."""
    data = core_hk if core_hk is not None else intersection_core(fp)
    if data.psi is None:
        return {}
    counts: Counter = Counter()
    for e in data.psi.positive:
        pp = fp.packets[data.embedding.edge_map[e] >> 1]
        counts[(pp.left, pp.right)] += 1
    return dict(sorted(counts.items()))


def m_lower(table: Dict[Tuple[int, int], int]) -> int:
    return max(table.values(), default=1)


def vertex_fiber_counts(fp: FiberProduct) -> Dict[Tuple[int, int], int]:
    """Base-component blocks over each (block of Δ(H), block of Δ(K)) pair."""
    counts: Counter = Counter()
    for i in fp.base_component:
        b = fp.blocks[i]
        counts[(b.left, b.right)] += 1
    return dict(sorted(counts.items()))


def _core_degrees(data: CoreData) -> Dict[int, int]:
    """Block of the subgroup graph → degree in the core."""
    if data.psi is None:
        return {}
    return {data.embedding.vertex_map[v]: data.psi.degree(v) for v in data.psi.vertices}


def degree_chain_diagnostics(
    fp: FiberProduct,
    core_h: Optional[CoreData] = None,
    core_k: Optional[CoreData] = None,
    core_hk: Optional[CoreData] = None,
) -> List[PairDiagnostic]:
    """One record per vertex pair (a, b) of Ψ(H) × Ψ(K), ordered by (a, b)."""
    core_h = core_h if core_h is not None else core_of(fp.left)
    core_k = core_k if core_k is not None else core_of(fp.right)
    core_hk = core_hk if core_hk is not None else intersection_core(fp)
    m_prime = fp.gog.m_prime

    fibers: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    if core_hk.psi is not None:
        for w in core_hk.psi.vertices:
            pb = fp.blocks[core_hk.embedding.vertex_map[w]]
            fibers.setdefault((pb.left, pb.right), []).append(
                (core_hk.embedding.vertex_map[w], core_hk.psi.degree(w))
            )

    records = []
    degrees_k = sorted(_core_degrees(core_k).items())
    for a, da in sorted(_core_degrees(core_h).items()):
        for b, db in degrees_k:
            fiber = fibers.get((a, b), [])
            records.append(PairDiagnostic(
                a, b, da, db,
                tuple(w for w, _ in fiber),
                tuple(d for _, d in fiber),
                m_prime,
            ))
    return records


def conjugate_components(fp: FiberProduct) -> List[ComponentRank]:
    """Components of the fiber product with rank ≥ 1, ordered by smallest block."""
    owner: Dict[int, int] = {}
    for i, component in enumerate(fp.components):
        for b in component:
            owner[b] = i
    edges = Counter(owner[p.source] for p in fp.packets)

    ranks = []
    for i, component in enumerate(fp.components):
        rank = edges[i] - len(component) + 1
        if rank >= 1:
            ranks.append(ComponentRank(component, rank, rank - 1, fp.base in component))
    return ranks


# === Bound Report ===

def _core_rank_formula(name: str, data: CoreData) -> Optional[str]:
    if data.psi is None:
        return None if data.rank == 0 and data.reduced_rank == 0 else f"{name}: trivial core with nonzero rank"
    counted = data.num_positive - data.num_vertices
    if not data.reduced_rank == counted == data.half_degree_excess == data.rank - 1:
        return (
            f"{name}: r̄={data.reduced_rank} |E+|-|V|={counted} "
            f"half excess={data.half_degree_excess} r-1={data.rank - 1}"
        )
    return None


def _projects_into(image: GraphMorphism, target: Optional[CoreData], psi: SerreGraph) -> bool:
    if target is None or target.psi is None:
        return psi.num_vertices == 0
    vertices = set(target.embedding.vertex_map)
    edges = set(target.embedding.edge_map)
    return all(v in vertices for v in image.vertex_map) and all(e in edges for e in image.edge_map)


def bound_report(
    fp: FiberProduct,
    core_h: Optional[CoreData] = None,
    core_k: Optional[CoreData] = None,
    core_hk: Optional[CoreData] = None,
    diagnostics: Optional[List[PairDiagnostic]] = None,
) -> BoundReport:
    """
    Every check on a fiber product: the main bound, its specializations and
    the per-vertex and per-packet inequalities behind it.

    Cores and diagnostics a caller already holds are reused; missing ones
    are computed here.
    """
    gog = fp.gog
    core_h = core_h if core_h is not None else core_of(fp.left)
    core_k = core_k if core_k is not None else core_of(fp.right)
    core_hk = core_hk if core_hk is not None else intersection_core(fp)
    m_prime, n_upper = gog.m_prime, gog.n_upper
    rh, rk, rhk = core_h.reduced_rank, core_k.reduced_rank, core_hk.reduced_rank
    bound = 6 * m_prime * rh * rk

    verdicts = [Verdict(name="main-bound", holds=rhk <= bound, lhs=rhk, rhs=bound)]
    if gog.shape != "general":
        # amalgamated or associated subgroup order equals m′ here
        shape_bound = 6 * gog.edge_groups[0].order * rh * rk
        verdicts.append(Verdict(name=f"{gog.shape}-bound", holds=rhk <= shape_bound, lhs=rhk, rhs=shape_bound))
    verdicts.append(Verdict(
        name="vertex-order-bound", holds=rhk <= 6 * n_upper * rh * rk, lhs=rhk, rhs=6 * n_upper * rh * rk
    ))
    if gog.has_trivial_edge_groups:
        verdicts.append(Verdict(name="free-product-bound", holds=rhk <= 6 * rh * rk, lhs=rhk, rhs=6 * rh * rk))
    if gog.is_free_group:
        verdicts.append(Verdict(
            name="free-group-product", holds=rhk <= rh * rk, lhs=rhk, rhs=rh * rk, gate=False
        ))

    # Projections
    for name, pi in (("local-injectivity-h", fp.pi_left), ("local-injectivity-k", fp.pi_right)):
        check = is_locally_injective(pi)
        verdicts.append(Verdict(
            name=name, holds=check.ok, detail="" if check.ok else f"edges {check.witness}"
        ))
    if core_hk.psi is not None:
        into_h = _projects_into(core_hk.embedding.then(fp.pi_left), core_h, core_hk.psi)
        into_k = _projects_into(core_hk.embedding.then(fp.pi_right), core_k, core_hk.psi)
    else:
        into_h = into_k = True
    verdicts.append(Verdict(name="core-projection", holds=into_h and into_k))

    # Multiplicities
    table = multiplicity_table(fp, core_hk)
    largest = m_lower(table)
    verdicts.append(Verdict(name="multiplicity", holds=largest <= m_prime, lhs=largest, rhs=m_prime))

    fibers = vertex_fiber_counts(fp)
    worst = max(
        fibers.items(),
        key=lambda item: item[1] - gog.group_at(fp.left.block_types[item[0][0]]).order,
        default=None,
    )
    if worst is None:
        verdicts.append(Verdict(name="vertex-fiber", holds=True))
    else:
        (a, _), count = worst
        order = gog.group_at(fp.left.block_types[a]).order
        verdicts.append(Verdict(name="vertex-fiber", holds=count <= order, lhs=count, rhs=order))
    widest = max(fibers.values(), default=0)
    verdicts.append(Verdict(
        name="vertex-fiber-edge-bound", holds=widest <= m_prime, lhs=widest, rhs=m_prime, gate=False
    ))

    # Degree chain
    if diagnostics is None:
        diagnostics = degree_chain_diagnostics(fp, core_h, core_k, core_hk)
    for name, attr in (
        ("fiber-degree", "each_within_min"),
        ("fiber-degree-sum", "sum_within_product"),
        ("pair-inequality", "pair_inequality"),
    ):
        bad = next((d for d in diagnostics if not getattr(d, attr)), None)
        verdicts.append(Verdict(
            name=name, holds=bad is None, detail="" if bad is None else f"pair ({bad.a}, {bad.b})"
        ))

    excess = sum(d - 2 for d in core_hk.degree_profile)
    verdicts.append(Verdict(name="degree-sum-identity", holds=excess == 2 * rhk, lhs=excess, rhs=2 * rhk))
    chain = 3 * m_prime * (2 * rh) * (2 * rk)
    verdicts.append(Verdict(name="global-chain", holds=excess <= chain, lhs=excess, rhs=chain))

    problems = [
        p for p in (
            _core_rank_formula("H", core_h),
            _core_rank_formula("K", core_k),
            _core_rank_formula("H∩K", core_hk),
        ) if p
    ]
    verdicts.append(Verdict(name="core-rank-formula", holds=not problems, detail="; ".join(problems)))

    report = BoundReport(
        rank_h=core_h.rank,
        rank_k=core_k.rank,
        rank_hk=core_hk.rank,
        reduced_rank_h=rh,
        reduced_rank_k=rk,
        reduced_rank_hk=rhk,
        degrees_h=list(core_h.degree_profile),
        degrees_k=list(core_k.degree_profile),
        degrees_hk=list(core_hk.degree_profile),
        m_prime=m_prime,
        m_lower=largest,
        n_upper=n_upper,
        bound=bound,
        shape=gog.shape,
        verdicts=verdicts,
    )
    if report.holds:
        logger.info(f"bound holds: r̄(H∩K)={rhk} <= {bound}")
    else:
        logger.error(f"verdicts failed: {', '.join(report.failed)}")
    return report


def fold_subgroup(gog: GraphOfGroups, generators: Sequence[GWord], name: str) -> BlockGraph:
    """fold(wedge(...)) with violations tagged by subgroup name."""
    try:
        return fold(wedge(gog, generators))
    except FreeActionViolation as e:
        raise e.tagged(name) from None


def verify_bound(gog: GraphOfGroups, h_generators: Sequence[GWord], k_generators: Sequence[GWord]) -> BoundReport:
    """
    Fold both subgroups, build their fiber product and report every verdict.

    Raises:
        FreeActionViolation: Tagged 'H' or 'K'
    """
    left = fold_subgroup(gog, h_generators, "H")
    right = fold_subgroup(gog, k_generators, "K")
    return bound_report(fiber_product(left, right))
