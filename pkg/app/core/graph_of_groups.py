"""
Graphs of Groups Module.

The structure (Γ, Y) and its fundamental group in loop form. This module
provides:
- Validation of a graph of finite groups
- GWord loop elements g₀ e₁ g₁ … e_n g_n with reduction and normal forms
- Multiplication, inversion and equality through normal forms
- Conversion from S-presentation words (vertex letters and stable letters)
- Seeded random elements and exhaustive normal-form enumeration

Relation used throughout: for c in G_e, e · ω_e(c) = α_e(c) · e, where
ω_e = α_{inv(e)}.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.errors import (
    BaseMismatch,
    BrokenPath,
    EdgePairGroupMismatch,
    SchemaError,
    UnknownEdge,
    UnknownElement,
    UnknownVertex,
)
from app.core.finite_group import FiniteGroup, Monomorphism, validate_mono
from app.core.serre_graph import SerreGraph, check_connected, spanning_tree, tree_paths
from app.utils.logging import get_logger

logger = get_logger("core.graph_of_groups")


# === Domain Types ===

@dataclass(frozen=True)
class GWord:
    """
    A word g₀ e₁ g₁ … e_n g_n along a path of Y.

    Attributes:
        start: First vertex of the path
        coefficients: g₀ … g_n, one more than there are edges
        edges: e₁ … e_n as directed edges of Y
    """
    start: int
    coefficients: Tuple[int, ...]
    edges: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.coefficients) != len(self.edges) + 1:
            raise SchemaError("a word needs exactly one more coefficient than edges")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def is_trivial(self) -> bool:
        return not self.edges and self.coefficients[0] == 0


class VertexLetter(NamedTuple):
    vertex: int
    element: int


class StableLetter(NamedTuple):
    edge: int  # index of a positive edge of Y
    sign: int  # +1 for t_e, -1 for t_e⁻¹


SPresLetter = Union[VertexLetter, StableLetter]


@dataclass(frozen=True, eq=False)
class GraphOfGroups:
    """
    A validated graph of finite groups with a base vertex.

    Attributes:
        y: Underlying finite connected graph
        vertex_groups: G_v per vertex
        edge_groups: G_e per directed edge (the same object for e and inv(e))
        alphas: α_e : G_e → G_src(e) per directed edge
        base_vertex: Base vertex v₀ of all loops
        spanning: Positive edges of a maximal subtree, used for S-presentations
    """
    y: SerreGraph
    vertex_groups: Tuple[FiniteGroup, ...]
    edge_groups: Tuple[FiniteGroup, ...]
    alphas: Tuple[Monomorphism, ...]
    base_vertex: int
    spanning: FrozenSet[int]

    # --- structure ---

    def alpha(self, e: int) -> Monomorphism:
        return self.alphas[e]

    def omega(self, e: int) -> Monomorphism:
        return self.alphas[e ^ 1]

    def group_at(self, v: int) -> FiniteGroup:
        return self.vertex_groups[v]

    @property
    def base_group(self) -> FiniteGroup:
        return self.vertex_groups[self.base_vertex]

    @property
    def m_prime(self) -> int:
        """Largest edge-group order (1 when Y has no edges)."""
        return max((g.order for g in self.edge_groups), default=1)

    @property
    def n_upper(self) -> int:
        """Largest vertex-group order; bounds every finite subgroup."""
        return max(g.order for g in self.vertex_groups)

    @property
    def has_trivial_edge_groups(self) -> bool:
        return all(g.is_trivial for g in self.edge_groups)

    @property
    def is_free_group(self) -> bool:
        return self.has_trivial_edge_groups and all(g.is_trivial for g in self.vertex_groups)

    @property
    def shape(self) -> str:
        """'amalgam', 'hnn' or 'general' as a one-step construction."""
        if self.y.num_positive == 1:
            return "hnn" if self.y.num_vertices == 1 else "amalgam"
        return "general"

    @property
    def euler_characteristic(self) -> Fraction:
        chi = sum((Fraction(1, g.order) for g in self.vertex_groups), Fraction(0))
        for e in self.y.positive:
            chi -= Fraction(1, self.edge_groups[e].order)
        return chi

    @cached_property
    def _tree_paths(self) -> Dict[int, Tuple[int, ...]]:
        paths = tree_paths(self.y, self.base_vertex, self.spanning)
        return {v: p.edges for v, p in paths.items()}

    def tree_edges_to(self, v: int) -> Tuple[int, ...]:
        """Edges of the tree path r_v from the base vertex to v."""
        return self._tree_paths[v]

    # --- words ---

    def identity(self) -> GWord:
        return GWord(self.base_vertex, (0,))

    def end_vertex(self, w: GWord) -> int:
        return self.y.dst(w.edges[-1]) if w.edges else w.start

    def vertex_sequence(self, w: GWord) -> List[int]:
        return [w.start] + [self.y.dst(e) for e in w.edges]

    def check_word(self, w: GWord) -> GWord:
        """Validate path consistency and coefficient ranges."""
        if not 0 <= w.start < self.y.num_vertices:
            raise UnknownVertex(w.start)
        at = w.start
        for i, e in enumerate(w.edges):
            if not 0 <= e < self.y.num_edges:
                raise UnknownEdge(e)
            if self.y.src(e) != at:
                raise BrokenPath(i)
            at = self.y.dst(e)
        for v, g in zip(self.vertex_sequence(w), w.coefficients):
            if not 0 <= g < self.vertex_groups[v].order:
                raise UnknownElement(v, g)
        return w

    def is_loop(self, w: GWord) -> bool:
        return w.start == self.base_vertex and self.end_vertex(w) == self.base_vertex

    def reduce(self, w: GWord) -> GWord:
        """
        Remove every pinch e · ω_e(c) · inv(e) by merging α_e(c) into the
        neighbouring coefficients. Never lengthens the word.
        """
        coefficients = [w.coefficients[0]]
        edges: List[int] = []
        for e, g in zip(w.edges, w.coefficients[1:]):
            if edges and e == edges[-1] ^ 1:
                last = edges[-1]
                omega = self.omega(last)
                if omega.contains(coefficients[-1]):
                    c = omega.preimage(coefficients[-1])
                    edges.pop()
                    coefficients.pop()
                    group = self.vertex_groups[self.y.src(last)]
                    coefficients[-1] = group.product(coefficients[-1], self.alpha(last)(c), g)
                    continue
            edges.append(e)
            coefficients.append(g)
        return GWord(w.start, tuple(coefficients), tuple(edges))

    def normal_form(self, w: GWord) -> GWord:
        """
        Canonical representative: reduce, then sweep left to right writing
        each g_i (i < n) as t·α_{e_{i+1}}(c) with t a transversal
        representative and pushing ω_{e_{i+1}}(c) into g_{i+1}.
        """
        reduced = self.reduce(w)
        coefficients = list(reduced.coefficients)
        for i, e in enumerate(reduced.edges):
            t, c = self.alpha(e).decompose(coefficients[i])
            coefficients[i] = t
            group = self.vertex_groups[self.y.dst(e)]
            coefficients[i + 1] = group.mul(self.omega(e)(c), coefficients[i + 1])
        return GWord(reduced.start, tuple(coefficients), reduced.edges)

    def is_normal(self, w: GWord) -> bool:
        return self.normal_form(w) == w

    def concat(self, a: GWord, b: GWord) -> GWord:
        """Concatenation without normalization."""
        end = self.end_vertex(a)
        if end != b.start:
            raise BaseMismatch(end, b.start)
        joint = self.vertex_groups[end].mul(a.coefficients[-1], b.coefficients[0])
        return GWord(
            a.start,
            a.coefficients[:-1] + (joint,) + b.coefficients[1:],
            a.edges + b.edges,
        )

    def multiply(self, a: GWord, b: GWord) -> GWord:
        return self.normal_form(self.concat(a, b))

    def product(self, *words: GWord) -> GWord:
        result = self.identity()
        for w in words:
            result = self.concat(result, w)
        return self.normal_form(result)

    def inverse_raw(self, a: GWord) -> GWord:
        vertices = self.vertex_sequence(a)
        coefficients = tuple(
            self.vertex_groups[v].inv(g)
            for v, g in zip(reversed(vertices), reversed(a.coefficients))
        )
        return GWord(vertices[-1], coefficients, tuple(e ^ 1 for e in reversed(a.edges)))

    def invert(self, a: GWord) -> GWord:
        return self.normal_form(self.inverse_raw(a))

    def equal(self, a: GWord, b: GWord) -> bool:
        return self.normal_form(a) == self.normal_form(b)

    # --- S-presentation ---

    def _spres_letter(self, letter: SPresLetter) -> GWord:
        if isinstance(letter, VertexLetter):
            v, g = letter
            if not 0 <= v < self.y.num_vertices:
                raise UnknownVertex(v)
            if not 0 <= g < self.vertex_groups[v].order:
                raise UnknownElement(v, g)
            r = self.tree_edges_to(v)
            back = tuple(e ^ 1 for e in reversed(r))
            return GWord(self.base_vertex, (0,) * len(r) + (g,) + (0,) * len(r), r + back)

        k, sign = letter
        if not 0 <= k < self.y.num_positive or sign not in (1, -1):
            raise UnknownEdge(letter.edge)
        e = 2 * k if sign > 0 else 2 * k + 1
        r_src = self.tree_edges_to(self.y.src(e))
        r_dst = self.tree_edges_to(self.y.dst(e))
        edges = r_src + (e,) + tuple(d ^ 1 for d in reversed(r_dst))
        return GWord(self.base_vertex, (0,) * (len(edges) + 1), edges)

    def from_spres(self, letters: Sequence[SPresLetter]) -> GWord:
        """
        Loop-form image of an S-presentation word.

        Vertex letter (v, g) becomes r_v · g · r_v⁻¹ and t_e becomes
        r_src(e) · e · r_dst(e)⁻¹, so tree edges map to the identity.
        """
        word = self.identity()
        for letter in letters:
            word = self.concat(word, self._spres_letter(letter))
        return self.normal_form(word)

    # --- sampling and enumeration ---

    @cached_property
    def _pinch_free_steps(self) -> np.ndarray:
        """steps[d, e] = coefficients t allowed before edge e right after edge d."""
        y = self.y
        steps = np.zeros((y.num_edges, y.num_edges))
        for d in y.edges:
            for e in y.out_edges[y.dst(d)]:
                steps[d, e] = len(self.alpha(e).transversal) - (e == d ^ 1)
        return steps

    def _completions(self, n: int) -> List[np.ndarray]:
        """counts[j][d] = normal-form endings with exactly j more edges after edge d."""
        order = self.base_group.order
        counts = [np.array(
            [order if self.y.dst(d) == self.base_vertex else 0 for d in self.y.edges], dtype=float
        )]
        for _ in range(n - 1):
            counts.append(self._pinch_free_steps @ counts[-1])
        return counts

    def random_element(self, syllables: int, seed: Union[int, Sequence[int], None] = None) -> GWord:
        """
        Seeded random loop at the base vertex with at most ``syllables`` edges.

        Uniform over normal forms: non-backtracking counts weight every edge
        choice by the number of reduced endings it leaves, and each coefficient
        is a uniform transversal representative (never the pinching one).
        """
        rng = np.random.default_rng(seed)
        base = self.base_vertex
        counts = self._completions(syllables)
        sizes = [len(self.alpha(e).transversal) for e in self.y.edges]
        totals = [float(self.base_group.order)] + [
            sum(sizes[e] * counts[k - 1][e] for e in self.y.out_edges[base])
            for k in range(1, syllables + 1)
        ]
        weights = np.array(totals)
        k = int(rng.choice(len(weights), p=weights / weights.sum()))

        v, last = base, -1
        coefficients: List[int] = []
        edges: List[int] = []
        for remaining in range(k, 0, -1):
            options = self.y.out_edges[v]
            weights = np.array(
                [(sizes[e] - (e == last ^ 1)) * counts[remaining - 1][e] for e in options], dtype=float
            )
            e = int(options[rng.choice(len(options), p=weights / weights.sum())])
            reps = [t for t in self.alpha(e).transversal if not (e == last ^ 1 and t == 0)]
            coefficients.append(int(reps[rng.integers(len(reps))]))
            edges.append(e)
            v, last = self.y.dst(e), e
        coefficients.append(int(rng.integers(self.base_group.order)))
        return GWord(base, tuple(coefficients), tuple(edges))

    def iter_normal_forms(self, max_edges: int) -> Iterator[GWord]:
        """Every normal-form loop at the base vertex with at most ``max_edges`` edges."""
        base = self.base_vertex
        base_elements = self.base_group.elements
        for g in base_elements:
            yield GWord(base, (g,))

        def extend(coefficients: Tuple[int, ...], edges: Tuple[int, ...], v: int) -> Iterator[GWord]:
            if len(edges) == max_edges:
                return
            for e in self.y.out_edges[v]:
                pinch_possible = bool(edges) and e == edges[-1] ^ 1
                for t in self.alpha(e).transversal:
                    if pinch_possible and t == 0:
                        continue
                    prefix = coefficients + (t,)
                    path = edges + (e,)
                    w = self.y.dst(e)
                    if w == base:
                        for g in base_elements:
                            yield GWord(base, prefix + (g,), path)
                    yield from extend(prefix, path, w)

        yield from extend((), (), base)


# === Validation ===

def validate_gog(
    y: SerreGraph,
    vertex_groups: Sequence[FiniteGroup],
    edge_groups: Sequence[FiniteGroup],
    alpha_maps: Sequence[Union[Sequence[int], Monomorphism]],
    base_vertex: int = 0,
) -> GraphOfGroups:
    """
    Validate a graph of groups.

    Args:
        y: Underlying graph (must be connected)
        vertex_groups: One group per vertex
        edge_groups: One group per positive edge, or one per directed edge
            (then e and inv(e) must carry the same object)
        alpha_maps: Element maps α_e per directed edge, into G_src(e)
        base_vertex: Base vertex for loops

    Returns:
        Validated GraphOfGroups

    Raises:
        Disconnected, EdgePairGroupMismatch, NotInjective, NotHomomorphism, SchemaError
    """
    # 1. Shape of the data
    if len(vertex_groups) != y.num_vertices:
        raise SchemaError(f"{len(vertex_groups)} vertex groups for {y.num_vertices} vertices")
    if not 0 <= base_vertex < y.num_vertices:
        raise UnknownVertex(base_vertex)
    check_connected(y, base_vertex)

    # 2. Edge groups, paired
    if len(edge_groups) == y.num_positive:
        per_edge: List[FiniteGroup] = []
        for g in edge_groups:
            per_edge.extend((g, g))
    elif len(edge_groups) == y.num_edges:
        per_edge = list(edge_groups)
        for e in y.positive:
            if per_edge[e] is not per_edge[e ^ 1]:
                raise EdgePairGroupMismatch(e)
    else:
        raise SchemaError(f"{len(edge_groups)} edge groups for {y.num_positive} edge pairs")

    # 3. Embeddings, checked exhaustively
    if len(alpha_maps) != y.num_edges:
        raise SchemaError(f"{len(alpha_maps)} embeddings for {y.num_edges} directed edges")
    alphas: List[Monomorphism] = []
    for e, raw in enumerate(alpha_maps):
        source, target = per_edge[e], vertex_groups[y.src(e)]
        if isinstance(raw, Monomorphism):
            if raw.source is not source or raw.target is not target:
                raise EdgePairGroupMismatch(e)
            alphas.append(raw)
        else:
            alphas.append(validate_mono(source, target, raw))

    gog = GraphOfGroups(
        y=y,
        vertex_groups=tuple(vertex_groups),
        edge_groups=tuple(per_edge),
        alphas=tuple(alphas),
        base_vertex=base_vertex,
        spanning=spanning_tree(y, base_vertex),
    )
    logger.debug(
        f"validated graph of groups: |V|={y.num_vertices} |E+|={y.num_positive} "
        f"m'={gog.m_prime} shape={gog.shape}"
    )
    return gog
