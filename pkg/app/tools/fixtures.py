"""
Fixture Catalog.

Named graphs of finite groups with named subgroups, used by the tests, the
corpus generator and the shipped example documents. Subgroup words use the
S-presentation tokens of instance documents.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

from app.core.finite_group import (
    FiniteGroup,
    cyclic_group,
    dihedral_group,
    klein_group,
    subgroup_embedding,
    trivial_group,
)
from app.core.graph_of_groups import GraphOfGroups, GWord, validate_gog
from app.core.serre_graph import SerreGraph
from app.models.documents import InstanceDocument
from app.tools.instance_tools import document_from_gog, parse_word


@dataclass(frozen=True)
class Fixture:
    """
    A named instance.

    Attributes:
        name: Catalog key
        gog: Validated graph of groups
        subgroups: Generator words per subgroup name
        violations: Subgroups expected to meet a vertex-group conjugate
    """
    name: str
    gog: GraphOfGroups
    subgroups: Dict[str, List[str]]
    violations: Tuple[str, ...] = field(default=())

    def generators(self, subgroup: str) -> List[GWord]:
        return [parse_word(self.gog, w) for w in self.subgroups[subgroup]]

    @property
    def free_subgroups(self) -> List[str]:
        return [s for s in self.subgroups if s not in self.violations]

    def document(self) -> InstanceDocument:
        return document_from_gog(self.gog, self.subgroups, self.name)


def _graph(
    vertices: int,
    edges: Sequence[Tuple[int, int]],
    names: Sequence[str],
    vertex_names: Sequence[str],
) -> SerreGraph:
    return SerreGraph.from_edges(vertices, edges, vertex_labels=vertex_names, edge_labels=names)


def _single_edge(
    vertex_groups: Sequence[FiniteGroup],
    edge: Tuple[int, int],
    edge_group: FiniteGroup,
    alpha: Sequence[int],
    omega: Sequence[int],
    name: str = "t",
) -> GraphOfGroups:
    y = _graph(len(vertex_groups), [edge], [name], [f"v{i}" for i in range(len(vertex_groups))])
    src, dst = vertex_groups[edge[0]], vertex_groups[edge[1]]
    return validate_gog(
        y,
        list(vertex_groups),
        [edge_group],
        [subgroup_embedding(edge_group, src, alpha), subgroup_embedding(edge_group, dst, omega)],
    )


def _trivial_graph(vertices: int, edges: Sequence[Tuple[int, int]], names: Sequence[str]) -> GraphOfGroups:
    y = _graph(vertices, edges, names, [f"v{i}" for i in range(vertices)])
    one = trivial_group()
    return validate_gog(y, [one] * vertices, [one] * len(edges), [[0]] * (2 * len(edges)))


def _free_product(a: FiniteGroup, b: FiniteGroup) -> GraphOfGroups:
    one = trivial_group()
    return _single_edge([a, b], (0, 1), one, [0], [0])


# === Catalog ===

def f1_circle() -> Fixture:
    return Fixture("f1_circle", _trivial_graph(1, [(0, 0)], ["t"]), {
        "whole": ["e0+"],
        "square": ["e0+ e0+"],
    })


def f2_rose() -> Fixture:
    return Fixture("f2_rose", _trivial_graph(1, [(0, 0), (0, 0)], ["x", "y"]), {
        "whole": ["e0+", "e1+"],
        "x": ["e0+"],
        "xsq": ["e0+ e0+"],
        "y": ["e1+"],
        "conj": ["e0+", "e1+ e0+ e1-"],
        "h_mixed": ["e0+ e0+", "e1+"],
        "k_mixed": ["e0+", "e1+ e1+"],
    })


def f2_rose_extended() -> Fixture:
    base = f2_rose()
    return Fixture("f2_rose_extended", base.gog, {
        **base.subgroups,
        "squares": ["e0+ e0+", "e1+ e1+", "e0+ e1+ e0+ e1+"],
    })


def f2_theta() -> Fixture:
    gog = _trivial_graph(2, [(0, 1), (0, 1), (0, 1)], ["a", "b", "c"])
    return Fixture("f2_theta", gog, {
        "whole": ["e1+", "e2+"],
        "cyclic": ["e1+ e2-"],
    })


def z2_z2() -> Fixture:
    return Fixture("z2_z2", _free_product(cyclic_group(2), cyclic_group(2)), {
        "cyclic_ab": ["0:1 1:1"],
        "ab_squared": ["0:1 1:1 0:1 1:1"],
        "torsion": ["1:1"],
    }, violations=("torsion",))


def z2_z3() -> Fixture:
    return Fixture("z2_z3", _free_product(cyclic_group(2), cyclic_group(3)), {
        "kernel": ["0:1 1:1 0:1 1:2", "0:1 1:2 0:1 1:1"],
        "cyclic_ab": ["0:1 1:1"],
        "torsion": ["0:1"],
    }, violations=("torsion",))


def z3_z3() -> Fixture:
    return Fixture("z3_z3", _free_product(cyclic_group(3), cyclic_group(3)), {
        "commutators": [
            "0:1 1:1 0:2 1:2",
            "0:1 1:2 0:2 1:1",
            "0:2 1:1 0:1 1:2",
            "0:2 1:2 0:1 1:1",
        ],
        "cyclic_ab": ["0:1 1:1"],
    })


def z4_amalg_z6() -> Fixture:
    gog = _single_edge([cyclic_group(4), cyclic_group(6)], (0, 1), cyclic_group(2), [0, 2], [0, 3])
    return Fixture("z4_amalg_z6", gog, {
        "commutators": ["0:1 1:1 0:3 1:5", "0:1 1:2 0:3 1:4"],
        "cyclic_ab": ["0:1 1:1"],
        "torsion": ["0:2"],
    }, violations=("torsion",))


def z4_amalg_z4() -> Fixture:
    gog = _single_edge([cyclic_group(4), cyclic_group(4)], (0, 1), cyclic_group(2), [0, 2], [0, 2])
    return Fixture("z4_amalg_z4", gog, {
        "cyclic": ["0:1 1:3"],
        "commutator": ["0:1 1:1 0:3 1:3"],
    })


def s3_amalg_z4() -> Fixture:
    # s (element 3 of the dihedral group) is amalgamated with the square of the Z/4 generator
    gog = _single_edge([dihedral_group(3), cyclic_group(4)], (0, 1), cyclic_group(2), [0, 3], [0, 2])
    return Fixture("s3_amalg_z4", gog, {
        "cyclic": ["0:1 1:1"],
        "torsion": ["0:1"],
    }, violations=("torsion",))


def z2_hnn() -> Fixture:
    one = trivial_group()
    gog = _single_edge([cyclic_group(2)], (0, 0), one, [0], [0])
    return Fixture("z2_hnn", gog, {
        "kernel": ["e0+", "0:1 e0+ 0:1"],
        "t": ["e0+"],
        "torsion": ["0:1"],
    }, violations=("torsion",))


def z4_hnn_z2() -> Fixture:
    gog = _single_edge([cyclic_group(4)], (0, 0), cyclic_group(2), [0, 2], [0, 2])
    return Fixture("z4_hnn_z2", gog, {
        "pair": ["e0+", "0:1 e0+ 0:3"],
        "t": ["e0+"],
    })


def klein_hnn() -> Fixture:
    # α picks (1,0) and ω picks (0,1) in Z/2 × Z/2
    gog = _single_edge([klein_group()], (0, 0), cyclic_group(2), [0, 2], [0, 1])
    return Fixture("klein_hnn", gog, {
        "t": ["e0+"],
        "t_squared": ["e0+ e0+"],
    })


def z2_z3_loop() -> Fixture:
    one = trivial_group()
    y = _graph(2, [(0, 1), (0, 0)], ["s", "t"], ["v0", "v1"])
    gog = validate_gog(y, [cyclic_group(2), cyclic_group(3)], [one, one], [[0], [0], [0], [0]])
    return Fixture("z2_z3_loop", gog, {
        "kernel": ["e1+", "0:1 e1+ 0:1"],
        "commutator": ["e1+ 1:1 e1- 1:2"],
    })


CATALOG: Dict[str, Callable[[], Fixture]] = {
    "f1_circle": f1_circle,
    "f2_rose": f2_rose,
    "f2_rose_extended": f2_rose_extended,
    "f2_theta": f2_theta,
    "z2_z2": z2_z2,
    "z2_z3": z2_z3,
    "z3_z3": z3_z3,
    "z4_amalg_z6": z4_amalg_z6,
    "z4_amalg_z4": z4_amalg_z4,
    "s3_amalg_z4": s3_amalg_z4,
    "z2_hnn": z2_hnn,
    "z4_hnn_z2": z4_hnn_z2,
    "klein_hnn": klein_hnn,
    "z2_z3_loop": z2_z3_loop,
}

SHIPPED = ("f2_rose", "z2_z3", "z4_amalg_z6", "z2_hnn")


def get_fixture(name: str) -> Fixture:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(CATALOG)}") from None
