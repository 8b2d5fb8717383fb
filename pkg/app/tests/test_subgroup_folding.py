"""
Tests for wedge construction, folding, cores and membership.
"""
import pytest
from hypothesis import assume, given, settings as hyp_settings, strategies as st

from app.core.errors import FreeActionViolation, IdentityGenerator, NotClosed
from app.core.graph_of_groups import GWord
from app.core.subgroup_folding import (
    core_of,
    fold,
    free_generators,
    member,
    subgroup_graph,
    tree_degree,
    wedge,
)
from app.tools.fixtures import get_fixture
from app.tools.instance_tools import parse_word

Z2_Z3 = get_fixture("z2_z3")
F2 = get_fixture("f2_rose")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def same_graph(a, b) -> bool:
    return a.block_types == b.block_types and a.packets == b.packets


def test_cyclic_subgroup_of_free_product(z2z3):
    delta = subgroup_graph(z2z3.gog, z2z3.generators("cyclic_ab"))
    assert delta.num_blocks == 2
    assert len(delta.packets) == 2
    assert core_of(delta).rank == 1


def test_kernel_of_free_product(z2z3):
    delta = subgroup_graph(z2z3.gog, z2z3.generators("kernel"))
    data = core_of(delta)
    assert delta.num_blocks == 5
    assert len(delta.packets) == 6
    assert data.rank == 2
    assert data.reduced_rank == 1
    assert data.degree_profile == (3, 3, 2, 2, 2)
    assert data.half_degree_excess == data.reduced_rank


def test_hnn_kernel_is_one_block(hnn):
    delta = subgroup_graph(hnn.gog, hnn.generators("kernel"))
    assert delta.num_blocks == 1
    assert len(delta.packets) == 2
    assert core_of(delta).rank == 2


@pytest.mark.parametrize(
    "name, subgroup",
    [("z2_z3", "torsion"), ("z2_z2", "torsion"), ("z2_hnn", "torsion"), ("z4_amalg_z6", "torsion")],
)
def test_torsion_subgroups_raise(name, subgroup):
    fixture = get_fixture(name)
    with pytest.raises(FreeActionViolation) as info:
        subgroup_graph(fixture.gog, fixture.generators(subgroup))
    assert info.value.exit_code == 4


def test_free_fixtures_fold_cleanly():
    for name in ("f1_circle", "f2_rose_extended", "z3_z3", "z4_amalg_z4", "klein_hnn", "z2_z3_loop", "f2_theta"):
        fixture = get_fixture(name)
        for subgroup in fixture.free_subgroups:
            delta = subgroup_graph(fixture.gog, fixture.generators(subgroup))
            assert all(member(delta, g) for g in fixture.generators(subgroup))


def test_membership(z2z3):
    delta = subgroup_graph(z2z3.gog, z2z3.generators("kernel"))
    gog = z2z3.gog
    assert member(delta, gog.identity())
    assert member(delta, parse_word(gog, "0:1 1:1 0:1 1:2"))
    assert member(delta, gog.invert(parse_word(gog, "0:1 1:2 0:1 1:1")))
    assert not member(delta, parse_word(gog, "0:1 1:1"))
    assert not member(delta, parse_word(gog, "0:1"))


def test_membership_in_free_group(f2):
    gog = f2.gog
    xsq = subgroup_graph(gog, f2.generators("xsq"))
    assert member(xsq, parse_word(gog, "e0+ e0+ e0+ e0+"))
    assert member(xsq, parse_word(gog, "e0- e0-"))
    assert not member(xsq, parse_word(gog, "e0+"))
    assert not member(xsq, parse_word(gog, "e1+"))


def test_free_generators_form_a_basis(z2z3):
    delta = subgroup_graph(z2z3.gog, z2z3.generators("kernel"))
    basis = free_generators(delta)
    assert len(basis) == core_of(delta).rank
    assert all(member(delta, w) for w in basis)
    assert same_graph(subgroup_graph(z2z3.gog, basis), delta)


def test_wedge_rejects_bad_generators(z2z3):
    gog = z2z3.gog
    with pytest.raises(NotClosed):
        wedge(gog, [GWord(0, (0, 0), (0,))])
    with pytest.raises(IdentityGenerator) as info:
        wedge(gog, [parse_word(gog, "0:1 1:1"), gog.identity()])
    assert info.value.index == 1


def test_wedge_is_unfolded(z2z3):
    raw = wedge(z2z3.gog, z2z3.generators("kernel"))
    assert len(raw.packets) == 8
    assert raw.num_blocks == 9
    assert len(raw.identifications) == 2


def test_fold_order_reversed(z2z3):
    raw = wedge(z2z3.gog, z2z3.generators("kernel"))
    forward = fold(raw)
    backward = fold(raw, order=list(reversed(range(len(raw.packets)))))
    assert same_graph(forward, backward)


@hyp_settings(max_examples=40)
@given(st.permutations(list(range(8))))
def test_fold_is_confluent(order):
    raw = wedge(Z2_Z3.gog, Z2_Z3.generators("kernel"))
    assert same_graph(fold(raw, order=order), fold(raw))


@hyp_settings(max_examples=40)
@given(st.lists(st.tuples(seeds, st.integers(min_value=1, max_value=5)), min_size=1, max_size=3))
def test_random_free_group_subgroups(specs):
    gog = F2.gog
    generators = [gog.random_element(n, seed=s) for s, n in specs]
    assume(all(not g.is_trivial for g in generators))
    delta = subgroup_graph(gog, generators)
    assert all(member(delta, g) for g in generators)
    data = core_of(delta)
    assert data.rank <= len(generators)
    if data.rank:
        assert data.half_degree_excess == data.reduced_rank


def test_tree_degree(z2z3, amalgam, hnn):
    assert tree_degree(z2z3.gog, 0) == 2
    assert tree_degree(z2z3.gog, 1) == 3
    assert tree_degree(amalgam.gog, 0) == 2
    assert tree_degree(hnn.gog, 0) == 4


@hyp_settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["z2_z3", "z4_amalg_z6", "s3_amalg_z4", "z2_hnn", "klein_hnn", "z2_z3_loop"]),
    st.lists(st.tuples(seeds, st.integers(min_value=1, max_value=5)), min_size=1, max_size=3),
)
def test_folded_block_degree_within_tree_degree(name, specs):
    gog = get_fixture(name).gog
    generators = [gog.random_element(n, seed=s) for s, n in specs]
    assume(all(not g.is_trivial for g in generators))
    try:
        delta = subgroup_graph(gog, generators)
    except FreeActionViolation:
        return
    for block, v in enumerate(delta.block_types):
        assert delta.degree(block) <= tree_degree(gog, v)
