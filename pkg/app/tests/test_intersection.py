"""
Tests for fiber products, intersection cores and the bound report.
"""
import pytest

from app.core.errors import AmbientMismatch, FreeActionViolation
from app.core.intersection import (
    bound_report,
    conjugate_components,
    degree_chain_diagnostics,
    fiber_product,
    fold_subgroup,
    intersection_core,
    m_lower,
    multiplicity_table,
    verify_bound,
    vertex_fiber_counts,
)
from app.core.subgroup_folding import subgroup_graph
from app.tools.fixtures import get_fixture
from app.tools.instance_tools import parse_word


def product(fixture, h, k):
    left = subgroup_graph(fixture.gog, fixture.generators(h))
    right = subgroup_graph(fixture.gog, fixture.generators(k))
    return fiber_product(left, right)


@pytest.mark.parametrize(
    "h, k, rank, reduced",
    [
        ("h_mixed", "k_mixed", 2, 1),
        ("x", "xsq", 1, 0),
        ("x", "y", 0, 0),
        ("whole", "whole", 2, 1),
    ],
)
def test_free_group_intersections(f2, h, k, rank, reduced):
    data = intersection_core(product(f2, h, k))
    assert data.rank == rank
    assert data.reduced_rank == reduced


def test_whole_group_bound(f2):
    report = bound_report(product(f2, "whole", "whole"))
    assert report.holds
    assert report.reduced_rank_hk == 1
    assert report.bound == 6
    assert report.m_prime == 1
    assert report.verdict("free-group-product").holds


def test_mixed_intersection_components(f2):
    fp = product(f2, "h_mixed", "k_mixed")
    components = conjugate_components(fp)
    assert len(components) == 1
    assert components[0].is_base
    assert components[0].rank == 2
    assert intersection_core(fp).degree_profile == (4, 2, 2)


def test_intersection_membership(f2):
    fp = product(f2, "x", "xsq")
    gog = f2.gog
    assert fp.member(parse_word(gog, "e0+ e0+"))
    assert fp.member(parse_word(gog, "e0- e0- e0- e0-"))
    assert not fp.member(parse_word(gog, "e0+"))


def test_self_intersection_reproduces_subgroup_graph(z2z3):
    delta = subgroup_graph(z2z3.gog, z2z3.generators("kernel"))
    base = fiber_product(delta, delta).base_graph
    assert base.block_types == delta.block_types
    assert base.packets == delta.packets


def test_kernel_meets_cyclic_subgroup(z2z3):
    report = verify_bound(z2z3.gog, z2z3.generators("kernel"), z2z3.generators("cyclic_ab"))
    assert report.holds
    assert report.rank_hk == 1
    assert report.reduced_rank_hk == 0
    assert report.shape == "amalgam"


def test_different_ambient_groups_rejected(f2):
    other = get_fixture("f2_rose")
    left = subgroup_graph(f2.gog, f2.generators("x"))
    right = subgroup_graph(other.gog, other.generators("x"))
    with pytest.raises(AmbientMismatch):
        fiber_product(left, right)


def test_violation_is_tagged(z2z3):
    with pytest.raises(FreeActionViolation) as info:
        verify_bound(z2z3.gog, z2z3.generators("kernel"), z2z3.generators("torsion"))
    assert info.value.subgroup == "K"
    with pytest.raises(FreeActionViolation) as info:
        fold_subgroup(z2z3.gog, z2z3.generators("torsion"), "torsion")
    assert info.value.subgroup == "torsion"


@pytest.mark.parametrize(
    "name, h, k",
    [
        ("z4_amalg_z6", "commutators", "cyclic_ab"),
        ("z4_amalg_z6", "commutators", "commutators"),
        ("z3_z3", "commutators", "cyclic_ab"),
        ("z4_amalg_z4", "commutator", "cyclic"),
        ("z2_hnn", "kernel", "t"),
        ("z4_hnn_z2", "pair", "t"),
        ("z2_z3_loop", "kernel", "commutator"),
    ],
)
def test_bound_holds_on_fixtures(name, h, k):
    fixture = get_fixture(name)
    fp = product(fixture, h, k)
    report = bound_report(fp)
    assert report.holds, report.failed
    assert 1 <= report.m_lower <= report.m_prime
    assert report.reduced_rank_hk <= report.bound


def test_verdicts_follow_shape(f2, z2z3, hnn, amalgam):
    def names(fixture, h, k):
        return {v.name for v in bound_report(product(fixture, h, k)).verdicts}

    free = names(f2, "x", "y")
    assert {"main-bound", "free-product-bound", "free-group-product"} <= free
    assert not any(n.endswith("general-bound") for n in free)

    assert "amalgam-bound" in names(z2z3, "kernel", "cyclic_ab")
    assert "hnn-bound" in names(hnn, "kernel", "t")
    amalgam_names = names(amalgam, "commutators", "cyclic_ab")
    assert "amalgam-bound" in amalgam_names
    assert "free-product-bound" not in amalgam_names
    assert "free-group-product" not in amalgam_names


def test_informational_verdicts_do_not_gate(f2):
    report = bound_report(product(f2, "whole", "whole"))
    assert not report.verdict("free-group-product").gate
    assert not report.verdict("vertex-fiber-edge-bound").gate
    assert report.verdict("main-bound").gate


def test_degree_chain_for_whole_group(f2):
    fp = product(f2, "whole", "whole")
    records = degree_chain_diagnostics(fp)
    assert len(records) == 1
    pair = records[0]
    assert (pair.degree_a, pair.degree_b) == (4, 4)
    assert pair.fiber_degrees == (4,)
    assert pair.excess == 2
    assert pair.pair_bound == 12
    assert pair.holds


def test_multiplicities_in_free_group(f2):
    fp = product(f2, "h_mixed", "k_mixed")
    table = multiplicity_table(fp)
    assert set(table.values()) == {1}
    assert m_lower(table) == 1
    assert m_lower({}) == 1
    assert all(count == 1 for count in vertex_fiber_counts(fp).values())


def test_trivial_intersection_has_empty_diagnostics(f2):
    fp = product(f2, "x", "y")
    assert multiplicity_table(fp) == {}
    assert conjugate_components(fp) == []
    report = bound_report(fp)
    assert report.holds
    assert report.degrees_hk == []


@pytest.mark.parametrize(
    "name, h, k",
    [
        ("f2_rose", "h_mixed", "k_mixed"),
        ("z2_z3", "kernel", "cyclic_ab"),
        ("z4_amalg_z6", "commutators", "cyclic_ab"),
        ("z2_hnn", "kernel", "t"),
        ("z2_z3_loop", "kernel", "commutator"),
    ],
)
def test_bound_is_symmetric(name, h, k):
    fixture = get_fixture(name)
    forward = verify_bound(fixture.gog, fixture.generators(h), fixture.generators(k))
    backward = verify_bound(fixture.gog, fixture.generators(k), fixture.generators(h))
    assert forward.reduced_rank_hk == backward.reduced_rank_hk
    assert forward.rank_hk == backward.rank_hk
    assert forward.m_prime == backward.m_prime
    assert forward.m_lower == backward.m_lower
    assert forward.bound == backward.bound
    assert sorted(forward.degrees_hk) == sorted(backward.degrees_hk)


def test_kernel_meets_itself(z2z3):
    kernel = z2z3.generators("kernel")
    report = verify_bound(z2z3.gog, kernel, kernel)
    assert report.holds
    assert report.rank_hk == 2
    assert report.reduced_rank_hk == 1


def test_multiplicity_two_over_central_edge_group():
    # ab and ab³ differ by the amalgamated central involution; their squares agree
    gog = get_fixture("z4_amalg_z4").gog
    h = [parse_word(gog, "0:1 1:1")]
    k = [parse_word(gog, "0:1 1:3")]
    fp = fiber_product(fold_subgroup(gog, h, "H"), fold_subgroup(gog, k, "K"))
    table = multiplicity_table(fp)
    assert sum(table.values()) == 4
    assert m_lower(table) == 2

    report = verify_bound(gog, h, k)
    assert report.holds
    assert report.rank_hk == 1
    assert report.m_lower == report.m_prime == 2
