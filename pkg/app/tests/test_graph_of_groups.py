"""
Tests for graphs of groups: validation, normal forms, S-presentation words.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from app.core.errors import Disconnected, SchemaError, UnknownEdge, UnknownVertex
from app.core.finite_group import cyclic_group, trivial_group
from app.core.graph_of_groups import GWord, StableLetter, VertexLetter, validate_gog
from app.core.serre_graph import SerreGraph
from app.tools.fixtures import get_fixture
from app.tools.instance_tools import parse_word

Z2_Z3 = get_fixture("z2_z3").gog
Z2_HNN = get_fixture("z2_hnn").gog
AMALGAM = get_fixture("z4_amalg_z6").gog

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_validate_gog_rejects_bad_shapes():
    one = trivial_group()
    y = SerreGraph.from_edges(2, [])
    with pytest.raises(Disconnected):
        validate_gog(y, [one, one], [], [])
    loop = SerreGraph.from_edges(1, [(0, 0)])
    with pytest.raises(SchemaError):
        validate_gog(loop, [one, one], [one], [[0], [0]])
    with pytest.raises(SchemaError):
        validate_gog(loop, [one], [one], [[0]])


def test_shape_and_euler_characteristic(f2):
    assert Z2_Z3.shape == "amalgam"
    assert Z2_HNN.shape == "hnn"
    assert f2.gog.shape == "general"
    assert Z2_Z3.euler_characteristic == Fraction(-1, 6)
    assert f2.gog.euler_characteristic == Fraction(-1)
    assert AMALGAM.m_prime == 2
    assert AMALGAM.n_upper == 6
    assert f2.gog.is_free_group


def test_spres_words_become_loops():
    w = parse_word(Z2_Z3, "0:1 1:1")
    assert w == GWord(0, (1, 1, 0), (0, 1))
    # tree edges map to the identity
    assert parse_word(Z2_Z3, "e0+").is_trivial


def test_reduce_removes_pinches():
    # 1 · e0 · 0 · e0⁻¹ · 1 collapses through the trivial edge group
    pinched = GWord(0, (1, 0, 1), (0, 1))
    assert Z2_Z3.reduce(pinched) == GWord(0, (0,), ())
    # a nontrivial Z/3 coefficient blocks the pinch
    kept = GWord(0, (1, 1, 1), (0, 1))
    assert Z2_Z3.reduce(kept) == kept


def test_from_spres_letters():
    assert Z2_Z3.from_spres([VertexLetter(0, 1), VertexLetter(1, 1)]) == GWord(0, (1, 1, 0), (0, 1))
    t = Z2_HNN.from_spres([StableLetter(0, 1)])
    assert len(t) == 1
    assert Z2_HNN.from_spres([StableLetter(0, -1)]) == Z2_HNN.invert(t)
    assert Z2_HNN.from_spres([]) == Z2_HNN.identity()
    with pytest.raises(UnknownVertex):
        Z2_Z3.from_spres([VertexLetter(5, 0)])
    with pytest.raises(UnknownEdge):
        Z2_Z3.from_spres([StableLetter(3, 1)])


def test_amalgamated_elements_agree():
    assert AMALGAM.equal(parse_word(AMALGAM, "0:2 1:3"), AMALGAM.identity())
    assert parse_word(AMALGAM, "0:2") == parse_word(AMALGAM, "1:3")
    assert parse_word(AMALGAM, "0:2") == GWord(0, (2,))


def test_hnn_relation():
    gog = get_fixture("z4_hnn_z2").gog
    assert parse_word(gog, "e0+ 0:2 e0-") == parse_word(gog, "0:2")
    assert len(parse_word(gog, "e0+ 0:1 e0-")) == 2


def test_normal_form_counts():
    def exactly(gog, n):
        return sum(1 for w in gog.iter_normal_forms(n) if len(w) == n)

    assert exactly(Z2_HNN, 1) == 8
    assert exactly(Z2_HNN, 2) == 24
    assert exactly(Z2_Z3, 2) == 8
    assert all(Z2_HNN.is_normal(w) for w in Z2_HNN.iter_normal_forms(2))


def test_random_element_is_deterministic():
    a = Z2_Z3.random_element(6, seed=11)
    b = Z2_Z3.random_element(6, seed=11)
    assert a == b
    assert Z2_Z3.is_normal(a)
    assert Z2_Z3.is_loop(a)
    assert len(Z2_HNN.random_element(0, seed=3)) == 0


def test_random_elements_are_uniform_over_short_normal_forms():
    f2 = get_fixture("f2_rose").gog
    samples = [f2.random_element(2, seed=s) for s in range(10_000)]
    assert set(samples) == set(f2.iter_normal_forms(2))
    # 12 of the 17 reduced words of length at most 2 have length exactly 2
    share = sum(len(w) == 2 for w in samples) / len(samples)
    assert 0.66 < share < 0.75

    amalgam = {AMALGAM.random_element(2, seed=s) for s in range(4_000)}
    assert amalgam == set(AMALGAM.iter_normal_forms(2))


@given(seeds, st.integers(min_value=0, max_value=6))
def test_inverse_cancels(seed, syllables):
    for gog in (Z2_Z3, Z2_HNN, AMALGAM):
        w = gog.random_element(syllables, seed=seed)
        assert gog.multiply(w, gog.invert(w)).is_trivial
        assert gog.normal_form(w) == w


@hyp_settings(max_examples=50)
@given(seeds, seeds, seeds)
def test_multiplication_is_associative(s1, s2, s3):
    for gog in (Z2_Z3, AMALGAM):
        a, b, c = (gog.random_element(4, seed=s) for s in (s1, s2, s3))
        assert gog.multiply(gog.multiply(a, b), c) == gog.multiply(a, gog.multiply(b, c))


def test_validate_gog_with_nontrivial_edge_group():
    z2, z4 = cyclic_group(2), cyclic_group(4)
    y = SerreGraph.from_edges(1, [(0, 0)])
    gog = validate_gog(y, [z4], [z2], [[0, 2], [0, 2]])
    assert gog.alpha(0).index == 2
    assert gog.omega(0).images == (0, 2)
