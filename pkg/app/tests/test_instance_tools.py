"""
Tests for instance documents and S-presentation words.
"""
import json

import pytest
from hypothesis import given, strategies as st

from app.core.errors import NotAGroup, SchemaError, UnknownSubgroup, WordSyntaxError
from app.tools.fixtures import SHIPPED, get_fixture
from app.tools.instance_tools import (
    build_gog,
    canonical_json,
    document_from_gog,
    instance_digest,
    load_instance,
    parse_instance,
    parse_word,
    serialize_instance,
    spres_word,
    subgroup_generators,
    tokenize_word,
)

GOGS = [get_fixture(name).gog for name in ("z2_z3", "z2_hnn", "z4_amalg_z6", "z2_z3_loop", "f2_theta")]


def test_canonical_json_is_compact_and_sorted():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_documents_match_catalog(fixture_dir, name):
    doc = load_instance(fixture_dir / f"{name}.json")
    assert doc == get_fixture(name).document()


@pytest.mark.parametrize("name", SHIPPED)
def test_documents_round_trip(fixture_dir, name):
    doc = load_instance(fixture_dir / f"{name}.json")
    assert parse_instance(serialize_instance(doc)) == doc
    gog = build_gog(doc)
    assert document_from_gog(gog, doc.subgroups, doc.name) == doc


def test_digest_ignores_formatting(fixture_dir):
    text = (fixture_dir / "z2_z3.json").read_text(encoding="utf-8")
    compact = json.dumps(json.loads(text))
    assert instance_digest(parse_instance(text)) == instance_digest(parse_instance(compact))
    assert len(instance_digest(parse_instance(text))) == 64


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("graph"),
        lambda d: d.update(vertex_groups=d["vertex_groups"][:1]),
        lambda d: d.update(base_vertex=5),
        lambda d: d.update(unexpected=True),
        lambda d: d["graph"]["edges"][0].update(dst=9),
        lambda d: d.update(vertex_groups=[[[0, 1]], d["vertex_groups"][1]]),
    ],
)
def test_schema_errors(fixture_dir, mutate):
    raw = json.loads((fixture_dir / "z2_z3.json").read_text(encoding="utf-8"))
    mutate(raw)
    with pytest.raises(SchemaError) as info:
        parse_instance(json.dumps(raw))
    assert info.value.exit_code == 2


def test_unreadable_input(tmp_path):
    with pytest.raises(SchemaError):
        parse_instance("{not json")
    with pytest.raises(SchemaError):
        load_instance(tmp_path / "missing.json")


def test_bad_group_table_is_an_algebra_error(fixture_dir):
    raw = json.loads((fixture_dir / "z2_z3.json").read_text(encoding="utf-8"))
    raw["vertex_groups"][0] = [[0, 1], [1, 1]]
    with pytest.raises(NotAGroup) as info:
        build_gog(parse_instance(json.dumps(raw)))
    assert info.value.exit_code == 3


def test_word_tokens(z2z3):
    letters = tokenize_word("0:1 e0+ 1:2 0-")
    assert len(letters) == 4
    with pytest.raises(WordSyntaxError) as info:
        parse_word(z2z3.gog, "0:1 x")
    assert info.value.exit_code == 2


def test_unknown_subgroup(fixture_dir):
    doc = load_instance(fixture_dir / "z2_z3.json")
    gog = build_gog(doc)
    assert len(subgroup_generators(doc, gog, "kernel")) == 2
    with pytest.raises(UnknownSubgroup):
        subgroup_generators(doc, gog, "missing")


def test_spres_word_spelling(z2z3, hnn):
    assert spres_word(z2z3.gog, parse_word(z2z3.gog, "0:1 1:1")) == "0:1 e0+ 1:1 e0-"
    assert spres_word(hnn.gog, parse_word(hnn.gog, "0:1 e0+ 0:1")) == "0:1 e0+ 0:1"


@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=0, max_value=5))
def test_spres_word_parses_back(seed, syllables):
    for gog in GOGS:
        w = gog.random_element(syllables, seed=seed)
        assert parse_word(gog, spres_word(gog, w)) == w
