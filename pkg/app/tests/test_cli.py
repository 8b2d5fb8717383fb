"""
Tests for the command-line interface and its exit codes.
"""
import json

import pytest

from app.cli import main
from app.config.settings import settings


@pytest.fixture
def z2z3_path(fixture_dir):
    return str(fixture_dir / "z2_z3.json")


def test_validate(capsys, z2z3_path):
    assert main(["validate", z2z3_path]) == 0
    out = capsys.readouterr().out
    assert "status: valid" in out
    assert "kind: free product" in out


def test_validate_schema_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"graph": {"vertices": 1}}', encoding="utf-8")
    assert main(["validate", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_validate_algebra_error(tmp_path, z2z3_path):
    raw = json.loads(open(z2z3_path, encoding="utf-8").read())
    raw["vertex_groups"][0] = [[0, 1], [1, 1]]
    path = tmp_path / "not_a_group.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    assert main(["validate", str(path)]) == 3


def test_rank(capsys, z2z3_path):
    assert main(["rank", z2z3_path, "kernel", "--gens"]) == 0
    out = capsys.readouterr().out
    assert "rank: 2" in out
    assert "reduced rank: 1" in out
    assert "free generators:" in out


def test_rank_writes_dot(tmp_path, z2z3_path):
    target = tmp_path / "kernel.dot"
    assert main(["rank", z2z3_path, "kernel", "--dot", str(target)]) == 0
    assert target.read_text(encoding="utf-8").startswith("digraph")


def test_rank_of_torsion_subgroup_is_a_violation(capsys, z2z3_path):
    assert main(["rank", z2z3_path, "torsion"]) == 4
    assert "free action violated" in capsys.readouterr().err


def test_unknown_subgroup(z2z3_path):
    assert main(["rank", z2z3_path, "missing"]) == 3


def test_intersect(capsys, fixture_dir):
    path = str(fixture_dir / "f2_rose.json")
    assert main(["intersect", path, "h_mixed", "k_mixed", "--diagnostics"]) == 0
    out = capsys.readouterr().out
    assert "H∩K: rank 2, reduced rank 1" in out
    assert "result: holds" in out
    assert "degree chain" in out


def test_member(capsys, z2z3_path):
    assert main(["member", z2z3_path, "kernel", "0:1 1:1 0:1 1:2", "-L", "1"]) == 0
    out = capsys.readouterr().out
    assert "folding membership: yes" in out
    assert "enumeration (length 1): found" in out


def test_oracle_inconclusive_at_radius_zero(capsys, fixture_dir):
    path = str(fixture_dir / "f2_rose.json")
    assert main(["oracle", path, "x", "-R", "0", "-L", "2"]) == 0
    assert "verdict: inconclusive" in capsys.readouterr().out


def test_oracle_reports_violation(capsys, z2z3_path):
    assert main(["oracle", z2z3_path, "torsion", "-R", "4", "-L", "2"]) == 4
    assert "fixed vertex: base" in capsys.readouterr().out


def test_cap_override_is_scoped(fixture_dir):
    path = str(fixture_dir / "f2_rose.json")
    before = settings.max_ball_radius
    assert main(["--max-ball-radius", "2", "oracle", path, "x", "-R", "3", "-L", "2"]) == 6
    assert settings.max_ball_radius == before


def test_json_report(tmp_path, z2z3_path):
    target = tmp_path / "report.json"
    assert main(["--seed", "5", "--json", str(target), "intersect", z2z3_path, "kernel", "cyclic_ab"]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["seed"] == 5
    assert data["bound"]["rank_hk"] == 1


def test_timings_are_printed(capsys, z2z3_path):
    assert main(["--timings", "rank", z2z3_path, "cyclic_ab"]) == 0
    assert "fold_h" in capsys.readouterr().out


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "vfkit" in capsys.readouterr().out
