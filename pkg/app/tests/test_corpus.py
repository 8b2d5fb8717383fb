"""
Tests for the random corpus harness.
"""
import numpy as np
import pytest

import app.workflows.corpus as corpus
from app.workflows.corpus import PROFILES, run_corpus, sample_instance, summarize_corpus


def test_empty_corpus():
    summary = run_corpus(seed=1, count=0, oracle=False)
    assert summary["instances"] == 0
    assert summary["by_profile"] == []
    assert summary["failures"] == []


def test_unknown_profile():
    with pytest.raises(ValueError):
        run_corpus(seed=1, count=1, profile="nilpotent")


def test_sampling_is_reproducible():
    a = sample_instance(0, "mixed", np.random.SeedSequence(11).spawn(1)[0])
    b = sample_instance(0, "mixed", np.random.SeedSequence(11).spawn(1)[0])
    assert (a.profile, a.fixture, a.h, a.k) == (b.profile, b.fixture, b.h, b.k)
    assert a.fixture in PROFILES[a.profile]


def test_sampled_generators_are_nontrivial():
    child = np.random.SeedSequence(4).spawn(1)[0]
    instance = sample_instance(0, "hnn", child)
    assert instance.profile == "hnn"
    assert all(not w.is_trivial for w in instance.h + instance.k)


def test_small_corpus_holds_and_is_deterministic():
    first = run_corpus(seed=3, count=3, profile="free", oracle=False, workers=1)
    second = run_corpus(seed=3, count=3, profile="free", oracle=False, workers=2)
    assert first == second
    assert first["instances"] + first["skipped"] == 3
    assert first["failures"] == []
    assert all(row["profile"] == "free" for row in first["by_profile"])


def test_amalgam_corpus_with_oracle():
    summary = run_corpus(seed=8, count=2, profile="amalgam", oracle=True)
    assert summary["bound_passes"] == summary["instances"]
    assert {row["profile"] for row in summary["by_profile"]} <= {"amalgam"}


def test_summary_of_rows():
    rows = [
        {"index": 1, "profile": "free", "fixture": "f2_rose", "rejections": 0, "skipped": False,
         "holds": True, "failed": "", "reduced_rank_hk": 1, "corroborated": True, "free_group_product": True},
        {"index": 0, "profile": "free", "fixture": "z2_z3", "rejections": 2, "skipped": False,
         "holds": False, "failed": "main-bound", "reduced_rank_hk": 9, "corroborated": False,
         "free_group_product": None},
        {"index": 2, "profile": "hnn", "fixture": "z2_hnn", "rejections": 40, "skipped": True,
         "holds": False, "failed": "", "reduced_rank_hk": -1, "corroborated": False,
         "free_group_product": None},
    ]
    summary = summarize_corpus(rows, "mixed", 0, 3)
    assert summary["instances"] == 2
    assert summary["skipped"] == 1
    assert summary["rejections"] == 42
    assert summary["bound_passes"] == 1
    assert summary["free_group_product"] == "1/1 held"
    assert summary["failures"] == ["#0 z2_z3: main-bound"]
    (free,) = summary["by_profile"]
    assert free["bound_rate"] == 0.5
    assert free["max_reduced_rank_hk"] == 9


def test_crashing_instance_becomes_a_failed_row(monkeypatch):
    original = corpus._initial_state
    broken = []

    def first_one_breaks(instance, seed, oracle):
        state = original(instance, seed, oracle)
        if not broken:
            broken.append(instance.index)
            state["oracle_radius"] = "wide"
        return state

    monkeypatch.setattr(corpus, "_initial_state", first_one_breaks)
    summary = run_corpus(seed=3, count=3, profile="free", oracle=True, workers=1)
    (failure,) = summary["failures"]
    assert failure.startswith(f"#{broken[0]} ")
    assert "TypeError" in failure
    assert summary["bound_passes"] == summary["instances"] - 1


@pytest.mark.slow
def test_large_mixed_corpus_holds():
    summary = run_corpus(seed=2024, count=500, profile="mixed", oracle=False)
    assert summary["instances"] + summary["skipped"] == 500
    assert summary["instances"] > 0
    assert summary["failures"] == []
    assert summary["bound_passes"] == summary["instances"]
    assert {row["profile"] for row in summary["by_profile"]} <= {"free", "amalgam", "hnn"}
