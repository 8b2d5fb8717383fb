"""
Corpus Harness Module.

This module provides:
- sample_instance: a random (H, K) pair on a fixture drawn from a profile
- run_corpus: sample, run the intersection pipeline on each pair and
  aggregate pass rates per profile

Per-instance random generators are spawned from one SeedSequence, so the
summary is identical for a given (seed, count, profile) whatever the
worker count.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from app.config.settings import settings
from app.core.errors import FreeActionViolation, IdentityGenerator
from app.core.graph_of_groups import GraphOfGroups, GWord
from app.core.intersection import fold_subgroup
from app.tools.fixtures import get_fixture
from app.tools.instance_tools import document_from_gog, spres_word
from app.utils.logging import get_logger
from app.workflows.intersection_workflow import app as pipeline

logger = get_logger("workflow.corpus")

PROFILES: Dict[str, Sequence[str]] = {
    "free": ("f2_rose", "f2_theta", "z2_z3", "z3_z3", "z2_z2"),
    "amalgam": ("z4_amalg_z6", "z4_amalg_z4", "s3_amalg_z4"),
    "hnn": ("z2_hnn", "z4_hnn_z2", "klein_hnn", "z2_z3_loop"),
}
MIXED = ("free", "amalgam", "hnn")


@dataclass(frozen=True)
class CorpusInstance:
    """
    One sampled pair of subgroups.

    Attributes:
        index: Position in the corpus
        profile: Profile the fixture was drawn from
        fixture: Fixture name
        gog: Ambient graph of groups
        h, k: Generators in loop form (empty when sampling gave up)
        rejections: Generator sets resampled after a free-action violation
    """
    index: int
    profile: str
    fixture: str
    gog: GraphOfGroups
    h: List[GWord]
    k: List[GWord]
    rejections: int

    @property
    def skipped(self) -> bool:
        return not self.h or not self.k


def _random_words(gog: GraphOfGroups, rng: np.random.Generator, count: int) -> List[GWord]:
    words: List[GWord] = []
    while len(words) < count:
        syllables = int(rng.integers(1, settings.corpus_max_syllables + 1))
        w = gog.random_element(syllables, seed=int(rng.integers(2**32)))
        if not w.is_trivial:
            words.append(w)
    return words


def _products_of(gog: GraphOfGroups, rng: np.random.Generator, gens: List[GWord], count: int) -> List[GWord]:
    """Words in ``gens``, each the product of two random generators or inverses."""
    letters = gens + [gog.invert(g) for g in gens]
    words: List[GWord] = []
    for _ in range(4 * count):
        a, b = rng.integers(len(letters), size=2)
        w = gog.multiply(letters[int(a)], letters[int(b)])
        if not w.is_trivial:
            words.append(w)
        if len(words) == count:
            break
    return words


def _acceptable(gog: GraphOfGroups, gens: List[GWord], name: str) -> bool:
    try:
        fold_subgroup(gog, gens, name)
    except (FreeActionViolation, IdentityGenerator):
        return False
    return True


def sample_instance(index: int, profile: str, seed_seq: np.random.SeedSequence) -> CorpusInstance:
    """
    Draw a fixture from ``profile`` and a pair (H, K) of free subgroups.

    Half of the time K is generated by products of H's generators so that
    H∩K is nontrivial. Generator sets that do not act freely are resampled
    up to ``corpus_max_attempts`` times.
    """
    rng = np.random.default_rng(seed_seq)
    actual = MIXED[int(rng.integers(len(MIXED)))] if profile == "mixed" else profile
    names = PROFILES[actual]
    fixture = get_fixture(names[int(rng.integers(len(names)))])
    gog = fixture.gog
    limit = settings.corpus_max_generators

    rejections = 0
    h: List[GWord] = []
    for _ in range(settings.corpus_max_attempts):
        candidate = _random_words(gog, rng, int(rng.integers(1, limit + 1)))
        if _acceptable(gog, candidate, "H"):
            h = candidate
            break
        rejections += 1

    k: List[GWord] = []
    if h:
        for _ in range(settings.corpus_max_attempts):
            size = int(rng.integers(1, limit + 1))
            if rng.random() < 0.5:
                candidate = _products_of(gog, rng, h, size) or _random_words(gog, rng, size)
            else:
                candidate = _random_words(gog, rng, size)
            if _acceptable(gog, candidate, "K"):
                k = candidate
                break
            rejections += 1

    if not h or not k:
        logger.warning(f"instance {index} on {fixture.name}: no free generator set after {rejections} attempts")
    return CorpusInstance(index, actual, fixture.name, gog, h, k, rejections)


def _initial_state(instance: CorpusInstance, seed: int, oracle: bool) -> Dict[str, Any]:
    gog = instance.gog
    doc = document_from_gog(
        gog,
        {
            "H": [spres_word(gog, w) for w in instance.h],
            "K": [spres_word(gog, w) for w in instance.k],
        },
        name=f"{instance.fixture}-{instance.index}",
    )
    return {
        "document": doc,
        "h_name": "H",
        "k_name": "K",
        "run_oracle": oracle,
        "oracle_radius": settings.corpus_oracle_radius,
        "oracle_length": settings.corpus_oracle_length,
        "seed": seed,
        "with_timings": False,
        "timings": {},
        "failures": [],
        "errors": [],
    }


def _record(instance: CorpusInstance, state: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "index": instance.index,
        "profile": instance.profile,
        "fixture": instance.fixture,
        "rejections": instance.rejections,
        "skipped": instance.skipped,
        "holds": False,
        "failed": "",
        "reduced_rank_hk": -1,
        "corroborated": False,
        "free_group_product": None,
    }
    if state is None:
        return row
    bound = state.get("bound")
    if bound is None:
        row["failed"] = "; ".join(state.get("errors", [])) or "no bound report"
        return row
    row.update(
        holds=bound.holds,
        failed=", ".join(bound.failed),
        reduced_rank_hk=bound.reduced_rank_hk,
        corroborated=bool(state.get("oracle")) and all(
            r.verdict == "corroborated" for r in state["oracle"]
        ),
    )
    names = {v.name for v in bound.verdicts}
    if "free-group-product" in names:
        row["free_group_product"] = bound.verdict("free-group-product").holds
    return row


def summarize_corpus(rows: List[Dict[str, Any]], profile: str, seed: int, count: int) -> Dict[str, Any]:
    """Aggregate per-instance rows into the summary rendered by the corpus report."""
    summary: Dict[str, Any] = {
        "profile": profile,
        "seed": seed,
        "count": count,
        "instances": 0,
        "rejections": 0,
        "skipped": 0,
        "bound_passes": 0,
        "by_profile": [],
        "free_group_product": None,
        "failures": [],
    }
    if not rows:
        return summary

    df = pd.DataFrame(rows).sort_values("index")
    ran = df[~df["skipped"]]
    summary.update(
        instances=int(len(ran)),
        rejections=int(df["rejections"].sum()),
        skipped=int(df["skipped"].sum()),
        bound_passes=int(ran["holds"].sum()),
    )
    if not ran.empty:
        grouped = ran.groupby("profile").agg(
            instances=("index", "count"),
            bound_rate=("holds", "mean"),
            corroborated=("corroborated", "sum"),
            max_reduced_rank_hk=("reduced_rank_hk", "max"),
        )
        summary["by_profile"] = [
            {
                "profile": name,
                "instances": int(row.instances),
                "bound_rate": float(row.bound_rate),
                "corroborated": int(row.corroborated),
                "max_reduced_rank_hk": int(row.max_reduced_rank_hk),
            }
            for name, row in grouped.iterrows()
        ]
        free_group = ran["free_group_product"].dropna()
        if not free_group.empty:
            summary["free_group_product"] = f"{int(free_group.astype(bool).sum())}/{len(free_group)} held"
        summary["failures"] = [
            f"#{r.index} {r.fixture}: {r.failed}" for r in ran[~ran["holds"]].itertuples()
        ]
    return summary


def run_corpus(
    seed: int,
    count: int,
    profile: str = "mixed",
    oracle: bool = True,
    workers: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Generate ``count`` random instances and run the pipeline on each.

    Args:
        seed: Corpus seed
        count: Number of instances
        profile: free, amalgam, hnn or mixed
        oracle: Also corroborate each instance with the tree oracle
        workers: Concurrent pipeline runs (default: settings.corpus_workers)

    Returns:
        Summary dictionary (see summarize_corpus)
    """
    if profile != "mixed" and profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; known: {', '.join([*PROFILES, 'mixed'])}")
    workers = settings.corpus_workers if workers is None else workers

    logger.info(f"Corpus start: profile={profile} seed={seed} count={count} workers={workers}")
    children = np.random.SeedSequence(seed).spawn(count)
    instances = [
        sample_instance(i, profile, child)
        for i, child in enumerate(tqdm(children, desc="sampling", disable=count == 0))
    ]

    runnable = [inst for inst in instances if not inst.skipped]
    states: Dict[int, Dict[str, Any]] = {}
    inputs = [_initial_state(inst, seed, oracle) for inst in runnable]
    if inputs:
        with tqdm(total=len(inputs), desc="pipeline") as progress:
            for position, outcome in pipeline.batch_as_completed(
                inputs, config={"max_concurrency": workers}, return_exceptions=True
            ):
                instance = runnable[position]
                if isinstance(outcome, Exception):
                    logger.error(f"instance {instance.index} on {instance.fixture} crashed: {outcome!r}")
                    outcome = {"errors": [f"crash: {type(outcome).__name__}: {outcome}"]}
                states[instance.index] = outcome
                progress.update(1)

    rows = [_record(inst, states.get(inst.index)) for inst in instances]
    summary = summarize_corpus(rows, profile, seed, count)
    logger.info(f"Corpus done: {summary['bound_passes']}/{summary['instances']} bound holds")
    return summary
