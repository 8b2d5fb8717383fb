"""Shared pytest fixtures for the vfkit test suite."""
from pathlib import Path

import pytest

from app.tools.fixtures import Fixture, get_fixture

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture
def f2() -> Fixture:
    return get_fixture("f2_rose")


@pytest.fixture
def z2z3() -> Fixture:
    return get_fixture("z2_z3")


@pytest.fixture
def amalgam() -> Fixture:
    return get_fixture("z4_amalg_z6")


@pytest.fixture
def hnn() -> Fixture:
    return get_fixture("z2_hnn")
