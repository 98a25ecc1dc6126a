import os
import tempfile
from fractions import Fraction

import pytest

# Settings are read at import time; point the cache and logs somewhere disposable first
_workdir = tempfile.mkdtemp(prefix="pdpoly-tests-")
os.environ["DATABASE_URL"] = f"sqlite:///{os.path.join(_workdir, 'cache.sqlite3')}"
os.environ["LOG_DIR"] = os.path.join(_workdir, "logs")
os.environ["LOG_LEVEL"] = "WARNING"

from app.applications import partial_pr_box, pr_box  # noqa: E402
from app.behaviour import Behaviour  # noqa: E402
from app.scenario import Scenario  # noqa: E402


@pytest.fixture(scope="session")
def chsh() -> Scenario:
    return Scenario.uniform([2, 2])


@pytest.fixture(scope="session")
def tripartite() -> Scenario:
    return Scenario.uniform([2, 2, 2])


@pytest.fixture(scope="session")
def three_inputs() -> Scenario:
    return Scenario.uniform([3, 3])


@pytest.fixture(scope="session")
def box(chsh) -> Behaviour:
    return pr_box(chsh)


@pytest.fixture(scope="session")
def partial_boxes(tripartite) -> list[Behaviour]:
    return [partial_pr_box(tripartite, p) for p in tripartite.parties]


@pytest.fixture
def half() -> Fraction:
    return Fraction(1, 2)
