import random
import sys

import pytest

from shagraph.model import parse_model, random_model

NODAL = "component C\npoint Q on C:2\n"
PATH = "component C1\ncomponent C2\npoint Q on C1:1 C2:1\n"
LOOP2 = "component C1\ncomponent C2\npoint P1 on C1:1 C2:1\npoint P2 on C1:1 C2:1\n"
THETA = "component C\npoint Q on C:3\n"


def chain(k):
    lines = [f"component C{i}" for i in range(1, k + 1)]
    lines += [f"point P{i} on C{i}:1 C{i + 1}:1" for i in range(1, k)]
    if k == 1:
        lines.append("point P1 on C1:1")
    return parse_model("\n".join(lines))


def rank_model(r):
    """One point with r+1 branches on one component: a graph of cycle rank r."""
    return parse_model(f"component C\npoint Q on C:{r + 1}\n")


@pytest.fixture
def nodal():
    return parse_model(NODAL)


@pytest.fixture
def path():
    return parse_model(PATH)


@pytest.fixture
def loop2():
    return parse_model(LOOP2)


@pytest.fixture
def theta():
    return parse_model(THETA)


@pytest.fixture
def rng():
    return random.Random(12345)


def random_models(seed, count, **kw):
    rng = random.Random(seed)
    return [random_model(rng, **kw) for _ in range(count)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines, key=lambda k: int(k[1:])):
            terminalreporter.write_line(lines[key])
