from __future__ import annotations

import itertools
import json
import random
import shutil
from importlib import resources

import pytest

from linelab.graphs import Graph, is_connected


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def random_connected(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    while True:
        g = random_graph(rng, n, p)
        if is_connected(g):
            return g


def load_schema(name: str) -> dict:
    text = resources.files("linelab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def geng():
    exe = shutil.which("geng")
    if exe is None:
        pytest.fail("geng (nauty) is required for the n=9,10 streams; see README 'Building geng'")
    return exe


# criterion number -> list of (ok, detail) for the acceptance summary
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        verdict = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {k:>2}: {verdict}  {detail}")
