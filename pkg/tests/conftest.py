import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flowneat.neat import ConnectionGene, Genome, NodeGene, create_initial_genome  # noqa: E402


def genome_from_edges(n_nodes, edges, roles=None, weight=0.5):
    """A genome whose nodes are 0..n-1 (hidden unless ``roles`` says otherwise)."""
    roles = roles or {}
    g = Genome()
    for k in range(n_nodes):
        g.nodes[k] = NodeGene(k, roles.get(k, "hidden"))
    for inn, (a, b) in enumerate(edges):
        g.connections[inn] = ConnectionGene(inn, a, b, weight)
    return g


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def iris_genome():
    return create_initial_genome(4, 3, 12, random.Random(0))


PATH3 = [(0, 1), (1, 2)]
K4 = [(i, j) for i in range(4) for j in range(i + 1, 4)]
C4 = [(0, 1), (1, 2), (2, 3), (3, 0)]
C5 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
STAR3 = [(0, 1), (0, 2), (0, 3)]
STAR4 = [(0, 1), (0, 2), (0, 3), (0, 4)]
TRIANGLE = [(0, 1), (1, 2), (0, 2)]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one verdict line per acceptance criterion."""

    def record(number, title, ok, detail="", soft=False):
        verdict = "PASS" if ok else ("WARN" if soft else "FAIL")
        ACCEPTANCE_LINES.append(f"[{verdict}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
