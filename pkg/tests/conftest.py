import json
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from prymlattice.cli import parse_cover_document
from prymlattice.cover import branch_data, validate
from prymlattice.group import FiniteAbelianGroup, generated_subgroup

settings.register_profile("exact", deadline=None, max_examples=60)
settings.load_profile("exact")

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "corpus"

ACCEPTANCE_LINES: list[str] = []


def load_corpus():
    return [
        (p.stem, parse_cover_document(json.loads(p.read_text())))
        for p in sorted(CORPUS_DIR.glob("*.json"))
    ]


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture
def z2_6pts():
    return branch_data([2], [[1]] * 6)


@pytest.fixture
def z3_111():
    return branch_data([3], [[1]] * 3)


@pytest.fixture
def klein_1100():
    return branch_data([2, 2], [[1, 0], [1, 0], [0, 1], [0, 1]])


SMALL_GROUPS = [(2,), (3,), (4,), (5,), (6,), (2, 2), (2, 4), (3, 3)]


@st.composite
def valid_branch_data(draw, max_points=6):
    """Random connected branch data: r-1 free nonzero elements, the last closes the sum."""
    G = FiniteAbelianGroup(draw(st.sampled_from(SMALL_GROUPS)))
    r = draw(st.integers(min_value=2, max_value=max_points))
    coord = st.tuples(*(st.integers(0, d - 1) for d in G.invariant_factors))
    elems = [G.element(draw(coord)) for _ in range(r - 1)]
    total = G.identity()
    for g in elems:
        total = total + g
    elems.append(-total)
    b = branch_data(G.invariant_factors, [g.coords for g in elems])
    if validate(b):
        # retry with a generating, nonzero configuration built from the standard generators
        gens = G.generators()
        elems = gens + [-sum(gens[1:], gens[0])] if gens else []
        b = branch_data(G.invariant_factors, [g.coords for g in elems])
        assert len(generated_subgroup(G, b.monodromy)) == G.order
    return b


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
