import pytest

from cogmine import builtin_map
from cogmine.km import KnowledgeMap, KnowledgeUnit, SemanticEdge, normalize_relation


def make_km(edges, extra=(), course="test"):
    """Map whose units are named after their ids; ``edges`` are (head, label, tail)."""
    ids = []
    for h, _, t in edges:
        for u in (h, t):
            if u not in ids:
                ids.append(u)
    for u in extra:
        if u not in ids:
            ids.append(u)
    units = [KnowledgeUnit(u, u.upper(), "", u) for u in ids]
    return KnowledgeMap(course, units, [SemanticEdge(h, normalize_relation(r), t) for h, r, t in edges])


@pytest.fixture(scope="session")
def sample_km():
    return builtin_map("array_pointer")


# worked-example learner: three Array descriptions, one subnode, three connective units
WORKED_LAS = (
    "array_definition", "array_type", "array_2d", "array_2d_init",
    "array_pointer", "array_pointer_structure", "pointer_array",
)


@pytest.fixture
def worked_las():
    return WORKED_LAS


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
