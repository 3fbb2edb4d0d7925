import numpy as np
import pytest

from citenet import CitationEdge, Corpus, DocType, PaperRecord


@pytest.fixture
def rng():
    return np.random.default_rng(20140101)


@pytest.fixture
def tiny_records():
    papers = [
        PaperRecord("A", 2000, "V1", DocType.ARTICLE),
        PaperRecord("B", 2001, "V1", DocType.REVIEW),
        PaperRecord("C", 2001, "V2", DocType.OTHER),
    ]
    edges = [CitationEdge("B", "A"), CitationEdge("C", "A")]
    return papers, edges


@pytest.fixture
def constant_output_corpus():
    """Five papers per year 2000-2004; cohort 2000 cited unevenly over time."""
    papers = [PaperRecord(f"y{y}n{i}", y, f"V{i % 2}") for y in range(2000, 2005) for i in range(5)]
    edges = []
    for y, n in ((2001, 3), (2002, 5), (2003, 2), (2004, 1)):
        for i in range(n):
            edges.append(CitationEdge(f"y{y}n{i}", f"y2000n{i}"))
    edges.append(CitationEdge("y2003n4", "y2002n0"))
    return Corpus.from_records(papers, edges)



ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
