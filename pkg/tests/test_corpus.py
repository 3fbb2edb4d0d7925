import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citenet import (
    CitationEdge,
    Corpus,
    CorpusError,
    DocType,
    FilterConfig,
    MalformedRecordError,
    PaperRecord,
    load_corpus,
    read_citations,
    read_papers,
    validate,
    write_corpus,
)

from _oracles import random_records, write_tsv


class TestLoadCorpus:
    def test_empty_sources(self):
        corpus, report = load_corpus([], [])
        assert corpus.n_papers == 0 and corpus.n_edges == 0
        assert report.paper_count == 0 and report.edge_count == 0
        assert report.dropped_papers == {} and report.dropped_edges == {}
        assert report.pre_publication_edge_count == 0
        assert report.year_histogram == {}
        assert corpus.year_range is None

    def test_doc_type_and_dangling_fixture(self, tiny_records):
        papers, edges = tiny_records
        corpus, report = load_corpus(papers, edges)
        assert sorted(corpus.papers) == ["A", "B"]
        assert corpus.edges == (CitationEdge("B", "A"),)
        assert report.paper_count == 2 and report.edge_count == 1
        assert report.dropped_papers == {"doc_type": 1}
        assert report.dropped_edges == {"dangling": 1}
        assert report.input_paper_count == 3 and report.input_edge_count == 2

    def test_duplicate_edges_collapsed(self, tiny_records):
        papers, _ = tiny_records
        edges = [CitationEdge("B", "A")] * 3
        corpus, report = load_corpus(papers, edges)
        assert corpus.n_edges == 1
        assert report.dropped_edges == {"duplicate": 2}

    def test_self_citation_dropped(self):
        papers = [PaperRecord("A", 2000, "V")]
        corpus, report = load_corpus(papers, [CitationEdge("A", "A")])
        assert corpus.n_edges == 0
        assert report.dropped_edges == {"self": 1}

    def test_year_filter(self):
        papers = [PaperRecord("A", 1899, "V"), PaperRecord("B", 2000, "V")]
        _, report = load_corpus(papers, [], FilterConfig(year_min=1900))
        assert report.dropped_papers == {"year": 1}

    def test_identical_duplicate_paper_is_collapsed(self):
        p = PaperRecord("A", 2000, "V")
        corpus, report = load_corpus([p, p], [])
        assert corpus.n_papers == 1
        assert report.dropped_papers == {"duplicate": 1}

    def test_conflicting_duplicate_paper_raises(self):
        with pytest.raises(CorpusError, match="conflicting"):
            load_corpus([PaperRecord("A", 2000, "V"), PaperRecord("A", 2001, "V")], [])

    def test_empty_allowed_doc_types_raises(self):
        with pytest.raises(CorpusError):
            FilterConfig(allowed_doc_types=frozenset())

    def test_strict_dangling_raises(self, tiny_records):
        papers, edges = tiny_records
        with pytest.raises(CorpusError, match="unknown paper"):
            load_corpus(papers, edges, FilterConfig(drop_dangling=False))

    def test_pre_publication_edges_retained_and_counted(self):
        papers = [PaperRecord("old", 1998, "V"), PaperRecord("new", 2000, "V"), PaperRecord("mid", 1999, "V")]
        edges = [CitationEdge("old", "new"), CitationEdge("mid", "new")]
        corpus, report = load_corpus(papers, edges)
        assert corpus.n_edges == 2
        # 1998 -> 2000 violates x >= y - 1, 1999 -> 2000 does not
        assert report.pre_publication_edge_count == 1

    def test_unknown_doc_type_maps_to_other(self):
        assert DocType.parse("Meeting Abstract") is DocType.OTHER
        assert DocType.parse("ARTICLE") is DocType.ARTICLE
        assert DocType.parse("Review") is DocType.REVIEW

    def test_retained_plus_dropped_equals_input(self, rng):
        papers, edges = random_records(rng)
        papers = [PaperRecord(p.id, p.year, p.venue, [DocType.ARTICLE, DocType.OTHER][i % 3 == 0]) for i, p in enumerate(papers)]
        edges = edges + edges[:7] + [CitationEdge("ghost", papers[0].id)]
        corpus, report = load_corpus(papers, edges)
        assert report.paper_count + sum(report.dropped_papers.values()) == report.input_paper_count
        assert report.edge_count + sum(report.dropped_edges.values()) == report.input_edge_count


class TestValidate:
    def test_empty(self):
        corpus, _ = load_corpus([], [])
        r = validate(corpus)
        assert (r.paper_count, r.edge_count, r.pre_publication_edge_count) == (0, 0, 0)

    def test_fixture_counts(self, tiny_records):
        corpus, _ = load_corpus(*tiny_records)
        r = validate(corpus)
        assert r.paper_count == 2 and r.edge_count == 1
        assert r.year_histogram == {2000: 1, 2001: 1}
        assert not r.violations

    def test_pre_publication(self):
        corpus = Corpus.from_records(
            [PaperRecord("a", 1998, "V"), PaperRecord("b", 2000, "V")], [CitationEdge("a", "b")]
        )
        assert validate(corpus).pre_publication_edge_count == 1

    def test_fixed_point_with_load(self, rng):
        for _ in range(5):
            papers, edges = random_records(rng)
            corpus, report = load_corpus(papers, edges)
            again = validate(corpus)
            assert again.shared() == report.shared()
            assert validate(corpus).shared() == again.shared()


class TestCorpusInvariants:
    def test_immutable(self, tiny_records):
        corpus, _ = load_corpus(*tiny_records)
        with pytest.raises(AttributeError):
            corpus.years = np.array([1])
        with pytest.raises(ValueError):
            corpus.years[0] = 1999

    def test_rejects_dangling_and_self(self):
        with pytest.raises(CorpusError):
            Corpus.from_records([PaperRecord("a", 2000, "V")], [CitationEdge("a", "zz")])
        with pytest.raises(CorpusError):
            Corpus.from_records([PaperRecord("a", 2000, "V")], [CitationEdge("a", "a")])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(CorpusError):
            Corpus.from_records([PaperRecord("a", 2000, "V"), PaperRecord("a", 2000, "V")])

    def test_papers_mapping(self, tiny_records):
        corpus, _ = load_corpus(*tiny_records)
        assert corpus.papers["B"] == PaperRecord("B", 2001, "V1", DocType.REVIEW)
        assert "C" not in corpus.papers
        assert corpus.papers_in_year(2001) == ["B"]

    def test_order_independence(self, rng):
        papers, edges = random_records(rng)
        a, _ = load_corpus(papers, edges)
        perm_p = [papers[i] for i in rng.permutation(len(papers))]
        perm_e = [edges[i] for i in rng.permutation(len(edges))]
        b, _ = load_corpus(perm_p, perm_e)
        assert a == b

    @settings(max_examples=30, deadline=None)
    @given(
        types=st.sets(st.sampled_from(list(DocType)), min_size=1),
        extra=st.sampled_from(list(DocType)),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_filter_monotone(self, types, extra, seed):
        rng = np.random.default_rng(seed)
        papers, edges = random_records(rng, max_papers=40, max_edges=120)
        kinds = list(DocType)
        papers = [PaperRecord(p.id, p.year, p.venue, kinds[int(rng.integers(0, 3))]) for p in papers]
        _, small = load_corpus(papers, edges, FilterConfig(frozenset(types)))
        _, big = load_corpus(papers, edges, FilterConfig(frozenset(types | {extra})))
        assert big.paper_count >= small.paper_count
        assert big.edge_count >= small.edge_count


class TestFileFormats:
    def test_parse_and_comments(self, tmp_path):
        papers = write_tsv(tmp_path / "p.tsv", ["id", "year", "venue", "doc_type"], [("A", 2000, "V1", "Article"), ("B", 2001, "V1", "REVIEW")])
        cites = tmp_path / "c.tsv"
        cites.write_text("# exported 2014\nciting_id\tcited_id\n# comment\nB\tA\n\n", encoding="utf-8")
        corpus, report = load_corpus(papers, cites)
        assert corpus.edges == (CitationEdge("B", "A"),)
        assert report.is_clean

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text("id\tyear\tvenue\tdoc_type\nA\t2000\tV\tarticle\nB\tnineteen\tV\tarticle\n", encoding="utf-8")
        with pytest.raises(MalformedRecordError) as info:
            list(read_papers(path))
        assert info.value.line_no == 3

    def test_wrong_field_count(self):
        stream = io.StringIO("citing_id\tcited_id\nA\tB\tC\n")
        with pytest.raises(MalformedRecordError) as info:
            list(read_citations(stream))
        assert info.value.line_no == 2

    def test_missing_header(self):
        with pytest.raises(MalformedRecordError, match="header"):
            list(read_citations(io.StringIO("A\tB\n")))

    def test_write_then_load_identity(self, tmp_path, rng):
        papers, edges = random_records(rng)
        corpus = Corpus.from_records(papers, edges)
        write_corpus(corpus, tmp_path / "p.tsv", tmp_path / "c.tsv")
        loaded, report = load_corpus(tmp_path / "p.tsv", tmp_path / "c.tsv")
        assert loaded == corpus
        assert not report.dropped_papers and not report.dropped_edges
