"""Bibliographic corpus: loading, filtering and validation.

A :class:`Corpus` is an immutable citation graph. Papers are kept in canonical
order (sorted by id) and all per-paper / per-edge attributes live in read-only
numpy arrays so that analyses over millions of edges stay vectorized.
"""

from __future__ import annotations

import io
import os
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from citenet._atomic import atomic_write

PathLike = Union[str, "os.PathLike[str]"]

PAPERS_HEADER = ("id", "year", "venue", "doc_type")
CITATIONS_HEADER = ("citing_id", "cited_id")


class CorpusError(ValueError):
    """Raised when bibliographic input violates the corpus contract."""


class MalformedRecordError(CorpusError):
    def __init__(self, line_no: int, message: str, source: str = "<input>"):
        self.line_no = line_no
        self.source = source
        super().__init__(f"{source}:{line_no}: {message}")


class DocType(str, Enum):
    ARTICLE = "article"
    REVIEW = "review"
    OTHER = "other"

    @classmethod
    def parse(cls, value: str | DocType) -> DocType:
        """Case-insensitive parse; unknown document types collapse to OTHER."""
        if isinstance(value, DocType):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            return cls.OTHER


_DOC_CODES = {DocType.ARTICLE: 0, DocType.REVIEW: 1, DocType.OTHER: 2}
_DOC_FROM_CODE = {v: k for k, v in _DOC_CODES.items()}


@dataclass(frozen=True)
class PaperRecord:
    id: str
    year: int
    venue: str
    doc_type: DocType = DocType.ARTICLE


@dataclass(frozen=True)
class CitationEdge:
    citing: str
    cited: str


@dataclass(frozen=True)
class FilterConfig:
    allowed_doc_types: frozenset[DocType] = frozenset({DocType.ARTICLE, DocType.REVIEW})
    year_min: int = 1900
    year_max: int = 2100
    drop_dangling: bool = True

    def __post_init__(self):
        types = frozenset(DocType.parse(t) for t in self.allowed_doc_types)
        if not types:
            raise CorpusError("allowed_doc_types must not be empty")
        if self.year_min > self.year_max:
            raise CorpusError(f"year_min {self.year_min} > year_max {self.year_max}")
        object.__setattr__(self, "allowed_doc_types", types)


@dataclass
class ValidationReport:
    """Counts and diagnostics for a corpus.

    ``dropped_papers`` / ``dropped_edges`` are only populated by
    :func:`load_corpus`; :func:`validate` sees just the retained corpus and
    reports them empty. ``violations`` lists broken corpus invariants and is
    empty for any corpus that was built through the public constructors.
    """

    paper_count: int = 0
    edge_count: int = 0
    input_paper_count: int = 0
    input_edge_count: int = 0
    dropped_papers: dict[str, int] = field(default_factory=dict)
    dropped_edges: dict[str, int] = field(default_factory=dict)
    pre_publication_edge_count: int = 0
    year_histogram: dict[int, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    SHARED_FIELDS = (
        "paper_count",
        "edge_count",
        "pre_publication_edge_count",
        "year_histogram",
        "violations",
    )

    @property
    def is_clean(self) -> bool:
        """No drops, no invariant violations and no pre-publication edges."""
        return (
            not any(self.dropped_papers.values())
            and not any(self.dropped_edges.values())
            and not self.violations
            and self.pre_publication_edge_count == 0
        )

    def shared(self) -> dict:
        """The fields that :func:`validate` can recompute from a corpus alone."""
        return {name: getattr(self, name) for name in self.SHARED_FIELDS}

    def to_text(self) -> str:
        lines = [
            f"papers: {self.paper_count} retained of {self.input_paper_count}",
            f"edges: {self.edge_count} retained of {self.input_edge_count}",
        ]
        for reason, n in sorted(self.dropped_papers.items()):
            lines.append(f"dropped papers ({reason}): {n}")
        for reason, n in sorted(self.dropped_edges.items()):
            lines.append(f"dropped edges ({reason}): {n}")
        lines.append(f"pre-publication edges: {self.pre_publication_edge_count}")
        for v in self.violations:
            lines.append(f"violation: {v}")
        return "\n".join(lines) + "\n"

    def to_rows(self) -> list[tuple[str, str, int]]:
        """Flat ``(section, key, value)`` rows, used for CSV output."""
        rows = [
            ("count", "paper_count", self.paper_count),
            ("count", "edge_count", self.edge_count),
            ("count", "input_paper_count", self.input_paper_count),
            ("count", "input_edge_count", self.input_edge_count),
            ("count", "pre_publication_edge_count", self.pre_publication_edge_count),
        ]
        rows += [("dropped_papers", k, v) for k, v in sorted(self.dropped_papers.items())]
        rows += [("dropped_edges", k, v) for k, v in sorted(self.dropped_edges.items())]
        rows += [("year", str(y), n) for y, n in sorted(self.year_histogram.items())]
        return rows


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class _PaperMapping(Mapping):
    """Read-only ``id -> PaperRecord`` view over the corpus arrays."""

    def __init__(self, corpus: Corpus):
        self._corpus = corpus

    def __getitem__(self, paper_id: str) -> PaperRecord:
        return self._corpus.record(self._corpus.index_of(paper_id))

    def __iter__(self) -> Iterator[str]:
        return iter(self._corpus.ids.tolist())

    def __len__(self) -> int:
        return self._corpus.n_papers

    def __contains__(self, paper_id) -> bool:
        try:
            self._corpus.index_of(paper_id)
        except KeyError:
            return False
        return True


class Corpus:
    """Immutable citation graph.

    Papers are indexed ``0..n_papers-1`` in ascending id order. Edges are held
    as two index arrays (``citing``, ``cited``) sorted lexicographically.

    Build one with :meth:`from_records` or :func:`load_corpus`; both reject
    dangling endpoints, self-citations and duplicate ids.
    """

    __slots__ = (
        "ids",
        "years",
        "venue_codes",
        "venues",
        "doc_codes",
        "citing",
        "cited",
        "_id_index",
        "_edge_list",
    )

    def __init__(
        self,
        ids: np.ndarray,
        years: np.ndarray,
        venue_codes: np.ndarray,
        venues: np.ndarray,
        doc_codes: np.ndarray,
        citing: np.ndarray,
        cited: np.ndarray,
    ):
        ids = np.asarray(ids, dtype=str)
        order = np.argsort(ids, kind="stable")
        if not np.all(order == np.arange(len(ids))):
            # remap to canonical id order
            rank = np.empty_like(order)
            rank[order] = np.arange(len(order))
            ids = ids[order]
            years = np.asarray(years)[order]
            venue_codes = np.asarray(venue_codes)[order]
            doc_codes = np.asarray(doc_codes)[order]
            citing = rank[np.asarray(citing, dtype=np.int64)]
            cited = rank[np.asarray(cited, dtype=np.int64)]
        if len(ids) > 1 and np.any(ids[1:] == ids[:-1]):
            dup = ids[1:][ids[1:] == ids[:-1]][0]
            raise CorpusError(f"duplicate paper id {dup!r}")

        citing = np.asarray(citing, dtype=np.int64)
        cited = np.asarray(cited, dtype=np.int64)
        if citing.shape != cited.shape:
            raise CorpusError("citing and cited arrays differ in length")
        n = len(ids)
        if citing.size and (citing.min() < 0 or cited.min() < 0 or citing.max() >= n or cited.max() >= n):
            raise CorpusError("edge endpoint outside paper index")
        if np.any(citing == cited):
            raise CorpusError("self-citation edge")
        edge_order = np.lexsort((cited, citing))
        citing, cited = citing[edge_order], cited[edge_order]
        if citing.size > 1:
            same = (citing[1:] == citing[:-1]) & (cited[1:] == cited[:-1])
            if np.any(same):
                raise CorpusError("duplicate citation edge")

        self.ids = _readonly(ids)
        self.years = _readonly(np.asarray(years, dtype=np.int64))
        self.venue_codes = _readonly(np.asarray(venue_codes, dtype=np.int64))
        self.venues = _readonly(np.asarray(venues, dtype=str))
        self.doc_codes = _readonly(np.asarray(doc_codes, dtype=np.int8))
        self.citing = _readonly(citing)
        self.cited = _readonly(cited)
        self._id_index = None
        self._edge_list = None

    def __setattr__(self, name, value):
        if name in ("_id_index", "_edge_list") or not hasattr(self, name):
            object.__setattr__(self, name, value)
        else:
            raise AttributeError("Corpus is immutable")

    @classmethod
    def from_records(cls, papers: Iterable[PaperRecord], edges: Iterable[CitationEdge] = ()) -> Corpus:
        papers = list(papers)
        ids = np.array([p.id for p in papers], dtype=str)
        venues, venue_codes = np.unique(np.array([p.venue for p in papers], dtype=str), return_inverse=True)
        index = {p.id: i for i, p in enumerate(papers)}
        citing, cited = [], []
        for e in edges:
            try:
                citing.append(index[e.citing])
                cited.append(index[e.cited])
            except KeyError as exc:
                raise CorpusError(f"edge {e.citing}->{e.cited} has unknown endpoint {exc.args[0]!r}") from None
        return cls(
            ids=ids,
            years=np.array([p.year for p in papers], dtype=np.int64),
            venue_codes=venue_codes,
            venues=venues,
            doc_codes=np.array([_DOC_CODES[DocType.parse(p.doc_type)] for p in papers], dtype=np.int8),
            citing=np.array(citing, dtype=np.int64),
            cited=np.array(cited, dtype=np.int64),
        )

    # --- sizes and ranges -------------------------------------------------

    @property
    def n_papers(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.citing)

    def __len__(self) -> int:
        return self.n_papers

    @property
    def year_range(self) -> tuple[int, int] | None:
        if self.n_papers == 0:
            return None
        return int(self.years.min()), int(self.years.max())

    @property
    def citing_years(self) -> np.ndarray:
        return self.years[self.citing]

    @property
    def cited_years(self) -> np.ndarray:
        return self.years[self.cited]

    # --- record views -----------------------------------------------------

    def index_of(self, paper_id: str) -> int:
        if self._id_index is None:
            self._id_index = {pid: i for i, pid in enumerate(self.ids.tolist())}
        return self._id_index[paper_id]

    def record(self, i: int) -> PaperRecord:
        return PaperRecord(
            id=str(self.ids[i]),
            year=int(self.years[i]),
            venue=str(self.venues[self.venue_codes[i]]),
            doc_type=_DOC_FROM_CODE[int(self.doc_codes[i])],
        )

    @property
    def papers(self) -> Mapping[str, PaperRecord]:
        return _PaperMapping(self)

    @property
    def edges(self) -> tuple[CitationEdge, ...]:
        if self._edge_list is None:
            ids = self.ids.tolist()
            self._edge_list = tuple(
                CitationEdge(ids[a], ids[b]) for a, b in zip(self.citing.tolist(), self.cited.tolist())
            )
        return self._edge_list

    def papers_in_year(self, year: int) -> list[str]:
        return self.ids[self.years == year].tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            np.array_equal(self.ids, other.ids)
            and np.array_equal(self.years, other.years)
            and np.array_equal(self.venues[self.venue_codes], other.venues[other.venue_codes])
            and np.array_equal(self.doc_codes, other.doc_codes)
            and np.array_equal(self.citing, other.citing)
            and np.array_equal(self.cited, other.cited)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Corpus(papers={self.n_papers}, edges={self.n_edges}, years={self.year_range})"


# --- file formats -----------------------------------------------------------


def _open_lines(source) -> tuple[Iterable[str], str, TextIO | None]:
    if isinstance(source, (str, os.PathLike)):
        fh = open(source, encoding="utf-8", newline="")
        return fh, str(source), fh
    if isinstance(source, io.IOBase) or hasattr(source, "readline"):
        return source, getattr(source, "name", "<stream>"), None
    raise TypeError(f"not a path or text stream: {type(source).__name__}")


def _data_lines(lines: Iterable[str], name: str, n_fields: int, header: tuple[str, ...]):
    """Yield ``(line_no, fields)`` after the mandatory header line."""
    seen_header = False
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if not seen_header:
            if [f.strip().lower() for f in fields] != list(header):
                raise MalformedRecordError(line_no, f"expected header {'<TAB>'.join(header)!r}", name)
            seen_header = True
            continue
        if len(fields) != n_fields:
            raise MalformedRecordError(line_no, f"expected {n_fields} tab-separated fields, got {len(fields)}", name)
        yield line_no, fields


def read_papers(source) -> Iterator[PaperRecord]:
    """Parse a papers file (``id<TAB>year<TAB>venue<TAB>doc_type`` with header)."""
    lines, name, fh = _open_lines(source)
    try:
        for line_no, (pid, year, venue, doc_type) in _data_lines(lines, name, 4, PAPERS_HEADER):
            pid = pid.strip()
            if not pid:
                raise MalformedRecordError(line_no, "empty paper id", name)
            try:
                y = int(year)
            except ValueError:
                raise MalformedRecordError(line_no, f"year {year!r} is not an integer", name) from None
            yield PaperRecord(pid, y, venue.strip(), DocType.parse(doc_type))
    finally:
        if fh is not None:
            fh.close()


def read_citations(source) -> Iterator[CitationEdge]:
    """Parse a citations file (``citing_id<TAB>cited_id`` with header)."""
    lines, name, fh = _open_lines(source)
    try:
        for line_no, (citing, cited) in _data_lines(lines, name, 2, CITATIONS_HEADER):
            citing, cited = citing.strip(), cited.strip()
            if not citing or not cited:
                raise MalformedRecordError(line_no, "empty paper id", name)
            yield CitationEdge(citing, cited)
    finally:
        if fh is not None:
            fh.close()


def write_corpus(corpus: Corpus, papers_path: PathLike, citations_path: PathLike) -> None:
    """Write the two tab-separated files that :func:`load_corpus` reads."""
    venue_names = corpus.venues[corpus.venue_codes].tolist()
    doc_names = [_DOC_FROM_CODE[c].value for c in corpus.doc_codes.tolist()]
    with atomic_write(papers_path) as fh:
        fh.write("\t".join(PAPERS_HEADER) + "\n")
        fh.writelines(
            f"{pid}\t{y}\t{v}\t{d}\n"
            for pid, y, v, d in zip(corpus.ids.tolist(), corpus.years.tolist(), venue_names, doc_names)
        )
    ids = corpus.ids
    with atomic_write(citations_path) as fh:
        fh.write("\t".join(CITATIONS_HEADER) + "\n")
        fh.writelines(f"{a}\t{b}\n" for a, b in zip(ids[corpus.citing].tolist(), ids[corpus.cited].tolist()))


# --- loading ----------------------------------------------------------------


def _iter_papers(source) -> Iterator[PaperRecord]:
    if source is None:
        return iter(())
    if isinstance(source, (str, os.PathLike)) or hasattr(source, "readline"):
        return read_papers(source)
    return (p if isinstance(p, PaperRecord) else PaperRecord(*p) for p in source)


def _iter_citations(source) -> Iterator[CitationEdge]:
    if source is None:
        return iter(())
    if isinstance(source, (str, os.PathLike)) or hasattr(source, "readline"):
        return read_citations(source)
    return (e if isinstance(e, CitationEdge) else CitationEdge(*e) for e in source)


def load_corpus(papers_source, citations_source, filter: FilterConfig | None = None) -> tuple[Corpus, ValidationReport]:
    """Load, filter and validate papers and citation edges.

    Each source is a path, an open text stream in the tab-separated file
    format, or an iterable of records (``PaperRecord`` / ``CitationEdge`` or
    plain tuples).

    Papers failing the doc-type or year filter are dropped. Edges are dropped
    when they are self-citations, when an endpoint is missing from the
    retained papers (``dangling``; raises instead if
    ``filter.drop_dangling`` is false) or when they repeat an earlier edge.
    Edges whose citing year precedes the cited year by more than one are kept
    and counted in ``pre_publication_edge_count``.

    Raises:
        MalformedRecordError: a line cannot be parsed.
        CorpusError: a paper id repeats with different fields, or a dangling
            edge is met while ``drop_dangling`` is false.
    """
    filter = filter or FilterConfig()
    report = ValidationReport()
    dropped_papers: Counter[str] = Counter()
    dropped_edges: Counter[str] = Counter()

    kept: dict[str, PaperRecord] = {}
    seen: dict[str, PaperRecord] = {}
    for rec in _iter_papers(papers_source):
        report.input_paper_count += 1
        rec = PaperRecord(rec.id, int(rec.year), rec.venue, DocType.parse(rec.doc_type))
        prev = seen.get(rec.id)
        if prev is not None:
            if prev != rec:
                raise CorpusError(f"paper id {rec.id!r} repeated with conflicting fields")
            dropped_papers["duplicate"] += 1
            continue
        seen[rec.id] = rec
        if rec.doc_type not in filter.allowed_doc_types:
            dropped_papers["doc_type"] += 1
        elif not filter.year_min <= rec.year <= filter.year_max:
            dropped_papers["year"] += 1
        else:
            kept[rec.id] = rec
    del seen

    ids = sorted(kept)
    index = {pid: i for i, pid in enumerate(ids)}
    records = [kept[pid] for pid in ids]
    venues, venue_codes = np.unique(np.array([r.venue for r in records], dtype=str), return_inverse=True)

    citing: list[int] = []
    cited: list[int] = []
    for e in _iter_citations(citations_source):
        report.input_edge_count += 1
        if e.citing == e.cited:
            dropped_edges["self"] += 1
            continue
        a = index.get(e.citing)
        b = index.get(e.cited)
        if a is None or b is None:
            if not filter.drop_dangling:
                missing = e.citing if a is None else e.cited
                raise CorpusError(f"edge {e.citing}->{e.cited} references unknown paper {missing!r}")
            dropped_edges["dangling"] += 1
            continue
        citing.append(a)
        cited.append(b)

    n = len(ids)
    keys = np.asarray(citing, dtype=np.int64) * max(n, 1) + np.asarray(cited, dtype=np.int64)
    unique_keys = np.unique(keys)
    if len(unique_keys) < len(keys):
        dropped_edges["duplicate"] += len(keys) - len(unique_keys)

    corpus = Corpus(
        ids=np.array(ids, dtype=str),
        years=np.array([r.year for r in records], dtype=np.int64),
        venue_codes=venue_codes,
        venues=venues,
        doc_codes=np.array([_DOC_CODES[r.doc_type] for r in records], dtype=np.int8),
        citing=unique_keys // max(n, 1),
        cited=unique_keys % max(n, 1),
    )
    core = validate(corpus)
    report.paper_count = core.paper_count
    report.edge_count = core.edge_count
    report.pre_publication_edge_count = core.pre_publication_edge_count
    report.year_histogram = core.year_histogram
    report.violations = core.violations
    report.dropped_papers = dict(dropped_papers)
    report.dropped_edges = dict(dropped_edges)
    return corpus, report


def validate(corpus: Corpus) -> ValidationReport:
    """Recompute counts and invariant checks for ``corpus`` from scratch."""
    report = ValidationReport(
        paper_count=corpus.n_papers,
        edge_count=corpus.n_edges,
        input_paper_count=corpus.n_papers,
        input_edge_count=corpus.n_edges,
    )
    if corpus.n_papers:
        years, counts = np.unique(corpus.years, return_counts=True)
        report.year_histogram = dict(zip(years.tolist(), counts.tolist()))
        if np.any(corpus.ids[1:] == corpus.ids[:-1]):
            report.violations.append("duplicate paper ids")
    if corpus.n_edges:
        citing_years = corpus.citing_years
        cited_years = corpus.cited_years
        report.pre_publication_edge_count = int(np.count_nonzero(citing_years < cited_years - 1))
        n_self = int(np.count_nonzero(corpus.citing == corpus.cited))
        if n_self:
            report.violations.append(f"{n_self} self-citation edges")
        keys = corpus.citing * corpus.n_papers + corpus.cited
        n_dup = len(keys) - len(np.unique(keys))
        if n_dup:
            report.violations.append(f"{n_dup} duplicate edges")
    return report
