"""Cohort citation and reference distributions.

All distributions are read off a :class:`CitationMatrix` holding ``n_y^x``,
the number of citations from papers published in year ``x`` to papers
published in year ``y``. Citations arriving more than one year before the
cited paper's year (``x < y - 1``) are never stored, only counted.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from citenet._atomic import write_csv
from citenet.corpus import Corpus
from citenet.counts import YearSeries

# relative tolerance under which two probabilities count as tied for the peak
_TIE_RTOL = 1e-12


class DistributionKind(str, Enum):
    CITATION = "citation"
    NORMALIZED_CITATION = "normalized_citation"
    REFERENCE = "reference"


class CitationMatrix:
    """Dense year-by-year citation counts.

    ``counts[i, j]`` is ``n_y^x`` with ``y = first_year + i`` (cited) and
    ``x = first_year + j`` (citing). Cells with ``x < y - 1`` are always zero;
    the edges that would fall there are tallied in ``excluded``.
    """

    __slots__ = ("first_year", "counts", "excluded")

    def __init__(self, first_year: int, counts: np.ndarray, excluded: int = 0):
        counts = np.array(counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("counts must be a square matrix")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        if np.any(np.tril(counts, -2)):
            raise ValueError("cells with citing year < cited year - 1 must be empty")
        counts.setflags(write=False)
        self.first_year = int(first_year)
        self.counts = counts
        self.excluded = int(excluded)

    @classmethod
    def from_cells(cls, cells: dict[tuple[int, int], int], excluded: int = 0) -> CitationMatrix:
        """Build from a sparse ``{(cited_year, citing_year): count}`` map."""
        if not cells:
            return cls(0, np.zeros((0, 0), dtype=np.int64), excluded)
        years = [y for key in cells for y in key]
        y0, y1 = min(years), max(years)
        m = np.zeros((y1 - y0 + 1, y1 - y0 + 1), dtype=np.int64)
        for (y, x), n in cells.items():
            m[y - y0, x - y0] += n
        return cls(y0, m, excluded)

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.first_year, self.first_year + self.counts.shape[0])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, key: tuple[int, int]) -> int:
        y, x = key
        i, j = y - self.first_year, x - self.first_year
        n = self.counts.shape[0]
        if 0 <= i < n and 0 <= j < n:
            return int(self.counts[i, j])
        return 0

    def cells(self) -> dict[tuple[int, int], int]:
        """Sparse view: only positive cells, keyed ``(cited_year, citing_year)``."""
        i, j = np.nonzero(self.counts)
        y0 = self.first_year
        return {(int(a) + y0, int(b) + y0): int(self.counts[a, b]) for a, b in zip(i, j)}

    def received(self, y: int) -> tuple[np.ndarray, np.ndarray]:
        """``(citing_years, counts)`` of citations received by cohort ``y``."""
        i = y - self.first_year
        if not 0 <= i < self.counts.shape[0]:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        row = self.counts[i]
        nz = np.nonzero(row)[0]
        return nz + self.first_year, row[nz]

    def made(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        """``(cited_years, counts)`` of references made by cohort ``x``."""
        j = x - self.first_year
        if not 0 <= j < self.counts.shape[0]:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        col = self.counts[:, j]
        nz = np.nonzero(col)[0]
        return nz + self.first_year, col[nz]

    def __repr__(self) -> str:
        return f"CitationMatrix(years={self.first_year}..{self.first_year + self.counts.shape[0] - 1}, total={self.total}, excluded={self.excluded})"


@dataclass(frozen=True, eq=False)
class CohortDistribution:
    """Probability mass over years (or over offsets from the peak when ``aligned``)."""

    cohort_year: int
    kind: DistributionKind
    support: np.ndarray
    probabilities: np.ndarray
    aligned: bool = False

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        probs = np.asarray(self.probabilities, dtype=float)
        if support.shape != probs.shape:
            raise ValueError("support and probabilities differ in length")
        support.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "kind", DistributionKind(self.kind))

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.support.tolist(), self.probabilities.tolist()))

    def __len__(self) -> int:
        return len(self.support)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohortDistribution):
            return NotImplemented
        return (
            self.cohort_year == other.cohort_year
            and self.kind == other.kind
            and self.aligned == other.aligned
            and np.array_equal(self.support, other.support)
            and np.array_equal(self.probabilities, other.probabilities)
        )

    __hash__ = None


@dataclass(frozen=True)
class PeakStats:
    peak_year: int
    peak_value: float
    peak_delta: int


def citation_counts_matrix(corpus: Corpus) -> CitationMatrix:
    """Tally ``n_y^x`` over all corpus edges, excluding pairs with ``x < y - 1``."""
    if corpus.n_papers == 0:
        return CitationMatrix(0, np.zeros((0, 0), dtype=np.int64), 0)
    y0, y1 = corpus.year_range
    span = y1 - y0 + 1
    cited = corpus.cited_years - y0
    citing = corpus.citing_years - y0
    keep = citing >= cited - 1
    flat = np.bincount(cited[keep] * span + citing[keep], minlength=span * span)
    return CitationMatrix(y0, flat.reshape(span, span), int(np.count_nonzero(~keep)))


def _normalize(kind, y, support, weights) -> CohortDistribution:
    weights = np.asarray(weights, dtype=float)
    return CohortDistribution(y, kind, support, weights / weights.sum())


def citation_distribution(matrix: CitationMatrix, y: int) -> CohortDistribution:
    """Share of cohort ``y``'s citations arriving from each citing year."""
    years, counts = matrix.received(y)
    if counts.sum() == 0:
        raise ValueError(f"cohort {y} received no citations")
    return _normalize(DistributionKind.CITATION, y, years, counts)


def normalized_citation_distribution(matrix: CitationMatrix, pub_counts: YearSeries, y: int) -> CohortDistribution:
    """Citation distribution with each citing year's count divided by its output.

    Raises ``ValueError`` if a citing year that cites cohort ``y`` has no
    (or a zero) publication count, which means matrix and counts disagree.
    """
    years, counts = matrix.received(y)
    if counts.sum() == 0:
        raise ValueError(f"cohort {y} received no citations")
    n_x = np.array([pub_counts.get(int(x), 0) for x in years], dtype=float)
    if np.any(n_x <= 0):
        bad = years[n_x <= 0].tolist()
        raise ValueError(f"citing years {bad} cite cohort {y} but have no publications")
    return _normalize(DistributionKind.NORMALIZED_CITATION, y, years, counts / n_x)


def reference_distribution(matrix: CitationMatrix, y: int) -> CohortDistribution:
    """Share of cohort ``y``'s outgoing references landing in each cited year."""
    years, counts = matrix.made(y)
    if counts.sum() == 0:
        raise ValueError(f"cohort {y} made no references")
    return _normalize(DistributionKind.REFERENCE, y, years, counts)


def peak_stats(dist: CohortDistribution, anchor_year: int) -> PeakStats:
    """Modal year of ``dist`` and its signed distance from ``anchor_year``.

    Ties go to the year closest to the anchor, then to the earliest year.
    """
    if len(dist) == 0:
        raise ValueError("empty distribution")
    p = dist.probabilities
    pmax = p.max()
    tied = dist.support[p >= pmax * (1.0 - _TIE_RTOL)]
    dist_to_anchor = np.abs(tied - anchor_year)
    peak = int(tied[dist_to_anchor == dist_to_anchor.min()].min())
    return PeakStats(peak, float(pmax), peak - anchor_year)


def align_to_peak(dist: CohortDistribution) -> CohortDistribution:
    """Shift the support so the peak sits at offset 0."""
    anchor = 0 if dist.aligned else dist.cohort_year
    peak = peak_stats(dist, anchor).peak_year
    return replace(dist, support=dist.support - peak, aligned=True)


def max_pointwise_gap(a: CohortDistribution, b: CohortDistribution) -> float:
    """Largest absolute difference over the union of supports (missing = 0)."""
    pa, pb = a.as_dict(), b.as_dict()
    keys = set(pa) | set(pb)
    if not keys:
        return 0.0
    return max(abs(pa.get(k, 0.0) - pb.get(k, 0.0)) for k in keys)


def cohort_distributions(
    matrix: CitationMatrix,
    cohorts: Iterable[int],
    kind: DistributionKind | str,
    pub_counts: YearSeries | None = None,
) -> list[CohortDistribution]:
    """Distributions of one kind for several cohorts, skipping empty cohorts."""
    kind = DistributionKind(kind)
    out = []
    for y in cohorts:
        try:
            if kind is DistributionKind.CITATION:
                out.append(citation_distribution(matrix, y))
            elif kind is DistributionKind.REFERENCE:
                out.append(reference_distribution(matrix, y))
            else:
                if pub_counts is None:
                    raise TypeError("normalized distributions need pub_counts")
                out.append(normalized_citation_distribution(matrix, pub_counts, y))
        except ValueError:
            continue
    return out


def distributions_to_csv(dists: Iterable[CohortDistribution], path, aligned: bool | None = None) -> None:
    """Write ``cohort_year,kind,x,probability`` (``offset`` instead of ``x`` when aligned).

    ``aligned`` fixes the header for an empty list; otherwise it is inferred.
    """
    dists = list(dists)
    flags = {d.aligned for d in dists}
    if len(flags) > 1 or (aligned is not None and flags and flags != {aligned}):
        raise ValueError("cannot mix aligned and unaligned distributions in one file")
    column = "offset" if (flags == {True} or (not flags and aligned)) else "x"
    rows = (
        (d.cohort_year, d.kind.value, x, repr(p))
        for d in sorted(dists, key=lambda d: (d.cohort_year, d.kind.value))
        for x, p in zip(d.support.tolist(), d.probabilities.tolist())
    )
    write_csv(path, ["cohort_year", "kind", column, "probability"], rows)
