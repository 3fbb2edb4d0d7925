"""Per-year publication and venue counts with least-squares trend fits."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from citenet._atomic import write_csv
from citenet.corpus import Corpus


class YearSeries:
    """Ordered ``year -> count`` series with strictly increasing years."""

    __slots__ = ("years", "counts")

    def __init__(self, years: Iterable[int], counts: Iterable[float]):
        years = np.asarray(list(years) if not isinstance(years, np.ndarray) else years, dtype=np.int64)
        counts = np.asarray(list(counts) if not isinstance(counts, np.ndarray) else counts)
        if counts.dtype.kind not in "iuf":
            counts = counts.astype(float)
        if years.shape != counts.shape or years.ndim != 1:
            raise ValueError("years and counts must be 1-D and of equal length")
        if np.any(np.diff(years) <= 0):
            raise ValueError("years must be strictly increasing")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        years.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "counts", counts)

    def __setattr__(self, name, value):
        raise AttributeError("YearSeries is immutable")

    @classmethod
    def from_dict(cls, data: Mapping[int, float]) -> YearSeries:
        items = sorted(data.items())
        return cls([y for y, _ in items], [c for _, c in items])

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.years.tolist(), self.counts.tolist()))

    def __getitem__(self, year: int):
        i = np.searchsorted(self.years, year)
        if i >= len(self.years) or self.years[i] != year:
            raise KeyError(year)
        return self.counts[i].item()

    def get(self, year: int, default=None):
        try:
            return self[year]
        except KeyError:
            return default

    def __len__(self) -> int:
        return len(self.years)

    def __iter__(self):
        return iter(self.years.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, YearSeries):
            return NotImplemented
        return np.array_equal(self.years, other.years) and np.array_equal(self.counts, other.counts)

    __hash__ = None

    def __repr__(self) -> str:
        return f"YearSeries({self.as_dict()})"

    def restrict(self, years: Iterable[int]) -> YearSeries:
        """Sub-series on the given years (years absent from the series are ignored)."""
        mask = np.isin(self.years, np.asarray(list(years), dtype=np.int64))
        return YearSeries(self.years[mask], self.counts[mask])

    def scaled(self, factor: float) -> YearSeries:
        return YearSeries(self.years, self.counts * factor)

    def to_csv(self, path) -> None:
        write_csv(path, ["year", "count"], zip(self.years.tolist(), self.counts.tolist()))


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    r_squared: float

    def predict(self, years):
        return self.intercept + self.slope * np.asarray(years, dtype=float)


@dataclass(frozen=True)
class ExpFit:
    """``count(y) = amplitude * growth_rate ** (y - origin_year)``."""

    amplitude: float
    growth_rate: float
    r_squared_log: float
    origin_year: int

    def predict(self, years):
        return self.amplitude * self.growth_rate ** (np.asarray(years, dtype=float) - self.origin_year)


def _require_nonempty(corpus: Corpus):
    if corpus.n_papers == 0:
        raise ValueError("corpus has no papers")


def publication_counts(corpus: Corpus) -> YearSeries:
    """Number of papers per year over the corpus year range, zeros included."""
    _require_nonempty(corpus)
    y0, y1 = corpus.year_range
    counts = np.bincount(corpus.years - y0, minlength=y1 - y0 + 1)
    return YearSeries(np.arange(y0, y1 + 1), counts)


def journal_counts(corpus: Corpus) -> YearSeries:
    """Number of distinct venues with at least one paper in each year."""
    _require_nonempty(corpus)
    y0, y1 = corpus.year_range
    n_venues = max(len(corpus.venues), 1)
    pairs = np.unique((corpus.years - y0) * n_venues + corpus.venue_codes)
    counts = np.bincount(pairs // n_venues, minlength=y1 - y0 + 1)
    return YearSeries(np.arange(y0, y1 + 1), counts)


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    # centred design keeps the normal equations well conditioned for calendar years
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    slope = float(dx @ dy) / sxx
    intercept = ym - slope * xm
    ss_tot = float(dy @ dy)
    resid = dy - slope * dx
    ss_res = float(resid @ resid)
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        r2 = min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    return slope, float(intercept), r2


def _check_points(series: YearSeries):
    if len(series) < 2:
        raise ValueError(f"need at least 2 years to fit, got {len(series)}")


def fit_linear(series: YearSeries) -> LineFit:
    """Ordinary least squares of count on year."""
    _check_points(series)
    slope, intercept, r2 = _ols(series.years.astype(float), series.counts.astype(float))
    return LineFit(slope, intercept, r2)


def fit_exponential(series: YearSeries) -> ExpFit:
    """Log-linear least squares; amplitude is the fitted value at the first year.

    Raises ``ValueError`` on any non-positive count, since the log is undefined;
    restrict the series to a window of positive counts first.
    """
    _check_points(series)
    counts = series.counts.astype(float)
    if np.any(counts <= 0):
        bad = series.years[counts <= 0].tolist()
        raise ValueError(f"exponential fit needs positive counts; zero in years {bad}")
    origin = int(series.years[0])
    slope, intercept, r2 = _ols((series.years - origin).astype(float), np.log(counts))
    return ExpFit(float(np.exp(intercept)), float(np.exp(slope)), r2, origin)
