"""End-to-end report: every figure dataset for one corpus in one directory.

This is only a composition of the library calls; nothing here computes
anything the public modules do not.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from citenet._atomic import atomic_write, write_csv
from citenet.corpus import Corpus, ValidationReport, validate
from citenet.counts import YearSeries, fit_exponential, fit_linear, journal_counts, publication_counts
from citenet.distributions import (
    DistributionKind,
    align_to_peak,
    citation_counts_matrix,
    cohort_distributions,
    distributions_to_csv,
    peak_stats,
)
from citenet.powerlaw import DegreeMode, exponent_sweep
from citenet.svg import write_line_chart


@dataclass
class ReportOptions:
    cohort_step: int = 5
    # drop the first corpus year from reference cohorts and the last from citation cohorts
    omit_edge_cohorts: bool = True
    half_width: int = 5
    sweep_step: int = 1
    k_min_raw: int = 1
    k_min_normalized: float | None = None
    fit_years: list[int] | None = None
    svg: bool = False


@dataclass
class ReportSummary:
    out_dir: str
    files: list[str] = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    sweep_slopes: dict = field(default_factory=dict)
    absent_centers: dict = field(default_factory=dict)


def cohort_years(corpus: Corpus, step: int, kind: DistributionKind, omit_edge: bool) -> list[int]:
    y0, y1 = corpus.year_range
    years = list(range(y0, y1 + 1, step))
    if omit_edge:
        if kind is DistributionKind.REFERENCE:
            years = [y for y in years if y != y0]
        else:
            years = [y for y in years if y != y1]
    return years


def sweep_centers(corpus: Corpus, half_width: int, step: int = 1) -> list[int]:
    """Centres whose full window lies inside the corpus year range."""
    y0, y1 = corpus.year_range
    lo, hi = y0 + half_width, y1 - half_width
    if lo > hi:
        return [(y0 + y1) // 2]
    return list(range(lo, hi + 1, step))


def _fit_rows(name: str, series: YearSeries) -> list[tuple]:
    rows = []
    if len(series) >= 2:
        lf = fit_linear(series)
        rows.append((name, "linear", repr(lf.slope), repr(lf.intercept), repr(lf.r_squared), int(series.years[0])))
    positive = series.restrict(series.years[series.counts > 0])
    if len(positive) >= 2:
        ef = fit_exponential(positive)
        rows.append((name, "exponential", repr(ef.growth_rate), repr(ef.amplitude), repr(ef.r_squared_log), ef.origin_year))
    return rows


def run_report(corpus: Corpus, out_dir, options: ReportOptions | None = None, load_report: ValidationReport | None = None) -> ReportSummary:
    """Write every figure dataset for ``corpus`` under ``out_dir``.

    Files: ``validation.csv``; ``fig1_*`` counts and fits; ``fig2_*``
    reference distributions; ``fig3_*`` citation distributions; ``fig4_*``
    normalized citation distributions (each with aligned and peak tables);
    ``fig5_*`` exponent sweeps and their linear trends; ``summary.json``.
    With ``options.svg`` a line chart accompanies each figure.
    """
    options = options or ReportOptions()
    if corpus.n_papers == 0:
        raise ValueError("cannot report on an empty corpus")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = ReportSummary(str(out))

    def emit(name):
        summary.files.append(name)
        return out / name

    report = load_report or validate(corpus)
    write_csv(emit("validation.csv"), ["section", "key", "value"], report.to_rows())

    # fig 1
    pubs = publication_counts(corpus)
    journals = journal_counts(corpus)
    pubs.to_csv(emit("fig1_publication_counts.csv"))
    journals.to_csv(emit("fig1_journal_counts.csv"))
    fit_pubs = pubs.restrict(options.fit_years) if options.fit_years else pubs
    fit_journals = journals.restrict(options.fit_years) if options.fit_years else journals
    fit_rows = _fit_rows("publications", fit_pubs) + _fit_rows("journals", fit_journals)
    write_csv(emit("fig1_fits.csv"), ["series", "model", "slope_or_rate", "intercept_or_amplitude", "r_squared", "origin_year"], fit_rows)
    summary.fits = {f"{r[0]}_{r[1]}": {"slope_or_rate": float(r[2]), "r_squared": float(r[4])} for r in fit_rows}

    # figs 2-4
    matrix = citation_counts_matrix(corpus)
    figures = (
        ("fig2_reference", DistributionKind.REFERENCE),
        ("fig3_citation", DistributionKind.CITATION),
        ("fig4_normalized_citation", DistributionKind.NORMALIZED_CITATION),
    )
    charts = {}
    for stem, kind in figures:
        cohorts = cohort_years(corpus, options.cohort_step, kind, options.omit_edge_cohorts)
        dists = cohort_distributions(matrix, cohorts, kind, pubs)
        aligned = [align_to_peak(d) for d in dists]
        distributions_to_csv(dists, emit(f"{stem}.csv"))
        distributions_to_csv(aligned, emit(f"{stem}_aligned.csv"))
        peak_rows = []
        for d in dists:
            ps = peak_stats(d, d.cohort_year)
            peak_rows.append((d.cohort_year, kind.value, ps.peak_year, repr(ps.peak_value), ps.peak_delta))
        write_csv(emit(f"{stem}_peaks.csv"), ["cohort_year", "kind", "peak_year", "peak_value", "peak_delta"], peak_rows)
        charts[stem] = (dists, aligned)

    # fig 5
    centers = sweep_centers(corpus, options.half_width, options.sweep_step)
    sweeps = {
        DegreeMode.RAW: exponent_sweep(corpus, centers, options.half_width, DegreeMode.RAW, options.k_min_raw),
        DegreeMode.NORMALIZED: exponent_sweep(corpus, centers, options.half_width, DegreeMode.NORMALIZED, options.k_min_normalized),
    }
    sweep_fit_rows = []
    for mode, series in sweeps.items():
        series.to_csv(emit(f"fig5_exponents_{mode.value}.csv"))
        summary.absent_centers[mode.value] = {str(c): r for c, r in series.absent.items()}
        if len(series.fits) >= 2:
            lf = fit_linear(series.as_year_series())
            sweep_fit_rows.append((mode.value, repr(lf.slope), repr(lf.intercept), repr(lf.r_squared)))
            summary.sweep_slopes[mode.value] = lf.slope
    write_csv(emit("fig5_fits.csv"), ["mode", "slope", "intercept", "r_squared"], sweep_fit_rows)

    if options.svg:
        _write_charts(out, emit, pubs, journals, charts, sweeps)

    summary.files.append("summary.json")
    with atomic_write(out / "summary.json") as fh:
        json.dump(asdict(summary), fh, indent=2, sort_keys=True)
    return summary


def _write_charts(out, emit, pubs, journals, charts, sweeps):
    write_line_chart(
        emit("fig1_counts.svg"),
        {"publications": (pubs.years.tolist(), pubs.counts.tolist())},
        title="Publications per year",
        xlabel="year",
        ylabel="papers",
        log_y=True,
    )
    write_line_chart(
        emit("fig1_journals.svg"),
        {"journals": (journals.years.tolist(), journals.counts.tolist())},
        title="Journals per year",
        xlabel="year",
        ylabel="venues",
    )
    for stem, (dists, aligned) in charts.items():
        write_line_chart(
            emit(f"{stem}.svg"),
            {str(d.cohort_year): (d.support.tolist(), d.probabilities.tolist()) for d in dists},
            title=stem.split("_", 1)[1].replace("_", " ") + " distributions",
            xlabel="year",
            ylabel="share",
        )
        write_line_chart(
            emit(f"{stem}_aligned.svg"),
            {str(d.cohort_year): (d.support.tolist(), d.probabilities.tolist()) for d in aligned},
            title=stem.split("_", 1)[1].replace("_", " ") + " (aligned to peak)",
            xlabel="year - peak year",
            ylabel="share",
        )
    write_line_chart(
        emit("fig5_exponents.svg"),
        {mode.value: (s.centers, s.alphas) for mode, s in sweeps.items()},
        title="Power-law exponents by window",
        xlabel="window centre",
        ylabel="alpha",
    )
