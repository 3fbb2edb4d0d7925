"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 on data errors (unreadable
or malformed input, analyses that cannot run on the given corpus).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import tempfile
from pathlib import Path

from citenet._atomic import atomic_write, write_csv
from citenet.corpus import CorpusError, DocType, FilterConfig, load_corpus, write_corpus
from citenet.counts import fit_exponential, fit_linear, journal_counts, publication_counts
from citenet.distributions import (
    DistributionKind,
    align_to_peak,
    citation_counts_matrix,
    cohort_distributions,
    distributions_to_csv,
    peak_stats,
)
from citenet.powerlaw import DegreeMode, exponent_sweep
from citenet.report import ReportOptions, cohort_years, run_report, sweep_centers
from citenet.synth import SynthConfig, generate_with_stats

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_years(text: str) -> list[int]:
    """``"1980:2010:5"`` (inclusive range with optional step) or ``"1980,1990"``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            lo, hi, step = parts
            if step < 1:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad year list {text!r}; use A:B[:STEP] or A,B,...") from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _add_corpus_args(p):
    p.add_argument("--papers", required=True, help="papers TSV (id, year, venue, doc_type)")
    p.add_argument("--citations", required=True, help="citations TSV (citing_id, cited_id)")
    p.add_argument("--doc-types", default="article,review", help="comma-separated document types to keep")
    p.add_argument("--year-min", type=int, default=1900)
    p.add_argument("--year-max", type=int, default=2100)
    p.add_argument("--strict", action="store_true", help="fail on dangling edges instead of dropping them")


def _add_out(p):
    p.add_argument("-o", "--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citenet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="load a corpus and print its validation report")
    _add_corpus_args(p)
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    _add_out(p)

    p = sub.add_parser("counts", help="publication and journal counts with fits")
    _add_corpus_args(p)
    p.add_argument("--years", type=parse_years, help="restrict the fits to these years (default: all)")
    p.add_argument("--out-dir", help="directory for the series and fit CSVs (default: stdout)")

    for name, help_text in (("refdist", "reference distributions"), ("citedist", "citation distributions")):
        p = sub.add_parser(name, help=help_text)
        _add_corpus_args(p)
        p.add_argument("--cohorts", type=parse_years, help="cohort years (default: every 5th year)")
        p.add_argument("--align", action="store_true", help="shift each distribution so its peak is at 0")
        if name == "citedist":
            p.add_argument("--normalized", action="store_true", help="divide citations by citing-year output")
        _add_out(p)

    p = sub.add_parser("peaks", help="peak year and peak delta per cohort")
    _add_corpus_args(p)
    p.add_argument("--kind", choices=[k.value for k in DistributionKind], default="citation")
    p.add_argument("--cohorts", type=parse_years)
    _add_out(p)

    p = sub.add_parser("powerlaw", help="power-law exponents over sliding windows")
    _add_corpus_args(p)
    p.add_argument("--centers", type=parse_years, help="window centres (default: all full windows)")
    p.add_argument("--half-width", type=int, default=5)
    p.add_argument("--mode", choices=[m.value for m in DegreeMode], default="raw")
    p.add_argument("--kmin", type=float, help="lower cutoff (default: 1 raw, smallest positive normalized)")
    _add_out(p)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--config", help="JSON SynthConfig (default: built-in defaults)")
    p.add_argument("--seed", type=_u64, help="override the config seed")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("report", help="all figure datasets into one directory")
    _add_corpus_args(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--svg", action="store_true", help="also write SVG line charts")
    p.add_argument("--cohort-step", type=int, default=5)
    p.add_argument("--keep-edge-cohorts", action="store_true", help="do not omit the first/last corpus year")
    p.add_argument("--half-width", type=int, default=5)
    p.add_argument("--sweep-step", type=int, default=1)
    p.add_argument("--kmin", type=int, default=1, help="discrete cutoff for raw-mode fits")
    p.add_argument("--years", type=parse_years, help="restrict the growth fits to these years")
    return parser


def _filter(args) -> FilterConfig:
    types = {DocType.parse(t) for t in args.doc_types.split(",") if t.strip()}
    return FilterConfig(frozenset(types), args.year_min, args.year_max, drop_dangling=not args.strict)


def _load(args):
    for path in (args.papers, args.citations):
        if not Path(path).is_file():
            raise FileNotFoundError(f"cannot read {path}")
    try:
        flt = _filter(args)
    except CorpusError as exc:
        raise UsageError(str(exc)) from None
    return load_corpus(args.papers, args.citations, flt)


def _emit_text(args, text: str) -> None:
    if getattr(args, "out", None):
        with atomic_write(args.out) as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(writer, *a) -> str:
    """Run a CSV writer against a temp path and return its text."""
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "out.csv"
        writer(*a, path)
        return path.read_text(encoding="utf-8")


def _emit_csv(args, header, rows) -> None:
    if getattr(args, "out", None):
        write_csv(args.out, header, rows)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_validate(args) -> int:
    _, report = _load(args)
    if args.csv:
        _emit_csv(args, ["section", "key", "value"], report.to_rows())
    else:
        _emit_text(args, report.to_text())
    return EXIT_OK


def cmd_counts(args) -> int:
    corpus, _ = _load(args)
    pubs, journals = publication_counts(corpus), journal_counts(corpus)
    rows = []
    for name, series in (("publications", pubs), ("journals", journals)):
        s = series.restrict(args.years) if args.years else series
        lf = fit_linear(s)
        rows.append((name, "linear", repr(lf.slope), repr(lf.intercept), repr(lf.r_squared)))
        try:
            ef = fit_exponential(s)
        except ValueError as exc:
            print(f"note: no exponential fit for {name}: {exc}", file=sys.stderr)
        else:
            rows.append((name, "exponential", repr(ef.growth_rate), repr(ef.amplitude), repr(ef.r_squared_log)))
    header = ["series", "model", "slope_or_rate", "intercept_or_amplitude", "r_squared"]
    if args.out_dir:
        out = Path(args.out_dir)
        pubs.to_csv(out / "publication_counts.csv")
        journals.to_csv(out / "journal_counts.csv")
        write_csv(out / "fits.csv", header, rows)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["year", "publications", "journals"])
        w.writerows(zip(pubs.years.tolist(), pubs.counts.tolist(), journals.counts.tolist()))
        sys.stdout.write("\n")
        w.writerow(header)
        w.writerows(rows)
    return EXIT_OK


def _dists(args, corpus, kind):
    if corpus.n_papers == 0:
        return []
    matrix = citation_counts_matrix(corpus)
    cohorts = args.cohorts or cohort_years(corpus, 5, kind, omit_edge=False)
    pubs = publication_counts(corpus) if kind is DistributionKind.NORMALIZED_CITATION else None
    dists = cohort_distributions(matrix, cohorts, kind, pubs)
    skipped = sorted(set(cohorts) - {d.cohort_year for d in dists})
    if skipped:
        print(f"note: no {kind.value} distribution for cohorts {skipped}", file=sys.stderr)
    return dists


def cmd_dist(args) -> int:
    corpus, _ = _load(args)
    if args.command == "refdist":
        kind = DistributionKind.REFERENCE
    elif args.normalized:
        kind = DistributionKind.NORMALIZED_CITATION
    else:
        kind = DistributionKind.CITATION
    dists = _dists(args, corpus, kind)
    if args.align:
        dists = [align_to_peak(d) for d in dists]
    write = lambda path: distributions_to_csv(dists, path, aligned=args.align)
    if args.out:
        write(args.out)
    else:
        sys.stdout.write(_csv_text(write))
    return EXIT_OK


def cmd_peaks(args) -> int:
    corpus, _ = _load(args)
    kind = DistributionKind(args.kind)
    rows = []
    for d in _dists(args, corpus, kind):
        ps = peak_stats(d, d.cohort_year)
        rows.append((d.cohort_year, kind.value, ps.peak_year, repr(ps.peak_value), ps.peak_delta))
    _emit_csv(args, ["cohort_year", "kind", "peak_year", "peak_value", "peak_delta"], rows)
    return EXIT_OK


def cmd_powerlaw(args) -> int:
    corpus, _ = _load(args)
    if corpus.n_papers == 0:
        raise ValueError("corpus is empty")
    centers = args.centers or sweep_centers(corpus, args.half_width)
    series = exponent_sweep(corpus, centers, args.half_width, args.mode, args.kmin)
    if args.out:
        series.to_csv(args.out)
        fit_stream = sys.stdout
    else:
        sys.stdout.write(_csv_text(lambda p: series.to_csv(p)))
        fit_stream = sys.stderr
    for c, reason in sorted(series.absent.items()):
        print(f"absent {c}: {reason}", file=sys.stderr)
    if len(series.fits) >= 2:
        lf = fit_linear(series.as_year_series())
        print(f"linear fit: slope={lf.slope!r} intercept={lf.intercept!r} r_squared={lf.r_squared!r}", file=fit_stream)
    return EXIT_OK


def cmd_synth(args) -> int:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValueError(f"{args.config}: invalid JSON: {exc}") from None
    if args.seed is not None:
        data["seed"] = args.seed
    config = SynthConfig.from_dict(data)
    corpus, stats = generate_with_stats(config)
    out = Path(args.out_dir)
    write_corpus(corpus, out / "papers.tsv", out / "citations.tsv")
    meta = config.to_dict()
    meta["stats"] = {"requested_refs": stats.requested_refs, "dropped_refs": stats.dropped_refs, "edges": corpus.n_edges}
    with atomic_write(out / "synth_config.json") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    print(f"wrote {corpus.n_papers} papers and {corpus.n_edges} edges to {out}")
    return EXIT_OK


def cmd_report(args) -> int:
    corpus, load_report = _load(args)
    options = ReportOptions(
        cohort_step=args.cohort_step,
        omit_edge_cohorts=not args.keep_edge_cohorts,
        half_width=args.half_width,
        sweep_step=args.sweep_step,
        k_min_raw=args.kmin,
        fit_years=args.years,
        svg=args.svg,
    )
    summary = run_report(corpus, args.out_dir, options, load_report)
    print(f"wrote {len(summary.files)} files to {summary.out_dir}")
    for mode, slope in summary.sweep_slopes.items():
        print(f"{mode} exponent trend: {slope:+.5f} per year")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "counts": cmd_counts,
    "refdist": cmd_dist,
    "citedist": cmd_dist,
    "peaks": cmd_peaks,
    "powerlaw": cmd_powerlaw,
    "synth": cmd_synth,
    "report": cmd_report,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"citenet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, TypeError) as exc:
        print(f"citenet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
