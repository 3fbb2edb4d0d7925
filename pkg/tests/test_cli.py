import csv
import json

import pytest

from citenet import AgeKernel, SynthConfig, generate, load_corpus, write_corpus
from citenet.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, parse_years, run

from _oracles import write_tsv


def corpus_args(paths):
    return ["--papers", str(paths[0]), "--citations", str(paths[1])]


@pytest.fixture
def constant_files(tmp_path, constant_output_corpus):
    paths = (tmp_path / "p.tsv", tmp_path / "c.tsv")
    write_corpus(constant_output_corpus, *paths)
    return paths


@pytest.fixture
def synth_files(tmp_path):
    corpus = generate(SynthConfig(years=16, base_papers=60, growth_rate=1.1, refs_mean=6, seed=4))
    paths = (tmp_path / "sp.tsv", tmp_path / "sc.tsv")
    write_corpus(corpus, *paths)
    return paths


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestParsing:
    def test_year_specs(self):
        assert parse_years("2000:2010:5") == [2000, 2005, 2010]
        assert parse_years("2000:2002") == [2000, 2001, 2002]
        assert parse_years("1990,1995") == [1990, 1995]

    @pytest.mark.parametrize("argv", [[], ["bogus"], ["validate", "--papers", "x"], ["synth", "--out-dir", "d", "--frobnicate"]])
    def test_usage_errors(self, argv, capsys):
        assert run(argv) == EXIT_USAGE
        assert "usage" in capsys.readouterr().err

    def test_seed_must_be_u64(self, tmp_path):
        assert run(["synth", "--out-dir", str(tmp_path), "--seed", "-1"]) == EXIT_USAGE

    def test_unreadable_input(self, tmp_path):
        assert run(["validate", "--papers", str(tmp_path / "nope.tsv"), "--citations", str(tmp_path / "nope.tsv")]) == EXIT_DATA

    def test_malformed_input(self, tmp_path):
        p = tmp_path / "p.tsv"
        p.write_text("id\tyear\tvenue\tdoc_type\nA\tyear?\tV\tarticle\n")
        c = write_tsv(tmp_path / "c.tsv", ["citing_id", "cited_id"], [])
        assert run(["validate", *corpus_args((p, c))]) == EXIT_DATA


class TestValidate:
    def test_empty_files(self, tmp_path, capsys):
        p, c = tmp_path / "p.tsv", tmp_path / "c.tsv"
        p.write_text("")
        c.write_text("")
        assert run(["validate", *corpus_args((p, c))]) == EXIT_OK
        out = capsys.readouterr().out
        assert "papers: 0 retained of 0" in out
        assert "edges: 0 retained of 0" in out

    def test_csv_output(self, constant_files, tmp_path):
        out = tmp_path / "v.csv"
        assert run(["validate", *corpus_args(constant_files), "--csv", "-o", str(out)]) == EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ["section", "key", "value"]
        assert ["count", "paper_count", "25"] in rows


class TestDistributions:
    def test_normalized_matches_raw_on_constant_output(self, constant_files, tmp_path):
        raw, norm = tmp_path / "raw.csv", tmp_path / "norm.csv"
        assert run(["citedist", *corpus_args(constant_files), "--cohorts", "2000", "-o", str(raw)]) == EXIT_OK
        assert run(["citedist", *corpus_args(constant_files), "--cohorts", "2000", "--normalized", "-o", str(norm)]) == EXIT_OK
        raw_rows, norm_rows = read_rows(raw), read_rows(norm)
        assert len(raw_rows) > 2
        assert {r[1] for r in raw_rows[1:]} == {"citation"}
        assert {r[1] for r in norm_rows[1:]} == {"normalized_citation"}
        strip = lambda rows: [r[:1] + r[2:] for r in rows]
        assert strip(raw_rows) == strip(norm_rows)

    def test_refdist_align_stdout(self, synth_files, capsys):
        assert run(["refdist", *corpus_args(synth_files), "--cohorts", "1985,2005", "--align"]) == EXIT_OK
        captured = capsys.readouterr()
        lines = captured.out.splitlines()
        assert lines[0] == "cohort_year,kind,offset,probability"
        assert any(line.startswith("1985,reference,0,") for line in lines)
        assert not any(line.startswith("2005,") for line in lines)
        assert "[2005]" in captured.err

    def test_empty_aligned_header(self, tmp_path, capsys):
        p, c = tmp_path / "p.tsv", tmp_path / "c.tsv"
        p.write_text("")
        c.write_text("")
        assert run(["citedist", *corpus_args((p, c)), "--align"]) == EXIT_OK
        assert capsys.readouterr().out == "cohort_year,kind,offset,probability\n"

    def test_peaks(self, synth_files, tmp_path):
        out = tmp_path / "peaks.csv"
        assert run(["peaks", *corpus_args(synth_files), "--kind", "reference", "--cohorts", "1980:1990:5", "-o", str(out)]) == EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ["cohort_year", "kind", "peak_year", "peak_value", "peak_delta"]
        assert [r[0] for r in rows[1:]] == ["1980", "1985", "1990"]

    def test_deterministic_output(self, synth_files, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert run(["citedist", *corpus_args(synth_files), "--normalized", "-o", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()


class TestCounts:
    def test_out_dir(self, synth_files, tmp_path):
        out = tmp_path / "counts"
        assert run(["counts", *corpus_args(synth_files), "--years", "1975:1985", "--out-dir", str(out)]) == EXIT_OK
        assert read_rows(out / "publication_counts.csv")[0] == ["year", "count"]
        fits = read_rows(out / "fits.csv")
        models = {(r[0], r[1]) for r in fits[1:]}
        assert ("publications", "exponential") in models and ("journals", "linear") in models
        rate = next(float(r[2]) for r in fits if r[:2] == ["publications", "exponential"])
        assert rate == pytest.approx(1.1, abs=0.01)


class TestPowerlaw:
    def test_sweep(self, synth_files, tmp_path, capsys):
        out = tmp_path / "pl.csv"
        argv = ["powerlaw", *corpus_args(synth_files), "--centers", "1982:1984", "--half-width", "3", "--mode", "normalized", "--kmin", "0.05", "-o", str(out)]
        assert run(argv) == EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ["center_year", "mode", "alpha", "k_min", "n_tail", "converged"]
        assert [r[0] for r in rows[1:]] == ["1982", "1983", "1984"]
        assert all(r[3] == "0.05" for r in rows[1:])
        assert "linear fit" in capsys.readouterr().out


class TestSynth:
    def test_writes_loadable_corpus(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"years": 6, "base_papers": 30, "growth_rate": 1.2, "age_kernel": {"mode_age": 1, "decay": 0.7, "pre_publication": 0.0}}))
        out = tmp_path / "out"
        assert run(["synth", "--config", str(cfg), "--seed", "77", "--out-dir", str(out)]) == EXIT_OK
        corpus, report = load_corpus(out / "papers.tsv", out / "citations.tsv")
        meta = json.loads((out / "synth_config.json").read_text())
        assert meta["seed"] == 77
        assert meta["stats"]["edges"] == corpus.n_edges
        assert SynthConfig.from_dict(meta).age_kernel == AgeKernel(1, 0.7, 0.0)
        assert corpus == generate(SynthConfig.from_dict(meta))
        assert report.is_clean

    def test_bad_config_is_data_error(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert run(["synth", "--config", str(cfg), "--out-dir", str(tmp_path)]) == EXIT_DATA
        cfg.write_text(json.dumps({"growth_rate": 0.5}))
        assert run(["synth", "--config", str(cfg), "--out-dir", str(tmp_path)]) == EXIT_DATA


FIGURE_FILES = [
    "fig1_publication_counts.csv",
    "fig1_journal_counts.csv",
    "fig1_fits.csv",
    "fig2_reference.csv",
    "fig2_reference_aligned.csv",
    "fig2_reference_peaks.csv",
    "fig3_citation.csv",
    "fig3_citation_aligned.csv",
    "fig4_normalized_citation.csv",
    "fig4_normalized_citation_aligned.csv",
    "fig5_exponents_raw.csv",
    "fig5_exponents_normalized.csv",
    "fig5_fits.csv",
    "validation.csv",
]


class TestReport:
    def test_all_datasets(self, synth_files, tmp_path, capsys):
        out = tmp_path / "report"
        assert run(["report", *corpus_args(synth_files), "--out-dir", str(out), "--svg"]) == EXIT_OK
        for name in FIGURE_FILES:
            rows = read_rows(out / name)
            assert rows and rows[0], name
        assert len(list(out.glob("*.svg"))) >= 5
        assert (out / "fig1_counts.svg").read_text().startswith("<svg")
        summary = json.loads((out / "summary.json").read_text())
        assert set(summary["sweep_slopes"]) == {"raw", "normalized"}
        assert "exponent trend" in capsys.readouterr().out

    def test_edge_cohorts_omitted(self, synth_files, tmp_path):
        out = tmp_path / "report"
        assert run(["report", *corpus_args(synth_files), "--out-dir", str(out), "--cohort-step", "15"]) == EXIT_OK
        ref = {r[0] for r in read_rows(out / "fig2_reference.csv")[1:]}
        cit = {r[0] for r in read_rows(out / "fig3_citation.csv")[1:]}
        # range 1975..1990 at step 15 gives cohorts 1975 and 1990
        assert ref == {"1990"}
        assert cit == {"1975"}

    def test_no_svg_by_default(self, synth_files, tmp_path):
        out = tmp_path / "report"
        assert run(["report", *corpus_args(synth_files), "--out-dir", str(out)]) == EXIT_OK
        assert not list(out.glob("*.svg"))
