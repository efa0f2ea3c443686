import csv

import pytest

from gazex.cli import main
from conftest import TOY_FIXTURES_TEXT, TOY_TAXONOMY_TEXT, TOY_TRUTH_TEXT, LEMMA_TEXT


@pytest.fixture()
def workspace(tmp_path):
    (tmp_path / "taxonomy.tsv").write_text(TOY_TAXONOMY_TEXT, encoding="utf-8")
    (tmp_path / "fixtures.tsv").write_text(TOY_FIXTURES_TEXT, encoding="utf-8")
    (tmp_path / "truth.tsv").write_text(TOY_TRUTH_TEXT, encoding="utf-8")
    (tmp_path / "lemmas.tsv").write_text(LEMMA_TEXT, encoding="utf-8")
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_build_then_classify(workspace, capsys):
    corpora = workspace / "corpora"
    code = run(
        "build", "--taxonomy", workspace / "taxonomy.tsv", "--out", corpora,
        "--fixtures", workspace / "fixtures.tsv", "--lemmas", workspace / "lemmas.tsv",
    )
    assert code == 0
    assert (corpora / "BASELINE" / "food" / "cake_shop.lst").is_file()
    assert (corpora / "SYN" / "food" / "cake_shop.lst").is_file()
    capsys.readouterr()

    code = run(
        "classify", "--corpus", corpora / "SYN", "--query", "where to find fresh pastries",
        "--taxonomy", workspace / "taxonomy.tsv", "--lemmas", workspace / "lemmas.tsv",
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "elected\tFood\tCake Shop" in out


def test_classify_without_taxonomy_prints_slugs(workspace, capsys):
    corpora = workspace / "corpora"
    run("build", "--taxonomy", workspace / "taxonomy.tsv", "--out", corpora,
        "--fixtures", workspace / "fixtures.tsv")
    capsys.readouterr()
    code = run("classify", "--corpus", corpora / "BASELINE", "--query", "buy a cake")
    assert code == 0
    assert "elected\tfood\tcake_shop" in capsys.readouterr().out


def test_combine_lazy_counts_and_materialized_subset(workspace, capsys):
    corpora = workspace / "corpora"
    run("build", "--taxonomy", workspace / "taxonomy.tsv", "--out", corpora,
        "--fixtures", workspace / "fixtures.tsv")
    capsys.readouterr()

    code = run(
        "combine", "--relations-root", corpora, "--taxonomy", workspace / "taxonomy.tsv", "--lazy",
    )
    assert code == 0
    assert "24564 gazetteers" in capsys.readouterr().out

    combined = workspace / "combined"
    code = run(
        "combine", "--relations-root", corpora, "--taxonomy", workspace / "taxonomy.tsv",
        "--out", combined, "--k-min", "2", "--k-max", "2", "--jobs", "4",
    )
    assert code == 0
    assert len(list(combined.glob("*"))) == 55
    assert (combined / "ANT SYN" / "food" / "bar.lst").is_file()

    # without a taxonomy the stored BASELINE supplies the label weights
    no_tax = workspace / "combined_no_tax"
    code = run(
        "combine", "--relations-root", corpora, "--out", no_tax,
        "--k-min", "2", "--k-max", "2",
    )
    assert code == 0
    left = (combined / "ANT SYN" / "food" / "bar.lst").read_bytes()
    right = (no_tax / "ANT SYN" / "food" / "bar.lst").read_bytes()
    assert left == right


def test_evaluate_reports_deltas(workspace, capsys):
    corpora = workspace / "corpora"
    run("build", "--taxonomy", workspace / "taxonomy.tsv", "--out", corpora,
        "--fixtures", workspace / "fixtures.tsv", "--lemmas", workspace / "lemmas.tsv")
    capsys.readouterr()
    code = run(
        "evaluate", "--corpus", corpora / "SYN", "--truth", workspace / "truth.tsv",
        "--baseline-corpus", corpora / "BASELINE", "--taxonomy", workspace / "taxonomy.tsv",
        "--lemmas", workspace / "lemmas.tsv",
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "config\tSYN" in out
    assert "deltas\t" in out
    assert "excluded=1" in out


def test_sweep_writes_report_bundle(workspace, capsys):
    corpora = workspace / "corpora"
    run("build", "--taxonomy", workspace / "taxonomy.tsv", "--out", corpora,
        "--fixtures", workspace / "fixtures.tsv", "--lemmas", workspace / "lemmas.tsv")
    out_dir = workspace / "report"
    code = run(
        "sweep", "--relations-root", corpora, "--taxonomy", workspace / "taxonomy.tsv",
        "--truth", workspace / "truth.tsv", "--out", out_dir, "--n-relations", "3",
        "--lemmas", workspace / "lemmas.tsv",
    )
    assert code == 0
    with open(out_dir / "report.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 1 + 7
    for name in ("plot_precision.csv", "top_recall.csv", "bottom_f_measure.csv"):
        assert (out_dir / name).is_file()


def test_filter_queries_cli(workspace, capsys):
    log = workspace / "log.txt"
    log.write_text(
        "where can i buy flowers\nhistory of rome\nbuy milk\nbuy milk\n", encoding="utf-8"
    )
    out = workspace / "queries.tsv"
    code = run("filter-queries", "--input", log, "--output", out, "--seed", "3")
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert all("\t" in line for line in lines)


def test_cli_reports_toolkit_errors(workspace, capsys):
    bad = workspace / "bad_taxonomy.tsv"
    bad.write_text("Food\tBar\nFood\tBar\n", encoding="utf-8")
    code = run("build", "--taxonomy", bad, "--out", workspace / "x",
               "--fixtures", workspace / "fixtures.tsv")
    assert code == 1
    assert "error:" in capsys.readouterr().err
