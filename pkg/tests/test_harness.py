import json
import os
import xml.etree.ElementTree as ET

import pytest

from dlogfp.analysis import Histogram
from dlogfp.harness import driver
from dlogfp.harness.cli import EXIT_BUG, EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from dlogfp.harness.driver import ExperimentConfig, compute_records
from dlogfp.harness.figures import write_bar_chart
from dlogfp.harness.results import COLUMNS, ResultRow, ResultsFormatError, dumps, read_results
from dlogfp.harness.tables import compare_with_paper, table_csv


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    assert main(["compute", "--from", "3", "--to", "100", "--out", str(out), "--workers", "1"]) == EXIT_OK
    return out


def test_compute_3_to_100(small_run, capsys):
    rows = read_results(small_run / "results.csv")
    assert len(rows) == 24
    assert [r.p for r in rows] == sorted(r.p for r in rows)
    text = (small_run / "results.csv").read_text()
    assert text.splitlines()[0] == ",".join(COLUMNS)
    assert "\r" not in text and '"' not in text


def test_compute_single_prime_5(tmp_path):
    assert main(["compute", "--from", "5", "--to", "5", "--out", str(tmp_path)]) == EXIT_OK
    lines = (tmp_path / "results.csv").read_text().splitlines()
    assert len(lines) == 2
    fields = dict(zip(COLUMNS, lines[1].split(",")))
    assert fields["f_any"] == "2" and fields["delta"] == "0" and fields["log_ratio"] == ""


def test_compute_prints_rate(tmp_path, capsys):
    main(["compute", "--from", "3", "--to", "30", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert "primes/s" in out and "elapsed" in out


def test_results_byte_identical_across_workers(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["compute", "--from", "3", "--to", "700", "--out", str(a), "--workers", "1"])
    main(["compute", "--from", "3", "--to", "700", "--out", str(b), "--workers", "3"])
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_row_roundtrip():
    recs = compute_records(3, 200, workers=1)
    rows = [ResultRow.from_record(r) for r in recs]
    text = dumps(rows)
    back = [ResultRow(*(r.__dict__[c] for c in COLUMNS)) for r in rows]
    assert back == rows
    lr = text.splitlines()[3].split(",")[7]
    assert lr == format(recs[2].log_ratio, ".12g")


def test_read_results_reports_line(tmp_path):
    recs = compute_records(3, 50)
    lines = dumps(ResultRow.from_record(r) for r in recs).splitlines()
    lines[4] = lines[4].replace(",", ";", 1)
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(ResultsFormatError) as exc:
        read_results(bad)
    assert exc.value.line == 5
    assert main(["stats", str(bad)]) == EXIT_DATA


def test_read_results_rejects_disorder(tmp_path):
    recs = compute_records(3, 50)
    lines = dumps(ResultRow.from_record(r) for r in recs).splitlines()
    lines[2], lines[3] = lines[3], lines[2]
    path = tmp_path / "r.csv"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ResultsFormatError, match="ascending"):
        read_results(path)


def test_missing_results_is_data_error(tmp_path):
    assert main(["tally", str(tmp_path / "nope.csv")]) == EXIT_DATA


def test_tally_empty_file(tmp_path):
    path = tmp_path / "results.csv"
    path.write_text(",".join(COLUMNS) + "\n")
    assert main(["tally", str(path)]) == EXIT_OK
    for name in ("positive", "negative", "all"):
        csv_text = (tmp_path / f"table_{name}.csv").read_text()
        assert "#total,0" in csv_text and "#zero,0" in csv_text
        assert (tmp_path / f"figure_{name}.svg").exists()
        assert (tmp_path / f"figure_{name}.dat").exists()


def test_tally_single_prime_3(tmp_path):
    assert main(["compute", "--from", "3", "--to", "3", "--out", str(tmp_path)]) == EXIT_OK
    assert main(["tally", "--out", str(tmp_path)]) == EXIT_OK
    pos = (tmp_path / "table_positive.csv").read_text().splitlines()
    assert pos[1] == "0-1/6,1"
    assert "#total,1" in pos
    assert "#total,0" in (tmp_path / "table_negative.csv").read_text()


def test_table_csv_format():
    text = table_csv(Histogram([1, 2, 3, 4, 5, 6], zero_count=2, overflow_count=1))
    lines = text.splitlines()
    assert lines[0] == "bucket_label,count"
    assert lines[1:7] == ["0-1/6,1", "1/6-1/3,2", "1/3-1/2,3", "1/2-2/3,4", "2/3-5/6,5", "5/6-1,6"]
    assert lines[7:] == ["#total,21", "#zero,2", "#overflow,1"]


def test_svg_chart(tmp_path):
    counts = [40, 147, 601, 895, 116, 1]
    svg = write_bar_chart(Histogram(counts), "All values", tmp_path / "fig")
    root = ET.parse(svg).getroot()
    assert root.get("width") == "800" and root.get("height") == "480"
    body = svg.read_text()
    for c in counts:
        assert f">{c}<" in body
    dat = (tmp_path / "fig.dat").read_text().splitlines()
    assert dat[1].split() == ["0", "0-1/6", "40"]


def test_stats_two_rows(tmp_path, capsys):
    assert main(["compute", "--from", "3", "--to", "7", "--out", str(tmp_path)]) == EXIT_OK
    capsys.readouterr()
    # p = 3, 5, 7: delta = 1, 0, 2, so two nonzero rows
    assert main(["stats", "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "degenerate fit" in out
    assert "delta = 0 occurred for 1 primes: [5]" in out


def test_stats_insufficient(tmp_path):
    main(["compute", "--from", "3", "--to", "5", "--out", str(tmp_path)])
    assert main(["stats", "--out", str(tmp_path)]) == EXIT_DATA


def test_verify_small(small_run, capsys):
    assert main(["verify", "--out", str(small_run), "--epsilon", "0.5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PR x RPPR bound: satisfied 24/24" in out
    assert "T(e,p) checks not applied to p=[3]" in out
    assert "primes with |delta| > p: 0" in out
    assert "> p^(1/2+0.5): 0/24" in out


def test_verify_flags_tampered_row(small_run, tmp_path, capsys):
    text = (small_run / "results.csv").read_text().splitlines()
    fields = text[5].split(",")
    fields[5] = str(int(fields[5]) + 10**6)  # f_pr_rppr far off
    text[5] = ",".join(fields)
    bad = tmp_path / "results.csv"
    bad.write_text("\n".join(text) + "\n")
    assert main(["verify", str(bad)]) == EXIT_BUG
    assert "VIOLATIONS" in capsys.readouterr().out


def test_report_small(small_run, capsys):
    assert main(["report", "--out", str(small_run)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Comparison with published tables" in out
    assert "Grouped statistics" in out and "Bound verification" in out


def test_simulate(capsys):
    assert main(["simulate", "3", "--trials", "2000", "--seed", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "exact mean 2, variance 1" in out
    assert main(["simulate", "3", "--trials", "0"]) == EXIT_USAGE
    assert main(["simulate", "9"]) == EXIT_USAGE


def test_usage_errors(tmp_path):
    assert main(["compute", "--from", "10", "--to", "5", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["compute", "--workers", "0", "--out", str(tmp_path)]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"prime_lo": 3, "prime_hi": 30, "output_dir": str(tmp_path / "a")}))
    assert main(["compute", "--config", str(cfg), "--to", "13"]) == EXIT_OK
    rows = read_results(tmp_path / "a" / "results.csv")
    assert [r.p for r in rows] == [3, 5, 7, 11, 13]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"primes": 3}))
    assert main(["compute", "--config", str(bad)]) == EXIT_USAGE


def test_config_defaults():
    cfg = ExperimentConfig()
    assert (cfg.prime_lo, cfg.prime_hi, cfg.oracle_limit, cfg.epsilon, cfg.trials, cfg.seed) == (
        3, 15413, 211, 0.1, 100_000, 42
    )


def test_oracle_mismatch_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(driver, "brute_force_count", lambda p, g, h: -1)
    assert main(["compute", "--from", "3", "--to", "20", "--out", str(tmp_path), "--workers", "1"]) == EXIT_BUG


@pytest.mark.skipif(os.geteuid() == 0, reason="root can write anywhere")
def test_unwritable_output(tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    assert main(["compute", "--from", "3", "--to", "7", "--out", str(locked / "x")]) == EXIT_DATA


def test_unwritable_output_file_in_place(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    assert main(["compute", "--from", "3", "--to", "7", "--out", str(blocker)]) == EXIT_DATA


def test_compare_with_paper_itemizes_zero_delta():
    rows = [ResultRow.from_record(r) for r in compute_records(3, 20)]
    devs = compare_with_paper(rows)
    first = [d for d in devs if d.table == "positive" and d.bucket == 0][0]
    assert [p for p, _ in first.items] == [5, 17]
    assert all(d.deviation != 0 for d in devs)
