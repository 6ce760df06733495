"""Command line behaviour: envelopes, formats, exit codes, determinism."""

import io
import json
import math

import numpy as np
import pytest

from tourney_codes import Embedding
from tourney_codes.cli import main


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def run_json(capsys, *argv):
    rc, out, err = run_cli(capsys, *argv)
    return rc, json.loads(out), err


def test_analyze_literal_line(capsys):
    rc, report, _ = run_json(capsys, "analyze", "3:101")
    assert rc == 0
    assert set(report) == {"command", "version", "inputs_digest",
                           "tolerances", "results"}
    assert report["command"] == "analyze"
    assert set(report["tolerances"]) == {"eig_tol", "beta_tol"}
    (res,) = report["results"]
    assert res["line"] == "3:101"
    assert res["type"] == 1 and res["rep_dim"] == 1
    assert res["alpha"]["im"] == pytest.approx(math.sqrt(3) / 2)
    assert res["c1"] == pytest.approx(math.sqrt(3))
    assert len(res["spectrum"]) == 3
    assert res["tightness"]["certificate"]["kind"] == "DRT"


def test_analyze_below_three_vertices_has_no_tightness(capsys):
    rc, report, _ = run_json(capsys, "analyze", "2:1")
    assert rc == 0
    assert "tightness" not in report["results"][0]


def test_analyze_file_stdin_and_literal_agree(tmp_path, capsys, monkeypatch):
    text = "3:101\n"
    path = tmp_path / "one.txt"
    path.write_text(text)
    rc1, out1, _ = run_cli(capsys, "analyze", "3:101")
    rc2, out2, _ = run_cli(capsys, "analyze", str(path))
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    rc3, out3, _ = run_cli(capsys, "analyze", "-")
    assert rc1 == rc2 == rc3 == 0
    assert out1 == out2 == out3


def test_analyze_output_is_deterministic(tmp_path, capsys, monkeypatch):
    path = tmp_path / "batch.txt"
    path.write_text("4:111111\n4:111010\n4:011101\n4:011011\n")
    _, first, _ = run_cli(capsys, "analyze", str(path))
    _, second, _ = run_cli(capsys, "analyze", str(path))
    assert first == second
    monkeypatch.setenv("TOURNEY_CODES_THREADS", "2")
    _, parallel, _ = run_cli(capsys, "analyze", str(path))
    assert parallel == first


def test_analyze_tsv_row(capsys):
    rc, out, _ = run_cli(capsys, "analyze", "3:101", "--format", "tsv")
    assert rc == 0
    (row,) = out.splitlines()
    fields = row.split("\t")
    assert fields[0] == "3:101"
    assert fields[1] == "1" and fields[2] == "1"
    assert fields[5] == "DRT"


def test_empty_stdin_gives_empty_results(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    rc, report, _ = run_json(capsys, "analyze", "-")
    assert rc == 0
    assert report["results"] == []


def test_embed_check_passes(capsys):
    rc, report, _ = run_json(capsys, "embed", "4:111010", "--check")
    assert rc == 0
    (res,) = report["results"]
    assert res["dimension"] == 2
    assert len(res["vectors"]) == 4
    assert all(len(v) == 2 and set(v[0]) == {"re", "im"} for v in res["vectors"])
    assert res["check_passed"] and res["max_deviation"] < 1e-9


def test_embed_check_failure_exits_three(capsys, monkeypatch):
    def corrupt(T, tol):
        return Embedding(2, np.zeros((T.n, 2), dtype=complex), 0.5j)

    monkeypatch.setattr("tourney_codes.cli.embed", corrupt)
    rc, out, err = run_cli(capsys, "embed", "4:111010", "--check")
    assert rc == 3
    assert "verification failed" in err
    assert not json.loads(out)["results"][0]["check_passed"]


def test_embed_without_check_reports_but_passes(capsys, monkeypatch):
    def corrupt(T, tol):
        return Embedding(2, np.zeros((T.n, 2), dtype=complex), 0.5j)

    monkeypatch.setattr("tourney_codes.cli.embed", corrupt)
    rc, _, _ = run_cli(capsys, "embed", "4:111010")
    assert rc == 0


def test_enumerate_json_and_tsv(capsys):
    rc, report, _ = run_json(capsys, "enumerate", "--n", "4")
    assert rc == 0
    assert report["results"] == ["4:000000", "4:000010", "4:001001", "4:010001"]
    rc, out, _ = run_cli(capsys, "enumerate", "--n", "4", "--format", "tsv")
    assert rc == 0
    assert out.splitlines() == ["4:000000", "4:000010", "4:001001", "4:010001"]


def test_switching_class_command(capsys):
    rc, report, _ = run_json(capsys, "switching-class", "3:101")
    assert rc == 0
    (res,) = report["results"]
    assert res["line"] == "3:101"
    assert res["count"] == 2
    assert res["classes"] == ["3:000", "3:010"]


def test_count_tight_command(capsys):
    rc, report, _ = run_json(capsys, "count-tight", "--d", "2")
    assert rc == 0
    assert report["results"] == [{"d": 2, "count": 2, "catalog_trusted": False}]
    rc, out, _ = run_cli(capsys, "count-tight", "--d", "2", "--format", "tsv")
    assert out == "2\t2\tFalse\n"


def test_count_tight_without_catalog_is_input_error(capsys):
    rc, out, err = run_cli(capsys, "count-tight", "--d", "7")
    assert rc == 2
    assert "15" in err and "input error" in err
    assert out == ""


def test_bad_line_is_input_error(capsys):
    rc, _, err = run_cli(capsys, "analyze", "3:10")
    assert rc == 2
    assert "input error" in err and "line 1" in err


def test_missing_file_is_input_error(capsys):
    rc, _, err = run_cli(capsys, "analyze", "/nonexistent/tournaments.txt")
    assert rc == 2
    assert "cannot read input" in err


def test_nonpositive_tolerance_is_input_error(capsys):
    rc, _, err = run_cli(capsys, "analyze", "3:101", "--eig-tol", "0")
    assert rc == 2
    assert "positive" in err


def test_invalid_threads_env_is_input_error(capsys, monkeypatch):
    monkeypatch.setenv("TOURNEY_CODES_THREADS", "many")
    rc, _, err = run_cli(capsys, "analyze", "3:101")
    assert rc == 2
    assert "TOURNEY_CODES_THREADS" in err


def test_env_tolerances_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("TOURNEY_CODES_BETA_TOL", "1e-5")
    _, report, _ = run_json(capsys, "analyze", "3:101")
    assert report["tolerances"]["beta_tol"] == 1e-5
    _, report, _ = run_json(capsys, "analyze", "3:101", "--beta-tol", "2e-6")
    assert report["tolerances"]["beta_tol"] == 2e-6


def test_verify_paper_quick(capsys):
    rc, report, _ = run_json(capsys, "verify-paper", "--level", "quick")
    assert rc == 0
    assert report["all_pass"] is True
    ids = [r["id"] for r in report["results"]]
    assert len(ids) == len(set(ids)) >= 12
    assert all(r["pass"] for r in report["results"])


def test_verify_paper_tsv_rows(capsys):
    rc, out, _ = run_cli(capsys, "verify-paper", "--level", "quick",
                         "--format", "tsv")
    assert rc == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert all(row[0] == "PASS" for row in rows)


def test_verify_paper_fails_under_absurd_tolerance(capsys):
    rc, report, _ = run_json(capsys, "verify-paper", "--level", "quick",
                             "--beta-tol", "1e-20")
    assert rc == 1
    assert report["all_pass"] is False
