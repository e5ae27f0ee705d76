import csv
import json

import pytest

from paradv.cli import main, parse_int_range
from paradv.report import SWEEP_COLUMNS, BoundReport, SweepRow, bound_report, dumps


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_flagship_p1(capsys):
    code, out, _ = run(capsys, "bound", "--n", "2", "--k", "1", "--eps", "1/1", "--p", "1", "--mode", "all")
    assert code == 0
    assert "theorem2=2.449489743" in out
    assert "theorem1 ratio=2.449489743" in out
    assert "theorem3=2\n" in out + "\n"
    assert "WARN" not in out


def test_bound_flagship_p2_warns(capsys, tmp_path):
    path = tmp_path / "b.json"
    code, out, _ = run(capsys, "bound", "--n", "2", "--k", "1", "--eps", "1/1", "--p", "2", "--out", str(path))
    assert code == 0
    assert "theorem1 ratio=1.732050808" in out
    assert "WARN ell: enumerated=2 closed_form=1 witness_tuple=[0, 1]" in out
    rec = json.loads(path.read_text())
    assert rec["discrepancies"][0]["enumerated"] == "2"
    assert rec["enumerated"]["ell"] == "2"


def test_bound_rejects_noninteger(capsys):
    code, _, err = run(capsys, "bound", "--n", "2", "--k", "1", "--eps", "1/2", "--p", "1")
    assert code == 2 and "NonIntegerParameters" in err


def test_bound_requires_rational_literal(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--n", "2", "--k", "1", "--eps", "0.5"])
    assert exc.value.code == 2


@pytest.mark.parametrize("mode", ["combinatorial", "spectral", "all"])
def test_bound_report_roundtrip(mode):
    rep = bound_report(3, 2, 1, 2, mode)
    rec = json.loads(dumps(rep.to_record()))
    assert BoundReport.from_record(rec) == rep


def test_bound_output_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "bound", "--n", "3", "--k", "2", "--eps", "1/1", "--p", "2", "--out", str(a))
    run(capsys, "bound", "--n", "3", "--k", "2", "--eps", "1/1", "--p", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_simulate_grover(capsys):
    code, out, _ = run(capsys, "simulate", "grover", "--n", "2", "--marked", "2", "--iters", "1")
    assert code == 0 and out.startswith("success=1.000000000")


def test_simulate_count(capsys):
    code, out, _ = run(capsys, "simulate", "count", "--n", "4", "--k", "8", "--tbits", "3")
    assert code == 0 and out.startswith("khat=8 p=1.000000000 queries=7")


def test_simulate_progress(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, out, _ = run(capsys, "simulate", "progress", "--n", "2", "--k", "1", "--eps", "1/1",
                       "--p", "1", "--T", "3", "--seed", "42", "--out", str(path))
    assert code == 0
    assert "W0=2.449489743" in out and "step_bound_ok=true" in out
    rec = json.loads(path.read_text())
    assert rec["schedule"]["seed"] == 42
    assert rec["trace"]["W"][0] == pytest.approx(2.44948974278)


def test_simulate_pcount_and_records_reproducible(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        code, out, _ = run(capsys, "simulate", "pcount", "--n", "5", "--k", "16", "--p", "2",
                           "--tbits", "3", "--seed", "4", "--trials", "500", "--out", str(path))
        assert code == 0
    assert "depth=7" in out and "exact_success=1.000000000" in out
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_simulate_pcount_indivisible(capsys):
    code, _, err = run(capsys, "simulate", "pcount", "--n", "4", "--k", "3", "--p", "2")
    assert code == 2 and "IndivisibleParameters" in err


def read_rows(text):
    rows = list(csv.reader(text.splitlines()))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    return [dict(zip(rows[0], r)) for r in rows[1:]]


def test_sweep_theorem3_column(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "2", "--k", "1", "--eps", "1/1", "--p", "1,2,4")
    assert code == 0
    rows = read_rows(out)
    assert [float(r["thm3"]) for r in rows] == pytest.approx([2.0, 1.414213562, 1.0], abs=1e-9)


def test_sweep_spectral_dominates(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--n", "2..3", "--k", "1..2", "--eps", "1/1", "--p", "1", "--out", str(path))
    assert code == 0
    rows = read_rows(path.read_text())
    assert len(rows) == 4
    assert [(r["n"], r["K"]) for r in rows] == [("2", "1"), ("2", "2"), ("3", "1"), ("3", "2")]
    assert all(float(r["thm1_ratio"]) >= float(r["thm2_enum"]) - 1e-9 for r in rows)


def test_sweep_skips_invalid_points(capsys, caplog):
    code, out, _ = run(capsys, "sweep", "--n", "2", "--k", "1..3", "--eps", "1/1", "--p", "1")
    assert code == 0
    assert len(read_rows(out)) == 2
    assert "Overflow" in caplog.text


def test_sweep_empty(capsys):
    code, _, _ = run(capsys, "sweep", "--n", "2", "--k", "1", "--eps", "1/1", "--p", "")
    assert code == 2


def test_sweep_row_fields_match_columns():
    import dataclasses
    assert tuple(f.name for f in dataclasses.fields(SweepRow)) == SWEEP_COLUMNS


def test_parse_int_range():
    assert parse_int_range("1..3,8,2") == [1, 2, 3, 8]
    assert parse_int_range("") == []
