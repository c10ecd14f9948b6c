import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from midfdr.cli import main
from midfdr.tables import CountRow, CountTable, IngestError, RunReport, ingest, run_tests

DATA = Path(__file__).parent / "data"


def write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


@pytest.fixture
def small_bt(tmp_path):
    return write(tmp_path, "id,c1,c2\na,0,4\nb,2,2\nc,0,6\n")


def test_ingest_fixture_filtering():
    assert len(ingest(DATA / "synthetic_118.csv")) == 118
    t = ingest(DATA / "synthetic_118.csv", min_total=2)
    assert (len(t), t.removed, t.family) == (68, 50, "fet")


def test_ingest_idempotent_and_ordered(small_bt):
    a, b = ingest(small_bt), ingest(small_bt)
    assert a.rows == b.rows
    assert [r.id for r in a.rows] == ["a", "b", "c"]


@pytest.mark.parametrize(
    "body,needle",
    [
        ("id,c1,c2\na,1,2\nb,-1,3\n", "row 2"),
        ("id,c1,c2\na,1,2\na,1,3\n", "duplicate"),
        ("id,c1,c2\na,x,2\n", "row 1"),
        ("id,c1,c2\na,1\n", "row 1"),
        ("id,c1,c2,N1,N2\na,5,1,4,4\n", "exceed"),
        ("id,x,y\na,1,2\n", "header"),
        ("", "empty"),
    ],
)
def test_ingest_errors(tmp_path, body, needle):
    with pytest.raises(IngestError, match=needle):
        ingest(write(tmp_path, body))


def test_run_tests_hand_example(small_bt):
    rep = run_tests(ingest(small_bt), 0.05, ["bh", "bh-midp"])
    assert rep.conventional == [Fraction(1, 8), 1, Fraction(1, 32)]
    assert rep.mid == [Fraction(1, 16), Fraction(13, 16), Fraction(1, 64)]
    # 1/32 > 0.05/3, so BH rejects nothing; 1/64 <= 0.05/3
    assert rep.rejected["BH"] == [False, False, False]
    assert rep.rejected["BH-Midp"] == [False, False, True]
    assert rep.discoveries == {"BH": 0, "BH-Midp": 1}


def test_run_tests_empty_table():
    rep = run_tests(CountTable([]), 0.05, ["bh", "bh-midp", "abh"])
    assert rep.discoveries == {"BH": 0, "BH-Midp": 0, "aBH": 0}


def test_run_tests_flags(tmp_path):
    t = ingest(write(tmp_path, "id,c1,c2,N1,N2\na,0,0,5,5\nb,1,0,5,5\nc,4,0,5,5\n"))
    rep = run_tests(t, 0.05)
    assert rep.flags == {"a": "untestable", "b": "dirac"}
    assert rep.conventional[0] == 1 and rep.mid[1] == Fraction(1, 2)


def test_sarp_needs_seed(small_bt):
    with pytest.raises(ValueError, match="seed"):
        run_tests(ingest(small_bt), 0.05, ["sarp"])
    a = run_tests(ingest(small_bt), 0.05, ["sarp"], seed=3)
    assert a == run_tests(ingest(small_bt), 0.05, ["sarp"], seed=3)


def test_report_json_round_trip():
    t = ingest(DATA / "synthetic_118.csv", 2)
    rep = run_tests(t, 0.1, ["bh", "bh-midp", "abh", "abh-midp", "sarp"], seed=1)
    assert RunReport.from_json(rep.to_json()) == rep


counts = st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=25)


@settings(max_examples=60, suppress_health_check=[HealthCheck.too_slow])
@given(counts, st.sampled_from([0.01, 0.05, 0.2]))
def test_midp_discoveries_dominate(rows, alpha):
    table = CountTable([CountRow(str(i), a, b) for i, (a, b) in enumerate(rows)])
    rep = run_tests(table, alpha)
    assert rep.discoveries["BH-Midp"] >= rep.discoveries["BH"]
    assert all(m <= c for m, c in zip(rep.rejected["BH"], rep.rejected["BH-Midp"]))


def test_cli_bounds_witness(capsys):
    assert main(["bounds", "--family", "bt", "--n", "120", "--alpha", "0.05", "--pi0", "0.2", "--m0", "2"]) == 0
    out = capsys.readouterr().out
    assert "left 0.01896, right 0.02000, HOLDS" in out


def test_cli_oracle_example(capsys):
    assert main(["oracle", "--family", "bt", "--n", "8", "--m", "1", "--alpha", "0.004", "--flavor", "mid"]) == 0
    out = capsys.readouterr().out
    assert "exact FDR 1/128 = 0.0078125, exceeds alpha 0.004" in out


def test_cli_oracle_json(capsys):
    assert main(["oracle", "--family", "fet", "--N", "4", "--M", "3", "--m", "2", "--m1", "1", "--format", "json"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["outcomes_enumerated"] == 4 ** 3


def test_cli_test_and_pvalues(small_bt, tmp_path, capsys):
    assert main(["test", "--input", str(small_bt)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "id,conventional,mid,flag,BH,BH-Midp"
    assert lines[3].endswith(",0,1")
    out = tmp_path / "p.json"
    assert main(["pvalues", "--input", str(small_bt), "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["tests"][2]["mid"] == "1/64"


def test_cli_simulate(tmp_path, capsys):
    cfg = write(tmp_path, "[tiny]\nm = 50\nreps = 2\nseed = 1\n", "c.ini")
    assert main(["simulate", "--config", str(cfg)]) == 0
    first = capsys.readouterr().out
    assert first.splitlines()[0].startswith("scenario,method,fdr")
    assert main(["simulate", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out == first


@pytest.mark.parametrize(
    "argv",
    [
        ["test", "--input", "/nonexistent.csv"],
        ["test", "--input", "{small}", "--method", "sarp"],
        ["bounds", "--family", "bt", "--pi0", "0.2", "--m0", "2"],
        ["bounds", "--family", "bt", "--n", "10", "--N", "5", "--pi0", "0.2", "--m0", "2"],
        ["oracle", "--family", "bt", "--n", "30", "--m", "6", "--cap", "1000"],
    ],
)
def test_cli_errors_exit_nonzero(argv, small_bt, capsys):
    argv = [a.replace("{small}", str(small_bt)) for a in argv]
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_cli_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        main(["pvalues", "--bogus"])
    assert exc.value.code != 0
