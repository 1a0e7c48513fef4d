import csv
import io
import json
import subprocess
import sys

import pytest

from zipstrata.canonical import DEFAULT_BUDGET, canonical_data, canonical_parabolic_scan, stabilizer_dimension
from zipstrata.cli import (
    EXIT_BAD_W, EXIT_CONFIG, EXIT_FAIL, EXIT_OK, EXIT_THEOREM, decode_flag,
    decode_parabolic, decode_report, decode_stratum, main,
)
from zipstrata.dieudonne import canonical_flag
from zipstrata.rootzip import enumerate_strata, gl_zip_datum
from zipstrata.weyl import Permutation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_strata_examples(capsys):
    code, doc = run_json(capsys, "strata", "--n", "2", "--d", "1")
    assert code == EXIT_OK
    assert [r["dimension"] for r in doc["rows"]] == [3, 4]
    code, doc = run_json(capsys, "strata", "--n", "4", "--d", "2")
    assert code == EXIT_OK and len(doc["rows"]) == 6
    code, doc = run_json(capsys, "strata", "--n", "3", "--d", "1")
    row = doc["rows"][0]
    assert row["w"] == "1,2,3" and row["dimension"] == 7 and row["stabilizer_dim"] == 2
    assert row["a1_order"] == 7
    assert set(doc) == {"config", "rows", "checks"}
    assert all(c["pass"] for c in doc["checks"])


def test_strata_rows_round_trip(capsys):
    _, doc = run_json(capsys, "strata", "--n", "4", "--d", "2")
    Z = gl_zip_datum(4, 2, 2)
    decoded = sorted((decode_stratum(r) for r in doc["rows"]), key=lambda s: (s.dimension, s.w.images))
    assert decoded == enumerate_strata(Z)
    for r in doc["rows"]:
        assert r["stabilizer_dim"] == stabilizer_dimension(Z, Permutation.parse(r["w"]))


def test_strata_sorted_by_length_then_notation(capsys):
    _, doc = run_json(capsys, "strata", "--n", "5", "--d", "2")
    keys = [(r["length"], tuple(map(int, r["w"].split(",")))) for r in doc["rows"]]
    assert keys == sorted(keys)


def test_canonical_parabolic_examples(capsys):
    code, doc = run_json(capsys, "canonical-parabolic", "--n", "3", "--d", "1", "--w", "1,2,3")
    assert code == EXIT_OK
    assert doc["record"]["Pw"]["type"] == []
    code, doc = run_json(capsys, "canonical-parabolic", "--n", "2", "--d", "1", "--w", "2,1")
    assert code == EXIT_OK and len(doc["record"]["reports"]) == 1


def test_canonical_parabolic_round_trip(capsys):
    code, doc = run_json(capsys, "canonical-parabolic", "--n", "3", "--d", "1", "--w", "2,3,1")
    assert code == EXIT_OK
    Z = gl_zip_datum(3, 1, 2)
    w = Permutation.parse("2,3,1")
    Pw, cert = canonical_parabolic_scan(Z, w, DEFAULT_BUDGET)
    assert decode_parabolic(doc["record"]["Pw"]) == Pw == canonical_data(Z, w).Pw
    assert tuple(decode_report(r) for r in doc["record"]["reports"]) == cert.reports


def test_canonical_parabolic_reports_theorem_failures(capsys):
    # (4,2), w = id: criterion (ii) holds at ^zB but not at the two middle parabolics
    code, doc = run_json(capsys, "canonical-parabolic", "--n", "4", "--d", "2", "--w", "1,2,3,4")
    assert code == EXIT_THEOREM
    assert doc["record"]["Pw"]["type"] == [1, 3]
    failed = {c["name"] for c in doc["checks"] if not c["pass"]}
    assert failed == {"exact_ii"}


def test_canonical_flag_examples(capsys):
    code, doc = run_json(capsys, "canonical-flag", "--n", "3", "--d", "1", "--w", "1,2,3")
    assert code == EXIT_OK
    assert doc["record"]["flag"]["chain"] == [[3], [3, 1], [3, 1, 2]]
    assert doc["record"]["agreement"] is True
    _, doc = run_json(capsys, "canonical-flag", "--n", "2", "--d", "1", "--w", "2,1")
    assert doc["record"]["flag"]["interior"] == [[2]]
    _, doc = run_json(capsys, "canonical-flag", "--n", "4", "--d", "2", "--w", "1,2,3,4")
    assert doc["record"]["flag"]["interior"] == [[3, 4]]
    assert doc["record"]["flag"]["block_sizes"] == [2, 2]


def test_canonical_flag_round_trip(capsys):
    _, doc = run_json(capsys, "canonical-flag", "--n", "4", "--d", "2", "--w", "2,3,1,4")
    Z = gl_zip_datum(4, 2, 2)
    assert decode_flag(doc["record"]["flag"]) == canonical_flag(Z, Permutation.parse("2,3,1,4"))


def test_verify_n3_reports_each_check(capsys):
    code, doc = run_json(capsys, "verify", "--n", "3")
    names = {c["name"]: c["pass"] for c in doc["checks"]}
    assert names["flag_stabilizer_equals_Pw"] and names["canonical_flag_matches_exhaustive"]
    assert names["theorem_uniqueness_scan"]
    # the two forms of coarse closure already disagree at n = 3
    assert not names["coarse_closure_routes_agree"]
    assert code == EXIT_FAIL


@pytest.mark.parametrize("argv", [
    ["strata", "--n", "3", "--d", "1", "--p", "4"],
    ["strata", "--n", "3", "--d", "3"],
    ["strata", "--n", "9", "--d", "1"],
    ["strata", "--n", "3"],
    ["canonical-flag", "--n", "3", "--d", "1"],
    ["strata", "--n", "3", "--d", "1", "--budget", "-1"],
    ["nonsense"],
])
def test_bad_config_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG
    assert err


@pytest.mark.parametrize("w", ["2,1,3", "1,2", "1,1,2", "x"])
def test_bad_w_exits_3(capsys, w):
    code, _, err = run(capsys, "canonical-parabolic", "--n", "3", "--d", "1", "--w", w)
    assert code == EXIT_BAD_W
    assert "error" in err


def test_output_is_deterministic(capsys):
    argv = ["canonical-parabolic", "--n", "4", "--d", "1", "--w", "1,3,4,2"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_csv_output(capsys):
    code, out, _ = run(capsys, "strata", "--n", "3", "--d", "1", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["w"] for r in rows] == ["1,2,3", "1,3,2", "2,3,1"]
    code, out, _ = run(capsys, "canonical-flag", "--n", "3", "--d", "1", "--w", "1,2,3", "--format", "csv")
    assert out.splitlines()[0] == "member,position"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zipstrata.cli", "strata", "--n", "2", "--d", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["config"]["n"] == 2
