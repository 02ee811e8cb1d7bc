import csv
import io
import json
import math
from pathlib import Path

import pytest

from hotelling_equicorr.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_analytic_curve_defaults(capsys):
    code, out, _ = run(capsys, "analytic-curve")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 5 * (10 + 15 + 25 + 40)
    assert list(rows[0]) == ["n", "rho", "m", "t_star_squared"]


def test_analytic_curve_values(capsys):
    _, out, _ = run(capsys, "analytic-curve", "--n", "2", "7", "--rho", "0.9", "0")
    rows = parse_csv(out)
    first = rows[0]
    assert (first["n"], first["rho"], first["m"]) == ("2", "0.90000000000000002", "1")
    assert float(first["t_star_squared"]) == pytest.approx(5.2631578947, rel=1e-10)
    for r in rows:
        if float(r["rho"]) == 0.0:
            assert float(r["t_star_squared"]) == int(r["m"])


def test_analytic_curve_shift(capsys):
    _, out, _ = run(capsys, "analytic-curve", "--n", "3", "--rho", "0.5", "--shift", "2",
                    "--format", "json")
    rows = json.loads(out)
    assert rows[0]["t_star_squared"] == pytest.approx(4 * 1.5 / (0.5 * 2.0))


def test_invalid_parameters_exit_2(capsys):
    assert run(capsys, "analytic-curve", "--rho", "1.2")[0] == 2
    assert run(capsys, "ellipse", "--count", "zero")[0] == 2
    code, _, err = run(capsys, "ellipse", "--count", "3")
    assert code == 2 and "count" in err


def test_csv_and_json_agree_bitwise(capsys, tmp_path):
    main(["ellipse", "--rho", "0.9", "0.25", "--count", "12", "--out", str(tmp_path / "e.csv")])
    main(["ellipse", "--rho", "0.9", "0.25", "--count", "12", "--format", "json",
          "--out", str(tmp_path / "e.json")])
    rows = parse_csv((tmp_path / "e.csv").read_text())
    objs = json.loads((tmp_path / "e.json").read_text())
    assert len(rows) == len(objs) == 26
    for r, o in zip(rows, objs):
        for key, value in o.items():
            if value is None:
                assert r[key] == ""
            elif isinstance(value, float):
                assert float(r[key]) == value
            else:
                assert r[key] == str(value)


def test_ellipse_output(capsys):
    _, out, _ = run(capsys, "ellipse", "--rho", "0.9", "0", "--count", "16")
    rows = parse_csv(out)
    summary = [r for r in rows if r["record"] == "summary"]
    assert float(summary[0]["major_radius"]) == pytest.approx(3.162, abs=5e-4)
    assert float(summary[0]["minor_radius"]) == pytest.approx(0.725, abs=5e-4)
    for r in rows:
        if r["record"] == "point":
            assert abs(float(r["residual"])) <= 1e-10
            if float(r["rho"]) == 0:
                assert math.hypot(float(r["a1"]), float(r["a2"])) == pytest.approx(1.0, abs=1e-15)


def test_simulate_curve_small(capsys):
    code, out, _ = run(capsys, "simulate-curve", "--n", "3", "--rho", "0.5", "--ns-factor", "2",
                       "--reps", "300", "--seed", "4")
    assert code == 0
    rows = parse_csv(out)
    assert [int(r["m"]) for r in rows] == [1, 2, 3]
    for r in rows:
        assert abs(float(r["mean_t2_over_k"]) - float(r["expected_t2_over_k"])) <= \
            4 * math.sqrt(float(r["variance_of_mean"]))


def test_simulate_curve_rejects_degenerate_grid(capsys):
    code, _, err = run(capsys, "simulate-curve", "--n", "10", "--ns-factor", "0.5", "--reps", "10")
    assert code == 2 and "n_x" in err


def test_table1_small(capsys):
    code, out, _ = run(capsys, "table1", "--rho", "0.3", "--ns", "5", "10", "--reps", "200")
    assert code == 0
    rows = parse_csv(out)
    assert sum(r["record"] == "cell" for r in rows) == 20
    variances = [r for r in rows if r["record"] == "variance"]
    assert [int(r["ns"]) for r in variances] == [5, 10]
    assert float(variances[0]["variance_of_mean"]) > float(variances[1]["variance_of_mean"])


def test_table1_rejects_tiny_ns(capsys):
    assert run(capsys, "table1", "--ns", "2", "--reps", "10")[0] == 2


def fixture(name):
    return str(FIXTURES / name)


def test_test_identical_files(capsys):
    code, out, _ = run(capsys, "test", "--x", fixture("null_x.csv"), "--y", fixture("null_x.csv"),
                       "--format", "json")
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["t2"] == 0.0 and rec["p_value"] == 1.0


def test_test_golden_null_fixture(capsys):
    # frozen output of the exact test on the shipped null dataset
    code, out, _ = run(capsys, "test", "--x", fixture("null_x.csv"), "--y", fixture("null_y.csv"),
                       "--format", "json")
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["p_value"] == 0.9418448060535491
    assert rec["t2"] == 0.12326767267886254
    assert (rec["df1"], rec["df2"], rec["method"]) == (2, 37, "exact_f")


def test_test_text_report(capsys):
    code, out, _ = run(capsys, "test", "--x", fixture("null_x.csv"), "--y", fixture("null_y.csv"))
    assert code == 0
    assert "p_value" in out and "exact_f" in out


def test_test_degenerate_without_flag_exit_4(capsys):
    code, _, err = run(capsys, "test", "--x", fixture("degenerate_x.csv"),
                       "--y", fixture("degenerate_y.csv"))
    assert code == 4
    assert "--permutation-reps" in err


def test_test_degenerate_with_flag(capsys):
    code, out, _ = run(capsys, "test", "--x", fixture("degenerate_x.csv"),
                       "--y", fixture("degenerate_y.csv"), "--permutation-reps", "500",
                       "--format", "json")
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["method"] == "permutation"
    assert 1 / 501 <= rec["p_value"] <= 1.0


def test_test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n")
    code, _, err = run(capsys, "test", "--x", str(bad), "--y", fixture("null_y.csv"))
    assert code == 2 and "row 2, column 2" in err

    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    code, _, err = run(capsys, "test", "--x", str(ragged), "--y", fixture("null_y.csv"))
    assert code == 2 and "row 2" in err

    wide = tmp_path / "wide.csv"
    wide.write_text("1,2,3\n4,5,6\n7,8,8\n")
    code, _, err = run(capsys, "test", "--x", str(wide), "--y", fixture("null_y.csv"))
    assert code == 2 and "columns" in err

    code, _, err = run(capsys, "test", "--x", str(tmp_path / "missing.csv"),
                       "--y", fixture("null_y.csv"))
    assert code == 2


def test_test_too_few_permutations(capsys):
    code, _, _ = run(capsys, "test", "--x", fixture("null_x.csv"), "--y", fixture("null_y.csv"),
                     "--permutation-reps", "50")
    assert code == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "curve.csv"
    assert main(["analytic-curve", "--n", "2", "--rho", "0.3", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().splitlines()[0] == "n,rho,m,t_star_squared"
