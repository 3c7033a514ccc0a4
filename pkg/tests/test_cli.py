import csv
import io
import json
import os
import subprocess
import sys

import pytest

from hypercover.cli import main, parse_sweep
from hypercover.union_cover import CSV_HEADER, rows_from_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_geometry_table7(capsys):
    code, out, _ = run(capsys, "geometry", "--table7")
    assert code == 0
    table = rows(out)
    assert len(table) == 18
    assert {r["d"] for r in table} >= {"1", "10", "1000"}


def test_geometry_values(capsys):
    _, out, _ = run(capsys, "geometry", "--ball-volume", "--dim", "100")
    assert float(rows(out)[0]["value"]) == pytest.approx(2.368e-40, rel=5e-3)
    _, out, _ = run(capsys, "geometry", "--cap", "--dim", "3", "--r", "1", "--h", "0.5")
    assert float(rows(out)[0]["value"]) == pytest.approx(0.654498, abs=1e-6)
    code, out, _ = run(capsys, "geometry", "--unit-radius", "--dim", "2", "--format", "json")
    assert json.loads(out)[0]["value"] == pytest.approx(0.5641895835)


def test_geometry_usage_errors(capsys):
    assert run(capsys, "geometry")[0] == 2
    assert run(capsys, "geometry", "--cap", "--dim", "3")[0] == 2


def test_local_cover_methods(capsys):
    values = {}
    for method in ("normal", "petrov", "adjusted", "cf"):
        code, out, _ = run(capsys, "local-cover", "--dim", "10", "--z-norm", "0", "--r", "1.2", "--method", method)
        assert code == 0
        values[method] = float(rows(out)[0]["value"])
    code, out, _ = run(capsys, "local-cover", "--dim", "10", "--z-norm", "0", "--r", "1.2", "--method", "mc",
                       "--samples", "200000", "--seed", "7")
    row = rows(out)[0]
    assert tuple(row) == CSV_HEADER
    assert 0 <= values["adjusted"] <= 1
    assert abs(values["adjusted"] - float(row["value"])) <= max(0.005, 3 * float(row["stderr"]))
    assert abs(values["cf"] - float(row["value"])) <= 3 * float(row["stderr"])


def test_local_cover_z_coords_and_errors(capsys):
    code, out, _ = run(capsys, "local-cover", "--dim", "2", "--z-coords", "0,0", "--r", "1", "--method", "cf")
    assert float(rows(out)[0]["value"]) == pytest.approx(0.785398, abs=1e-6)
    assert run(capsys, "local-cover", "--dim", "3", "--z-coords", "0,0", "--r", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["local-cover", "--dim", "3", "--z-norm", "0", "--r", "1", "--method", "bogus"])
    assert exc.value.code == 2
    assert run(capsys, "local-cover", "--dim", "31", "--z-norm", "0", "--r", "1", "--method", "cf")[0] == 2


def test_local_cover_mc_reproducible(capsys):
    args = ("local-cover", "--dim", "10", "--z-norm", "0", "--r", "1.2", "--method", "mc", "--samples", "100000",
            "--seed", "7")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_cover_published_cell(capsys):
    code, out, _ = run(capsys, "cover", "--d", "10", "--n", "64", "--scheme", "s1", "--delta", "0.70", "--r",
                       "1.632", "--samples", "20000", "--replications", "10")
    assert code == 0
    assert abs(float(rows(out)[0]["value"]) - 0.90) <= 0.01


def test_cover_sweep_argmax(capsys):
    code, out, _ = run(capsys, "cover", "--d", "10", "--n", "128", "--scheme", "s1", "--sweep-delta",
                       "0.1:1.0:0.02", "--r", "1.520", "--samples", "5000", "--replications", "10")
    assert code == 0
    parsed = rows_from_csv(out)
    assert len(parsed) == 46
    best = max(parsed, key=lambda r: r.value)
    assert abs(best.delta - 0.78) <= 0.06
    from hypercover.union_cover import rows_to_csv
    assert rows_to_csv(parsed) == out


def test_cover_target_and_optimize(capsys):
    code, out, _ = run(capsys, "cover", "--d", "10", "--n", "128", "--delta", "0.78", "--target", "0.9",
                       "--method", "approx2")
    assert code == 0
    assert float(rows(out)[0]["r"]) == pytest.approx(1.520, abs=0.01)
    code, out, _ = run(capsys, "cover", "--d", "10", "--n", "1024", "--r", "1.195", "--optimize-delta",
                       "--method", "approx2", "--format", "json")
    assert abs(json.loads(out)["rows"][0]["delta"] - 0.90) <= 0.04


def test_cover_usage_errors(capsys):
    assert run(capsys, "cover", "--d", "10", "--n", "64", "--delta", "0.7")[0] == 2
    assert run(capsys, "cover", "--d", "10", "--n", "64", "--delta", "1.7", "--r", "1")[0] == 2
    assert run(capsys, "cover", "--d", "10", "--n", "64", "--scheme", "s4", "--delta", "0.5", "--r", "1")[0] == 2
    assert run(capsys, "cover", "--d", "10", "--n", "64", "--sweep-delta", "1:0:0.1", "--r", "1")[0] == 2
    assert run(capsys, "cover", "--d", "10", "--n", "48", "--scheme", "s3", "--delta", "0.5", "--r", "1")[0] == 2


def test_cube_cover(capsys):
    code, out, _ = run(capsys, "cube-cover", "--d", "1", "--n", "1", "--r", "0.5", "--delta", "1")
    assert code == 0 and float(rows(out)[0]["value"]) == pytest.approx(0.4375)
    assert rows(out)[0]["scheme"] == "cube-uniform"
    code, out, _ = run(capsys, "cube-cover", "--d", "5", "--n", "8", "--r", "0.6", "--delta", "0.7", "--method",
                       "mc", "--samples", "5000", "--replications", "3")
    assert code == 0
    assert run(capsys, "cube-cover", "--d", "5", "--n", "5000", "--r", "0.6", "--delta", "0.7")[0] == 2


def test_quantize(capsys):
    code, out, _ = run(capsys, "quantize", "--d", "10", "--n", "64", "--scheme", "s1", "--minimize-delta",
                       "--samples", "20000", "--replications", "10")
    row = rows(out)[0]
    assert abs(float(row["value"]) - 4.153) <= 0.01 * 4.153
    assert abs(float(row["delta"]) - 0.68) <= 0.04
    code, out, _ = run(capsys, "quantize", "--d", "10", "--n", "1", "--method", "approx", "--delta", "0")
    assert float(rows(out)[0]["value"]) == pytest.approx(10 / 3)
    assert run(capsys, "quantize", "--d", "10", "--n", "64", "--scheme", "s7", "--method", "approx",
               "--delta", "0.5")[0] == 2


def test_design_output(capsys, tmp_path):
    target = tmp_path / "design.csv"
    code, _, _ = run(capsys, "design", "--d", "3", "--n", "5", "--scheme", "s6", "--delta", "1.2", "--seed", "4",
                     "--out", str(target))
    assert code == 0
    text = target.read_text()
    assert text.splitlines()[0] == "x1,x2,x3"
    assert len(text.splitlines()) == 6
    code, out, _ = run(capsys, "design", "--d", "3", "--n", "4", "--scheme", "s7", "--delta", "1", "--format",
                       "json")
    assert json.loads(out)["points"][0] == [-1.0, -1.0, -1.0]


def test_table7_command(capsys):
    code, out, _ = run(capsys, "table", "--id", "7")
    assert code == 0
    statuses = {r["d"]: r["status"] for r in rows(out)}
    assert statuses["10"] == "PASS" and statuses["1000"] == "PASS"


def test_table4_single_cell(capsys):
    code, out, _ = run(capsys, "table", "--id", "4", "--schemes", "s1", "--ns", "64")
    assert code == 0
    (cell,) = rows(out)
    assert cell["status"] == "PASS"


def test_table_bad_scheme(capsys):
    assert run(capsys, "table", "--id", "1", "--schemes", "s9")[0] == 2


def test_parse_sweep():
    assert parse_sweep("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert parse_sweep("0.5:0.5:0.1") == [0.5]


def _subprocess(argv, threads):
    env = dict(os.environ, HYPERCOVER_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "hypercover.cli", *argv], env=env, capture_output=True,
                          check=True).stdout


@pytest.mark.parametrize("argv", [
    ["cover", "--d", "8", "--n", "32", "--delta", "0.7", "--r", "1.3", "--samples", "30000",
     "--replications", "3", "--seed", "11"],
    ["quantize", "--d", "6", "--n", "16", "--sweep-delta", "0.4:0.8:0.2", "--samples", "20000",
     "--replications", "2", "--format", "json"],
])
def test_byte_identical_across_thread_counts(argv):
    assert _subprocess(argv, 1) == _subprocess(argv, 4)
