import io
import os
import subprocess
import sys

import pytest

from acotsp.cli import main
from acotsp.records import read_run_csv
from acotsp.tsplib import corpus_path

TRIANGLE = """NAME : tri
TYPE : TSP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 3 4
EOF
"""

SQUARE = """NAME : square
TYPE : TSP
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 0 1
3 1 1
4 1 0
EOF
"""

QUICK = """[bench]
instances = corpus:burma14, corpus:ulysses16
variants = AS, ASRank, MMAS, ACS
repetitions = 10
base_seed = 5
iterations = 10
ants = 8
"""


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "tri.tsp").write_text(TRIANGLE)
    (tmp_path / "square.tsp").write_text(SQUARE)
    (tmp_path / "quick.ini").write_text(QUICK)
    return tmp_path


def parameters_line(output):
    line = next(x for x in output.splitlines() if x.startswith("parameters:"))
    return dict(item.split("=", 1) for item in line.split()[1:])


def test_solve_is_deterministic():
    args = ("solve", corpus_path("burma14"), "--variant", "acs", "--seed", "7", "--iterations", "15")
    code1, out1 = call(*args)
    code2, out2 = call(*args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "best_length:" in out1 and "tour:" in out1


def test_solve_echoes_default_parameters():
    _, out = call("solve", corpus_path("burma14"), "--variant", "AS", "--iterations", "2")
    params = parameters_line(out)
    assert (params["rho"], params["alpha"], params["beta"], params["tau0"]) == \
        ("0.5", "1.0", "1.0", "0.1")
    assert params["num_ants"] == "50"
    _, out = call("solve", corpus_path("burma14"), "--variant", "mmas", "--iterations", "2")
    assert parameters_line(out)["rho"] == "0.1"


def test_solve_three_cities_matches_the_oracle(files):
    _, solved = call("solve", str(files / "tri.tsp"), "--iterations", "3", "--ants", "6")
    _, exact = call("oracle", str(files / "tri.tsp"))
    assert "best_length: 12.0" in solved
    assert "optimal_length: 12.0" in exact


def test_solve_writes_one_row_csv(files):
    target = files / "run.csv"
    code, _ = call("solve", corpus_path("burma14"), "--iterations", "3", "--output", str(target))
    assert code == 0
    rows = read_run_csv(target.read_bytes())
    assert len(rows) == 1 and rows[0].instance == "burma14" and rows[0].iterations == 3


def test_oracle_on_unit_square(files):
    code, out = call("oracle", str(files / "square.tsp"))
    assert code == 0
    assert "optimal_length: 4.0" in out
    order = out.split("order:")[1].split("\n")[0].split()
    assert sorted(order) == ["1", "2", "3", "4"]


def test_unknown_variant_is_a_usage_error(capsys):
    code, _ = call("solve", corpus_path("burma14"), "--variant", "PACS")
    assert code == 1
    assert capsys.readouterr().err.startswith("error: usage:")


def test_bad_parameter_is_a_usage_error(capsys):
    code, _ = call("solve", corpus_path("burma14"), "--rho", "1.5")
    assert code == 1
    assert capsys.readouterr().err.startswith("error: usage:")


def test_missing_subcommand_is_a_usage_error():
    assert call()[0] == 1


def test_parse_failure_exits_two(files, capsys):
    broken = files / "broken.tsp"
    broken.write_text(TRIANGLE.replace("DIMENSION : 3\n", ""))
    code, _ = call("solve", str(broken))
    err = capsys.readouterr().err
    assert code == 2
    assert err.startswith("error: malformed-header:")
    assert err.count("\n") == 1


def test_missing_file_exits_two(files, capsys):
    assert call("solve", str(files / "nope.tsp"))[0] == 2
    assert capsys.readouterr().err.startswith("error: io:")


def test_oversize_oracle_names_the_limit(capsys):
    code, _ = call("oracle", corpus_path("eil51"))
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error: size-limit:")
    assert "n <= 20" in err


def test_bench_then_report(files):
    out_dir = files / "out"
    code, printed = call("bench", str(files / "quick.ini"), "--output-dir", str(out_dir))
    assert code == 0
    assert sorted(os.listdir(out_dir)) == ["report.json", "report.md", "runs.csv"]
    rows = read_run_csv((out_dir / "runs.csv").read_bytes())
    assert len(rows) == 80
    assert (out_dir / "report.md").read_text() == printed
    code, rendered = call("report", str(out_dir / "runs.csv"))
    assert code == 0
    assert rendered == (out_dir / "report.md").read_text()
    target = files / "again.json"
    assert call("report", str(out_dir / "runs.csv"), "--format", "json",
                "--output", str(target))[0] == 0
    assert target.read_text() == (out_dir / "report.json").read_text()


def test_bench_rejects_zero_jobs(files):
    assert call("bench", str(files / "quick.ini"), "--output-dir", str(files), "--jobs", "0")[0] == 1


def test_console_entry_point_runs(files):
    proc = subprocess.run([sys.executable, "-m", "acotsp.cli", "oracle", str(files / "square.tsp")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "optimal_length: 4.0" in proc.stdout
